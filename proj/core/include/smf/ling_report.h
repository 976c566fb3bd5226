#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smf/ling_metrics.h"

namespace smf {

struct TranscriptPair {
  std::string pair_id;
  std::string real_text;
  std::string fake_text;
};

/// CSV with a header naming pair_id, real_text, fake_text (any order), or
/// JSON-lines with those keys. Format is chosen by extension (.csv / .jsonl).
std::vector<TranscriptPair> load_transcript_pairs(const std::filesystem::path& path);

/// One row per record; ROUGE scores as recall/precision/f1 triples, missing
/// ROUGE-2 written as "NA". `comment` becomes a leading "# ..." line.
void write_records_csv(std::ostream& out, std::span<const SimilarityRecord> records,
                       std::string_view comment = {});
std::vector<SimilarityRecord> read_records_csv(std::istream& in);

struct MetricDistribution {
  std::string metric;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::vector<double> histogram;  // mass per bin, sums to 1
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool operator==(const MetricDistribution&) const = default;
};

struct DistributionReport {
  std::vector<MetricDistribution> metrics;

  const MetricDistribution& at(std::string_view metric) const;
  bool operator==(const DistributionReport&) const = default;
};

/// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

/// Histogram (values equal to range_hi land in the last bin) plus summary.
MetricDistribution summarize(std::string metric, std::span<const double> values,
                             double range_lo, double range_hi, int bins);

/// Per-metric distributions: bleu, jaccard, cosine, levenshtein,
/// levenshtein_norm, rouge{1,2,L}_{f1,recall,precision}, jaro_winkler.
/// Levenshtein distance uses [0, max observed]; everything else [0, 1].
DistributionReport aggregate(std::span<const SimilarityRecord> records, int bins = 20);

/// Rows "metric,section,key,value"; section is "summary" or "hist".
void write_report_csv(std::ostream& out, const DistributionReport& report,
                      std::string_view comment = {});
DistributionReport read_report_csv(std::istream& in);

/// `provenance` is a JSON object text merged under the "provenance" key
/// (may be empty).
std::string report_to_json(const DistributionReport& report,
                           std::string_view provenance = {});
DistributionReport report_from_json(std::string_view json);

}  // namespace smf
