#include "smf/ling_report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "smf/error.h"
#include "smf/text_util.h"

namespace smf {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

std::string lower_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

const char* kRecordHeader[] = {
    "pair_id",      "bleu",        "jaccard",     "cosine",     "levenshtein",
    "levenshtein_norm", "rouge1_recall", "rouge1_precision", "rouge1_f1",
    "rouge2_recall", "rouge2_precision", "rouge2_f1", "rougeL_recall",
    "rougeL_precision", "rougeL_f1", "jaro_winkler"};
constexpr std::size_t kRecordColumns = std::size(kRecordHeader);

void emit_rouge(std::ostream& out, const std::optional<RougeScore>& s) {
  if (s) {
    out << ',' << num(s->recall) << ',' << num(s->precision) << ',' << num(s->f1);
  } else {
    out << ",NA,NA,NA";
  }
}

}  // namespace

std::vector<TranscriptPair> load_transcript_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<TranscriptPair> pairs;
  const std::string ext = lower_ext(path);
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const json j = json::parse(line);
        pairs.push_back({j.at("pair_id").is_string() ? j.at("pair_id").get<std::string>()
                                                     : j.at("pair_id").dump(),
                         j.at("real_text").get<std::string>(),
                         j.at("fake_text").get<std::string>()});
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse,
                    path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return pairs;
  }

  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) return pairs;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < row.size(); ++i) col[row[i]] = i;
  for (const char* name : {"pair_id", "real_text", "fake_text"}) {
    if (!col.count(name)) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": CSV header lacks column '" + name + "'");
    }
  }
  while (reader.next(row)) {
    if (row.size() != col.size()) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(reader.line()) +
                                         ": expected " + std::to_string(col.size()) +
                                         " fields, got " + std::to_string(row.size()));
    }
    pairs.push_back({row[col["pair_id"]], row[col["real_text"]], row[col["fake_text"]]});
  }
  return pairs;
}

void write_records_csv(std::ostream& out, std::span<const SimilarityRecord> records,
                       std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (std::size_t i = 0; i < kRecordColumns; ++i) {
    out << (i ? "," : "") << kRecordHeader[i];
  }
  out << '\n';
  for (const auto& r : records) {
    out << csv_escape(r.pair_id) << ',' << num(r.bleu) << ',' << num(r.jaccard) << ','
        << num(r.cosine) << ',' << r.levenshtein << ',' << num(r.levenshtein_norm);
    emit_rouge(out, r.rouge1);
    emit_rouge(out, r.rouge2);
    emit_rouge(out, r.rouge_l);
    out << ',' << num(r.jaro_winkler) << '\n';
  }
}

std::vector<SimilarityRecord> read_records_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  std::vector<SimilarityRecord> records;
  if (!reader.next(row)) return records;
  if (row.size() != kRecordColumns || row[0] != "pair_id") {
    throw Error(ErrorCode::kParse, "records CSV has an unexpected header");
  }
  while (reader.next(row)) {
    const int line = reader.line();
    if (row.size() != kRecordColumns) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                         ": expected " + std::to_string(kRecordColumns) +
                                         " fields");
    }
    auto d = [&](std::size_t i) { return parse_double(row[i], line); };
    auto rouge = [&](std::size_t i) -> std::optional<RougeScore> {
      if (row[i] == "NA") return std::nullopt;
      return RougeScore{d(i), d(i + 1), d(i + 2)};
    };
    SimilarityRecord r;
    r.pair_id = row[0];
    r.bleu = d(1);
    r.jaccard = d(2);
    r.cosine = d(3);
    r.levenshtein = static_cast<std::size_t>(d(4));
    r.levenshtein_norm = d(5);
    r.rouge1 = rouge(6).value_or(RougeScore{});
    r.rouge2 = rouge(9);
    r.rouge_l = rouge(12).value_or(RougeScore{});
    r.jaro_winkler = d(15);
    records.push_back(std::move(r));
  }
  return records;
}

const MetricDistribution& DistributionReport::at(std::string_view metric) const {
  for (const auto& m : metrics) {
    if (m.metric == metric) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "report has no metric '" + std::string(metric) + "'");
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

MetricDistribution summarize(std::string metric, std::span<const double> values,
                             double range_lo, double range_hi, int bins) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no values for metric " + metric);
  }
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin");
  if (!(range_hi > range_lo)) {
    throw Error(ErrorCode::kInvalidArgument, "histogram range is empty");
  }
  MetricDistribution d;
  d.metric = std::move(metric);
  d.range_lo = range_lo;
  d.range_hi = range_hi;
  d.count = values.size();

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  d.min = sorted.front();
  d.max = sorted.back();
  d.q1 = quantile_sorted(sorted, 0.25);
  d.median = quantile_sorted(sorted, 0.5);
  d.q3 = quantile_sorted(sorted, 0.75);
  double total = 0.0;
  for (double v : sorted) total += v;
  d.mean = total / static_cast<double>(sorted.size());

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double width = (range_hi - range_lo) / bins;
  for (double v : sorted) {
    long idx = static_cast<long>(std::floor((v - range_lo) / width));
    idx = std::clamp<long>(idx, 0, bins - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }
  d.histogram.reserve(counts.size());
  for (std::size_t c : counts) {
    d.histogram.push_back(static_cast<double>(c) / static_cast<double>(sorted.size()));
  }
  return d;
}

DistributionReport aggregate(std::span<const SimilarityRecord> records, int bins) {
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "no records to aggregate");
  std::map<std::string, std::vector<double>> columns;
  std::vector<std::string> order = {
      "bleu",           "jaccard",          "cosine",        "levenshtein",
      "levenshtein_norm", "rouge1_f1",      "rouge1_recall", "rouge1_precision",
      "rouge2_f1",      "rouge2_recall",    "rouge2_precision", "rougeL_f1",
      "rougeL_recall",  "rougeL_precision", "jaro_winkler"};
  for (const auto& r : records) {
    columns["bleu"].push_back(r.bleu);
    columns["jaccard"].push_back(r.jaccard);
    columns["cosine"].push_back(r.cosine);
    columns["levenshtein"].push_back(static_cast<double>(r.levenshtein));
    columns["levenshtein_norm"].push_back(r.levenshtein_norm);
    columns["rouge1_f1"].push_back(r.rouge1.f1);
    columns["rouge1_recall"].push_back(r.rouge1.recall);
    columns["rouge1_precision"].push_back(r.rouge1.precision);
    if (r.rouge2) {
      columns["rouge2_f1"].push_back(r.rouge2->f1);
      columns["rouge2_recall"].push_back(r.rouge2->recall);
      columns["rouge2_precision"].push_back(r.rouge2->precision);
    }
    columns["rougeL_f1"].push_back(r.rouge_l.f1);
    columns["rougeL_recall"].push_back(r.rouge_l.recall);
    columns["rougeL_precision"].push_back(r.rouge_l.precision);
    columns["jaro_winkler"].push_back(r.jaro_winkler);
  }
  DistributionReport report;
  for (const auto& name : order) {
    const auto& values = columns[name];
    if (values.empty()) continue;  // e.g. no pair long enough for ROUGE-2
    double hi = 1.0;
    if (name == "levenshtein") {
      hi = std::max(1.0, *std::max_element(values.begin(), values.end()));
    }
    report.metrics.push_back(summarize(name, values, 0.0, hi, bins));
  }
  return report;
}

void write_report_csv(std::ostream& out, const DistributionReport& report,
                      std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "metric,section,key,value\n";
  for (const auto& m : report.metrics) {
    const std::pair<const char*, double> summary[] = {
        {"count", static_cast<double>(m.count)},
        {"range_lo", m.range_lo},
        {"range_hi", m.range_hi},
        {"min", m.min},
        {"q1", m.q1},
        {"median", m.median},
        {"q3", m.q3},
        {"max", m.max},
        {"mean", m.mean}};
    for (const auto& [key, value] : summary) {
      out << m.metric << ",summary," << key << ',' << num(value) << '\n';
    }
    for (std::size_t i = 0; i < m.histogram.size(); ++i) {
      out << m.metric << ",hist," << i << ',' << num(m.histogram[i]) << '\n';
    }
  }
}

DistributionReport read_report_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  DistributionReport report;
  if (!reader.next(row)) return report;
  if (row.size() != 4 || row[0] != "metric") {
    throw Error(ErrorCode::kParse, "report CSV has an unexpected header");
  }
  std::map<std::string, std::size_t> index;
  while (reader.next(row)) {
    const int line = reader.line();
    if (row.size() != 4) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": expected 4 fields");
    }
    auto [it, inserted] = index.emplace(row[0], report.metrics.size());
    if (inserted) {
      report.metrics.emplace_back();
      report.metrics.back().metric = row[0];
    }
    MetricDistribution& m = report.metrics[it->second];
    const double v = parse_double(row[3], line);
    if (row[1] == "hist") {
      const auto bin = static_cast<std::size_t>(parse_double(row[2], line));
      if (m.histogram.size() <= bin) m.histogram.resize(bin + 1, 0.0);
      m.histogram[bin] = v;
    } else if (row[1] == "summary") {
      const std::string& key = row[2];
      if (key == "count") m.count = static_cast<std::size_t>(v);
      else if (key == "range_lo") m.range_lo = v;
      else if (key == "range_hi") m.range_hi = v;
      else if (key == "min") m.min = v;
      else if (key == "q1") m.q1 = v;
      else if (key == "median") m.median = v;
      else if (key == "q3") m.q3 = v;
      else if (key == "max") m.max = v;
      else if (key == "mean") m.mean = v;
      else throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                              ": unknown summary key '" + key + "'");
    } else {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                         ": unknown section '" + row[1] + "'");
    }
  }
  return report;
}

std::string report_to_json(const DistributionReport& report, std::string_view provenance) {
  json doc;
  if (!provenance.empty()) doc["provenance"] = json::parse(provenance);
  json metrics = json::array();
  for (const auto& m : report.metrics) {
    metrics.push_back({{"metric", m.metric},
                       {"range", {m.range_lo, m.range_hi}},
                       {"count", m.count},
                       {"min", m.min},
                       {"q1", m.q1},
                       {"median", m.median},
                       {"q3", m.q3},
                       {"max", m.max},
                       {"mean", m.mean},
                       {"histogram", m.histogram}});
  }
  doc["metrics"] = std::move(metrics);
  return doc.dump(2);
}

DistributionReport report_from_json(std::string_view text) {
  DistributionReport report;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("metrics")) {
      MetricDistribution m;
      m.metric = j.at("metric").get<std::string>();
      m.range_lo = j.at("range").at(0).get<double>();
      m.range_hi = j.at("range").at(1).get<double>();
      m.count = j.at("count").get<std::size_t>();
      m.min = j.at("min").get<double>();
      m.q1 = j.at("q1").get<double>();
      m.median = j.at("median").get<double>();
      m.q3 = j.at("q3").get<double>();
      m.max = j.at("max").get<double>();
      m.mean = j.at("mean").get<double>();
      m.histogram = j.at("histogram").get<std::vector<double>>();
      report.metrics.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("report JSON: ") + e.what());
  }
  return report;
}

}  // namespace smf
