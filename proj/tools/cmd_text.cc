#include <fstream>
#include <memory>
#include <sstream>

#include "commands.h"
#include "smf/error.h"
#include "smf/ling_metrics.h"
#include "smf/ling_report.h"
#include "smf/manifest.h"

namespace smf::cli {
namespace {

// Pairs each fake's transcript with the transcript of its driving video.
std::vector<TranscriptPair> pairs_from_manifest(const Manifest& manifest) {
  std::vector<TranscriptPair> pairs;
  for (const auto& rec : manifest.records()) {
    if (rec.label != Label::kFake || !rec.transcript) continue;
    const VideoRecord* drv = manifest.find(*rec.driving_video_id);
    if (!drv->transcript) continue;
    pairs.push_back({rec.video_id, *drv->transcript, *rec.transcript});
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kValidation, "manifest has no fake video with transcribed driving video");
  }
  return pairs;
}

std::vector<SimilarityRecord> score_all(const std::vector<TranscriptPair>& pairs) {
  std::vector<SimilarityRecord> records;
  records.reserve(pairs.size());
  for (const auto& p : pairs) {
    records.push_back(score_pair(tokenize(p.real_text), tokenize(p.fake_text), p.pair_id));
  }
  return records;
}

std::vector<TranscriptPair> load_pairs(const std::string& pairs, const std::string& manifest) {
  if (pairs.empty() == manifest.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --pairs or --manifest");
  }
  return pairs.empty() ? pairs_from_manifest(load_manifest(manifest)) : load_transcript_pairs(pairs);
}

void add_compare(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string pairs, manifest, output;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("compare-transcripts", "similarity metrics per transcript pair");
  sub->add_option("--pairs", o->pairs, "CSV or JSON-lines with pair_id, real_text, fake_text")
      ->check(CLI::ExistingFile);
  sub->add_option("--manifest", o->manifest, "manifest whose fakes and driving videos carry transcripts")
      ->check(CLI::ExistingFile);
  sub->add_option("--output", o->output, "records CSV")->required();
  sub->callback([sub, o, &ctx] {
    const auto records = score_all(load_pairs(o->pairs, o->manifest));
    std::ostringstream csv;
    write_records_csv(csv, records, comment_line(*sub));
    write_text(o->output, csv.str());
    json doc = header(*sub);
    doc["pairs"] = records.size();
    print_json(ctx.out, doc);
  });
}

void add_report(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string records, pairs, csv, json_path;
    int bins = 20;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report-linguistic", "per-metric distributions and histograms");
  sub->add_option("--records", o->records, "records CSV from compare-transcripts")
      ->check(CLI::ExistingFile);
  sub->add_option("--pairs", o->pairs, "transcript pairs, scored on the fly")->check(CLI::ExistingFile);
  sub->add_option("--bins", o->bins, "histogram bins")->check(CLI::Range(1, 10000));
  sub->add_option("--csv", o->csv, "report CSV output");
  sub->add_option("--json", o->json_path, "report JSON output");
  sub->callback([sub, o, &ctx] {
    if (o->records.empty() == o->pairs.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "give exactly one of --records or --pairs");
    }
    std::vector<SimilarityRecord> records;
    if (!o->records.empty()) {
      std::ifstream in(o->records);
      if (!in) throw Error(ErrorCode::kIo, "cannot open " + o->records);
      records = read_records_csv(in);
    } else {
      records = score_all(load_transcript_pairs(o->pairs));
    }
    if (records.empty()) throw Error(ErrorCode::kValidation, "no similarity records");
    const DistributionReport report = aggregate(records, o->bins);
    if (!o->csv.empty()) {
      std::ostringstream csv;
      write_report_csv(csv, report, comment_line(*sub));
      write_text(o->csv, csv.str());
    }
    json doc = header(*sub);
    if (!o->json_path.empty()) write_text(o->json_path, report_to_json(report, doc.dump()) + "\n");
    json medians = json::object();
    for (const auto& m : report.metrics) medians[m.metric] = m.median;
    doc["records"] = records.size();
    doc["median"] = std::move(medians);
    print_json(ctx.out, doc);
  });
}

}  // namespace

void add_text_commands(CLI::App& app, Context& ctx) {
  add_compare(app, ctx);
  add_report(app, ctx);
}

}  // namespace smf::cli
