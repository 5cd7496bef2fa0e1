// Copyright 2026 The adtheme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/analytics/report.hpp"
#include "adtheme/cli/config.hpp"
#include "adtheme/ingestion/corpus_io.hpp"
#include "adtheme/ingestion/fetch.hpp"
#include "adtheme/ingestion/page_registry.hpp"
#include "adtheme/lexicon/load.hpp"
#include "adtheme/matcher/results_io.hpp"
#include "adtheme/text/processed_io.hpp"

namespace adtheme::cli {

struct FetchArgs {
  ingestion::ApiConfig api;
  ingestion::DateRange range;
  std::vector<std::string> page_ids;  // empty: every page in the registry
};

struct FetchOutcome {
  ingestion::FetchStats stats;
  std::size_t written = 0;
};

// Downloads ads into cfg.corpus as raw NDJSON records.
inline FetchOutcome fetch(const RunConfig& cfg, FetchArgs args, std::ostream& log) {
  if (cfg.corpus.empty()) throw ConfigError("--corpus is required");
  if (args.page_ids.empty()) {
    if (cfg.registry.empty()) throw ConfigError("give --page-id or --registry");
    args.page_ids = ingestion::PageRegistry::load(cfg.registry).page_ids();
  }
  FetchOutcome out;
  std::string body;
  out.stats = ingestion::fetch_ads(args.page_ids, args.range, args.api, [&](const nlohmann::json& record) {
    body += record.dump() + "\n";
    ++out.written;
  });
  if (!cfg.corpus.parent_path().empty()) fs::create_directories(cfg.corpus.parent_path());
  util::write_file_atomic(cfg.corpus, body);
  for (const auto& issue : out.stats.issues)
    log << "warning: page " << issue.page_id << " response " << issue.page_index << ": " << issue.message << "\n";
  log << "fetched " << out.written << " ads from " << args.page_ids.size() << " pages (" << out.stats.pages
      << " responses, " << out.stats.duplicates << " duplicates dropped)\n";
  return out;
}

inline lexicon::LoadedLexicon load_lexicon_logged(const RunConfig& cfg, const text::LinguisticLexicon& linguistic,
                                                  std::ostream& log) {
  auto loaded = lexicon::load_lexicon(cfg.lexicon_dir, linguistic);
  for (const auto& w : loaded.warnings) log << "warning: " << w << "\n";
  return loaded;
}

struct PreprocessOutcome {
  ingestion::LoadReport load;
  std::vector<std::string> unresolved_pages;
  std::size_t unique_texts = 0;
};

// corpus -> out/corpus.ndjson (validated, parties resolved),
//           out/quarantine.ndjson, out/processed.ndjson
inline PreprocessOutcome preprocess(const RunConfig& cfg, std::ostream& log) {
  const Artifacts art{cfg.out_dir};
  auto loaded = ingestion::load_corpus(cfg.corpus);
  PreprocessOutcome out;
  out.load = loaded.report;
  if (!cfg.registry.empty()) {
    out.unresolved_pages = ingestion::PageRegistry::load(cfg.registry).resolve(loaded.corpus);
    for (const auto& page : out.unresolved_pages) log << "warning: page " << page << " is not in the registry\n";
  }
  const auto linguistic = text::LinguisticLexicon::load(cfg.linguistic);
  const auto texts = text::process_corpus(loaded.corpus, linguistic);
  out.unique_texts = texts.size();

  fs::create_directories(art.dir);
  ingestion::save_corpus(loaded.corpus, art.corpus());
  ingestion::write_quarantine(loaded.report, art.quarantine());
  text::save_processed(texts, art.processed());
  for (const auto& r : loaded.report.rejections)
    log << "rejected line " << r.line << " (" << r.field_path << "): " << r.message << "\n";
  log << "accepted " << out.load.accepted << " ads, rejected " << out.load.rejected << ", " << out.unique_texts
      << " unique texts\n";
  return out;
}

struct MatchMeta {
  std::uint64_t lexicon_version = 0;
  matcher::MatcherConfig matcher;
  std::size_t texts = 0;
  std::size_t matched_texts = 0;
};

inline nlohmann::json to_json(const MatchMeta& m) {
  return {{"lexicon_version", m.lexicon_version},
          {"min_exclusive", m.matcher.min_exclusive},
          {"multi_threshold", m.matcher.multi_threshold},
          {"texts", m.texts},
          {"matched_texts", m.matched_texts}};
}

inline MatchMeta load_match_meta(const fs::path& path) {
  const auto j = nlohmann::json::parse(util::read_file(path));
  MatchMeta m;
  m.lexicon_version = j.at("lexicon_version").get<std::uint64_t>();
  m.matcher.min_exclusive = j.at("min_exclusive").get<int>();
  m.matcher.multi_threshold = j.at("multi_threshold").get<int>();
  m.texts = j.at("texts").get<std::size_t>();
  m.matched_texts = j.at("matched_texts").get<std::size_t>();
  return m;
}

// out/processed.ndjson + lexicon -> out/results.ndjson, match_summary.csv,
// match_meta.json
inline matcher::CorpusMatch match(const RunConfig& cfg, std::ostream& log) {
  const Artifacts art{cfg.out_dir};
  Artifacts::require(art.corpus(), "preprocess");
  Artifacts::require(art.processed(), "preprocess");
  const auto linguistic = text::LinguisticLexicon::load(cfg.linguistic);
  const auto lex = load_lexicon_logged(cfg, linguistic, log).lexicon;
  const auto corpus = ingestion::load_corpus(art.corpus()).corpus;
  const auto texts = text::load_processed(art.processed());
  auto result = matcher::match_corpus(texts, lex, cfg.matcher, corpus);

  MatchMeta meta{lex.version(), cfg.matcher, result.results.size(), 0};
  for (const auto& r : result.results) meta.matched_texts += r.matched() ? 1 : 0;
  matcher::save_results(result.results, art.results());
  util::write_file_atomic(art.match_summary(), matcher::summary_csv(result.summary));
  util::write_file_atomic(art.match_meta(), to_json(meta).dump(2) + "\n");
  log << "matched " << meta.matched_texts << " of " << meta.texts << " texts at lexicon version " << meta.lexicon_version
      << "\n";
  return result;
}

// out/results.ndjson -> out/report/. The results must come from the current
// lexicon version.
inline std::map<std::string, std::string> report(const RunConfig& cfg, std::ostream& log) {
  const Artifacts art{cfg.out_dir};
  Artifacts::require(art.corpus(), "preprocess");
  Artifacts::require(art.results(), "match");
  Artifacts::require(art.match_meta(), "match");
  const auto linguistic = text::LinguisticLexicon::load(cfg.linguistic);
  const auto lex = load_lexicon_logged(cfg, linguistic, log).lexicon;
  const auto meta = load_match_meta(art.match_meta());
  if (meta.lexicon_version != lex.version())
    throw StaleArtifact(art.results(), "match",
                        "results are for lexicon version " + std::to_string(meta.lexicon_version) + ", lexicon is at " +
                            std::to_string(lex.version()));
  const auto corpus = ingestion::load_corpus(art.corpus()).corpus;
  const auto results = matcher::load_results(art.results());
  const auto baseline = cfg.baseline.empty() ? analytics::Baseline{} : analytics::Baseline::load(cfg.baseline);

  analytics::ReportInputs in;
  in.results = results;
  in.corpus = &corpus;
  in.themes = lex.themes();
  in.baseline = &baseline;
  in.matcher = meta.matcher;
  in.lexicon_version = meta.lexicon_version;
  in.top_k = cfg.ownership_k;
  const auto tables = analytics::compute_tables(in);
  auto files = analytics::render_report(in, tables);
  fs::remove_all(art.report_dir());
  analytics::write_report(art.report_dir(), files);
  for (const auto& n : tables.notes) log << "note: " << n << "\n";
  log << "wrote " << files.size() << " files to " << art.report_dir().string() << "\n";
  return files;
}

}  // namespace adtheme::cli
