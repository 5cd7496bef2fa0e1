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

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/analytics/report.hpp"
#include "adtheme/cli/config.hpp"
#include "adtheme/ingestion/corpus_io.hpp"
#include "adtheme/lexicon/journal.hpp"
#include "adtheme/lexicon/load.hpp"
#include "adtheme/refinement/refinement.hpp"
#include "adtheme/text/processed_io.hpp"
#include "adtheme/text/transliterate.hpp"

namespace adtheme::cli {

using Results = std::vector<matcher::MatchResult>;

// Lexicon, journals and (optionally) the preprocessed corpus behind one
// reader/writer lock. Every mutation is journaled before it is applied, so a
// restart replays to the same state whichever interface made the change.
class Session {
 public:
  using Clock = std::function<std::string()>;

  Session(RunConfig cfg, bool with_corpus, Clock clock = lexicon::utc_timestamp)
      : cfg_(std::move(cfg)),
        clock_(std::move(clock)),
        decisions_(cfg_.lexicon_dir / lexicon::kDecisionsFile),
        iterations_(cfg_.lexicon_dir / lexicon::kIterationsFile) {
    linguistic_ = text::LinguisticLexicon::load(cfg_.linguistic);
    auto loaded = lexicon::load_lexicon(cfg_.lexicon_dir, linguistic_);
    lex_ = std::move(loaded.lexicon);
    warnings_ = std::move(loaded.warnings);
    history_ = refinement::IterationJournal::read(cfg_.lexicon_dir / lexicon::kIterationsFile);
    if (!cfg_.stopwords.empty()) suggest_.stopwords = refinement::load_stopwords(cfg_.stopwords);
    suggest_.k = cfg_.top_k;
    suggest_.df_ceiling = cfg_.df_ceiling;
    if (!with_corpus) return;

    const Artifacts art{cfg_.out_dir};
    Artifacts::require(art.corpus(), "preprocess");
    Artifacts::require(art.processed(), "preprocess");
    corpus_ = ingestion::load_corpus(art.corpus()).corpus;
    texts_ = text::load_processed(art.processed());
    for (std::size_t i = 0; i < texts_.size(); ++i) text_index_.emplace(texts_[i].text_key, i);
    if (!cfg_.baseline.empty()) baseline_ = analytics::Baseline::load(cfg_.baseline);
    has_corpus_ = true;
  }

  const RunConfig& config() const { return cfg_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool has_corpus() const { return has_corpus_; }
  const std::vector<text::ProcessedText>& texts() const { return texts_; }
  const ingestion::Corpus& corpus() const { return corpus_; }
  const text::LinguisticLexicon& linguistic() const { return linguistic_; }

  // Copies taken under the read lock.
  lexicon::ThemeLexicon lexicon() const {
    std::shared_lock lock(mu_);
    return lex_;
  }
  std::vector<refinement::IterationRecord> history() const {
    std::shared_lock lock(mu_);
    return history_;
  }
  std::vector<lexicon::Theme> themes() const {
    std::shared_lock lock(mu_);
    return lex_.themes();
  }

  // ---- matching ---------------------------------------------------------

  // Results for the current lexicon version. A stale cache is rebuilt from a
  // snapshot of the word lists outside the writer lock; progress is visible
  // through status().
  std::shared_ptr<const Results> results() const {
    require_corpus();
    lexicon::WordSets lists;
    std::uint64_t version = 0;
    {
      std::shared_lock lock(mu_);
      if (results_ && results_version_ == lex_.version()) return results_;
    }
    std::lock_guard guard(rematch_mu_);
    {
      std::shared_lock lock(mu_);
      if (results_ && results_version_ == lex_.version()) return results_;
      lists = lex_.word_sets();
      version = lex_.version();
    }
    auto fresh = std::make_shared<const Results>(rematch(lists, version));
    std::unique_lock lock(mu_);
    if (!results_ || results_version_ < version) {
      results_ = fresh;
      results_version_ = version;
    }
    return fresh;
  }

  // ---- suggestions ------------------------------------------------------

  refinement::Suggestions suggestions(const std::string& theme_id) const {
    const auto res = results();
    std::shared_lock lock(mu_);
    lex_.theme(theme_id);
    if (res->empty() || res->front().lexicon_version == lex_.version())
      return refinement::suggest_candidates(theme_id, *res, texts_, lex_, suggest_, stats());
    // The lexicon moved on since `res` was built; match locally.
    const auto local = matcher::match_texts(texts_, lex_.word_sets(), cfg_.matcher, lex_.version());
    return refinement::suggest_candidates(theme_id, local, texts_, lex_, suggest_, stats());
  }

  // ---- mutations --------------------------------------------------------

  int open_iteration() const {
    std::shared_lock lock(mu_);
    return static_cast<int>(history_.size()) + 1;
  }

  // Journals and applies one verdict in the open iteration unless
  // `iteration` is given.
  lexicon::Decision decide(const std::string& lemma, const std::string& theme_id, lexicon::Verdict verdict,
                           const std::string& reason = {}, std::optional<int> iteration = std::nullopt) {
    std::unique_lock lock(mu_);
    return decide_locked({lemma, theme_id, verdict, iteration.value_or(static_cast<int>(history_.size()) + 1), {}, reason});
  }

  // Closes the open iteration: every decision since the last record counts
  // towards it; suggestions are those of the lexicon when it opened.
  refinement::IterationRecord close_iteration() {
    require_corpus();
    std::unique_lock lock(mu_);
    return close_locked();
  }

  // One full round: candidates for every theme from the current lexicon,
  // verdicts from `source`, then close. Candidates for all themes are fixed
  // before the first verdict is recorded.
  refinement::IterationRecord iterate(refinement::VerdictSource& source) {
    require_corpus();
    std::unique_lock lock(mu_);
    const auto current = matcher::match_texts(texts_, lex_.word_sets(), cfg_.matcher, lex_.version());
    std::map<std::string, refinement::Suggestions> detail;
    refinement::suggest_all(current, texts_, lex_, suggest_, &detail);
    const int iteration = static_cast<int>(history_.size()) + 1;
    for (const auto& theme : lex_.themes()) {
      const auto& candidates = detail.at(theme.id).candidates;
      if (candidates.empty()) continue;
      const auto verdicts = source.decide(theme, candidates);
      std::set<std::string> seen;
      for (const auto& v : verdicts) {
        const bool known = std::any_of(candidates.begin(), candidates.end(),
                                       [&](const refinement::CandidateWord& c) { return c.lemma == v.lemma; });
        if (!known) throw PreconditionError("verdict for unknown candidate '" + v.lemma + "' in theme " + theme.id);
        if (!seen.insert(v.lemma).second)
          throw PreconditionError("two verdicts for candidate '" + v.lemma + "' in theme " + theme.id);
      }
      for (const auto& v : verdicts) decide_locked({v.lemma, theme.id, v.verdict, iteration, {}, v.reason});
    }
    return close_locked();
  }

  // ---- reports ----------------------------------------------------------

  analytics::ReportInputs report_inputs(const Results& results) const {
    analytics::ReportInputs in;
    in.results = results;
    in.corpus = &corpus_;
    in.themes = lex_.themes();  // theme set never changes after load
    in.baseline = &baseline_;
    in.matcher = cfg_.matcher;
    in.lexicon_version = results.empty() ? lex_version_snapshot() : results.front().lexicon_version;
    in.top_k = cfg_.ownership_k;
    return in;
  }

  // Recomputed on every call from the current results.
  std::map<std::string, std::string> report_files() const {
    const auto res = results();
    const auto in = report_inputs(*res);
    return analytics::render_report(in, analytics::compute_tables(in));
  }

  // ---- JSON views for the service ---------------------------------------

  nlohmann::json themes_json() const {
    std::shared_lock lock(mu_);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : lex_.themes()) {
      const auto& list = lex_.list(t.id);
      out.push_back({{"id", t.id},
                     {"display_name", t.display_name},
                     {"cap_categories", t.cap_categories},
                     {"description", t.description},
                     {"words", list.entries},
                     {"list_version", list.version}});
    }
    return out;
  }

  nlohmann::json candidates_json(const std::string& theme_id) const {
    const auto s = suggestions(theme_id);
    nlohmann::json cands = nlohmann::json::array();
    for (const auto& c : s.candidates) {
      nlohmann::json samples = nlohmann::json::array();
      for (const auto& key : c.sample_text_keys) {
        const auto ascii = ascii_text(key);
        nlohmann::json marks = nlohmann::json::array();
        for (const auto& [off, len] : text::lemma_occurrences(ascii, c.lemma, linguistic_))
          marks.push_back({{"offset", off}, {"length", len}});
        samples.push_back({{"text_key", key}, {"text", ascii}, {"highlights", marks}});
      }
      cands.push_back({{"lemma", c.lemma},
                       {"theme_id", c.theme_id},
                       {"match_count", c.match_count},
                       {"corpus_doc_frequency", c.corpus_doc_frequency},
                       {"state", "pending"},
                       {"samples", samples}});
    }
    std::shared_lock lock(mu_);
    return {{"theme_id", theme_id},
            {"lexicon_version", lex_.version()},
            {"iteration", history_.size() + 1},
            {"matched_texts", s.matched_texts},
            {"diagnostic", s.diagnostic},
            {"candidates", cands}};
  }

  nlohmann::json text_json(const std::string& key) const {
    require_corpus();
    const auto it = text_index_.find(key);
    if (it == text_index_.end()) throw NotFoundError("unknown text " + key);
    const auto& pt = texts_[it->second];
    const auto res = results();
    nlohmann::json ads = nlohmann::json::array();
    for (const auto& id : pt.ad_ids) {
      const auto& ad = corpus_.at(id);
      nlohmann::json impressions = {{"lower", ad.impressions.lower()}};
      if (ad.impressions.upper()) impressions["upper"] = *ad.impressions.upper();
      ads.push_back({{"id", ad.id},
                     {"page_id", ad.page_id},
                     {"page_name", ad.page_name},
                     {"party", ad.party},
                     {"start_date", ingestion::format_date(ad.start_date)},
                     {"impressions", impressions}});
    }
    nlohmann::json match = nullptr;
    for (const auto& r : *res)
      if (r.text_key == key) match = matcher::to_json(r);
    const auto& first = corpus_.at(pt.ad_ids.front());
    return {{"text_key", key},
            {"raw", text::combine_variants(first)},
            {"text", text::transliterate(text::combine_variants(first))},
            {"lemmas", pt.lemmas},
            {"counts", pt.lemma_counts},
            {"ads", ads},
            {"match", match}};
  }

  nlohmann::json status_json() const {
    std::shared_lock lock(mu_);
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& r : history_) iterations.push_back(refinement::to_json(r));
    nlohmann::json converged = nullptr;
    nlohmann::json theme_flags = nlohmann::json::object();
    if (!history_.empty()) {
      converged = refinement::converged(history_);
      for (const auto& [id, s] : history_.back().themes) theme_flags[id] = s.converged;
    }
    const auto open_since = history_.empty() ? 0 : history_.back().lexicon_version_after;
    return {{"lexicon_version", lex_.version()},
            {"results_version", results_ ? nlohmann::json(results_version_) : nlohmann::json(nullptr)},
            {"rematch",
             {{"running", rematch_running_.load()}, {"done", rematch_done_.load()}, {"total", rematch_total_.load()}}},
            {"iteration_count", history_.size()},
            {"open_iteration", history_.size() + 1},
            {"open_decisions", lex_.version() - open_since},
            {"converged", converged},
            {"themes_converged", theme_flags},
            {"iterations", iterations},
            {"ads", corpus_.size()},
            {"texts", texts_.size()},
            {"matcher", {{"min_exclusive", cfg_.matcher.min_exclusive}, {"multi_threshold", cfg_.matcher.multi_threshold}}},
            {"warnings", warnings_}};
  }

  // The ASCII text of the first ad carrying `key`.
  std::string ascii_text(const std::string& key) const {
    const auto it = text_index_.find(key);
    if (it == text_index_.end()) throw NotFoundError("unknown text " + key);
    return text::transliterate(text::combine_variants(corpus_.at(texts_[it->second].ad_ids.front())));
  }

 private:
  void require_corpus() const {
    if (!has_corpus_) throw PreconditionError("session was opened without a corpus");
  }

  std::uint64_t lex_version_snapshot() const {
    std::shared_lock lock(mu_);
    return lex_.version();
  }

  const refinement::CorpusStats& stats() const {
    std::call_once(stats_once_, [&] { stats_ = std::make_unique<refinement::CorpusStats>(texts_); });
    return *stats_;
  }

  Results rematch(const lexicon::WordSets& lists, std::uint64_t version) const {
    cfg_.matcher.validate();
    rematch_total_ = texts_.size();
    rematch_done_ = 0;
    rematch_running_ = true;
    Results out;
    out.reserve(texts_.size());
    for (const auto& pt : texts_) {
      out.push_back(matcher::match_text(pt, lists, cfg_.matcher, version));
      ++rematch_done_;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.text_key < b.text_key; });
    rematch_running_ = false;
    return out;
  }

  lexicon::Decision decide_locked(lexicon::Decision d) {
    d.timestamp = clock_();
    lexicon::record_decision(lex_, decisions_, d);
    return d;
  }

  refinement::IterationRecord close_locked() {
    const std::uint64_t since = history_.empty() ? 0 : history_.back().lexicon_version_after;
    const auto base = lex_.at_version(since);
    const auto before = matcher::match_texts(texts_, base.word_sets(), cfg_.matcher, since);
    const auto suggested = refinement::suggest_all(before, texts_, base, suggest_);
    auto after = matcher::match_texts(texts_, lex_.word_sets(), cfg_.matcher, lex_.version());
    const int iteration = static_cast<int>(history_.size()) + 1;
    auto rec = refinement::summarize_iteration(iteration, lex_, since, suggested, refinement::count_matched(before),
                                               refinement::count_matched(after));
    iterations_.append(rec);
    history_.push_back(rec);
    results_ = std::make_shared<const Results>(std::move(after));
    results_version_ = lex_.version();
    return rec;
  }

  RunConfig cfg_;
  Clock clock_;
  lexicon::DecisionJournal decisions_;
  refinement::IterationJournal iterations_;
  text::LinguisticLexicon linguistic_;
  refinement::SuggestOptions suggest_;
  analytics::Baseline baseline_;
  std::vector<std::string> warnings_;

  bool has_corpus_ = false;
  ingestion::Corpus corpus_;
  std::vector<text::ProcessedText> texts_;
  std::unordered_map<std::string, std::size_t> text_index_;
  mutable std::once_flag stats_once_;
  mutable std::unique_ptr<refinement::CorpusStats> stats_;

  mutable std::shared_mutex mu_;
  lexicon::ThemeLexicon lex_;
  std::vector<refinement::IterationRecord> history_;
  mutable std::shared_ptr<const Results> results_;
  mutable std::uint64_t results_version_ = 0;

  mutable std::mutex rematch_mu_;
  mutable std::atomic<bool> rematch_running_{false};
  mutable std::atomic<std::size_t> rematch_done_{0};
  mutable std::atomic<std::size_t> rematch_total_{0};
};

}  // namespace adtheme::cli
