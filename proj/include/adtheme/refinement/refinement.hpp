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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/lexicon/journal.hpp"
#include "adtheme/lexicon/theme_lexicon.hpp"
#include "adtheme/matcher/matcher.hpp"
#include "adtheme/text/pipeline.hpp"
#include "adtheme/util/error.hpp"
#include "adtheme/util/files.hpp"

namespace adtheme::refinement {

struct CandidateWord {
  std::string lemma;
  std::string theme_id;
  std::size_t match_count = 0;         // matched texts containing the lemma
  double corpus_doc_frequency = 0.0;   // fraction of all texts containing it
  std::vector<std::string> sample_text_keys;

  bool operator==(const CandidateWord&) const = default;
};

struct SuggestOptions {
  std::size_t k = 30;
  double df_ceiling = 0.05;
  std::set<std::string> stopwords;
};

inline constexpr std::size_t kSampleTexts = 5;

// Document frequencies over every text in the corpus.
struct CorpusStats {
  std::size_t n_texts = 0;
  std::unordered_map<std::string, std::size_t> doc_count;

  explicit CorpusStats(std::span<const text::ProcessedText> texts) : n_texts(texts.size()) {
    for (const auto& pt : texts)
      for (const auto& lemma : pt.lemmas) ++doc_count[lemma];
  }

  double df(const std::string& lemma) const {
    if (n_texts == 0) return 0.0;
    const auto it = doc_count.find(lemma);
    return it == doc_count.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_texts);
  }
};

struct Suggestions {
  std::vector<CandidateWord> candidates;
  std::size_t matched_texts = 0;
  std::string diagnostic;  // set when nothing could be suggested
};

inline std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read stopword file " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto view = util::trim(line);
    if (view.empty() || view.front() == '#') continue;
    out.insert(util::to_lower_ascii(view));
  }
  return out;
}

// Most frequent lemmas among the texts matched to `theme_id`, counted once
// per text. Lemmas already in any list, rejected for this theme, stopwords,
// and lemmas whose corpus document frequency exceeds df_ceiling are skipped.
// Ties go to the lexicographically smaller lemma.
inline Suggestions suggest_candidates(const std::string& theme_id, std::span<const matcher::MatchResult> results,
                                      std::span<const text::ProcessedText> texts, const lexicon::ThemeLexicon& lex,
                                      const SuggestOptions& opts, const CorpusStats& stats) {
  lex.theme(theme_id);
  std::unordered_map<std::string, const text::ProcessedText*> by_key;
  for (const auto& pt : texts) by_key.emplace(pt.text_key, &pt);

  std::vector<const text::ProcessedText*> matched;
  for (const auto& r : results) {
    if (!r.matched_themes.contains(theme_id)) continue;
    const auto it = by_key.find(r.text_key);
    if (it == by_key.end()) throw NotFoundError("match result for unknown text " + r.text_key);
    matched.push_back(it->second);
  }
  std::sort(matched.begin(), matched.end(),
            [](const auto* a, const auto* b) { return a->text_key < b->text_key; });

  Suggestions out;
  out.matched_texts = matched.size();
  if (matched.empty()) {
    out.diagnostic = "theme " + theme_id + " has no matched texts";
    return out;
  }

  std::map<std::string, CandidateWord> counts;
  for (const auto* pt : matched) {
    for (const auto& lemma : pt->lemmas) {
      auto& c = counts[lemma];
      if (c.match_count == 0) {
        c.lemma = lemma;
        c.theme_id = theme_id;
      }
      ++c.match_count;
      if (c.sample_text_keys.size() < kSampleTexts) c.sample_text_keys.push_back(pt->text_key);
    }
  }

  std::vector<CandidateWord> pool;
  for (auto& [lemma, c] : counts) {
    if (lex.in_any_list(lemma) || lex.is_rejected(lemma, theme_id) || opts.stopwords.contains(lemma)) continue;
    c.corpus_doc_frequency = stats.df(lemma);
    if (c.corpus_doc_frequency > opts.df_ceiling) continue;
    pool.push_back(std::move(c));
  }
  std::stable_sort(pool.begin(), pool.end(), [](const CandidateWord& a, const CandidateWord& b) {
    return a.match_count != b.match_count ? a.match_count > b.match_count : a.lemma < b.lemma;
  });
  if (pool.size() > opts.k) pool.resize(opts.k);
  out.candidates = std::move(pool);
  if (out.candidates.empty()) out.diagnostic = "no unreviewed words left for theme " + theme_id;
  return out;
}

inline Suggestions suggest_candidates(const std::string& theme_id, std::span<const matcher::MatchResult> results,
                                      std::span<const text::ProcessedText> texts, const lexicon::ThemeLexicon& lex,
                                      const SuggestOptions& opts) {
  return suggest_candidates(theme_id, results, texts, lex, opts, CorpusStats(texts));
}

struct CandidateVerdict {
  std::string lemma;
  lexicon::Verdict verdict = lexicon::Verdict::reject;
  std::string reason;
};

// Supplies verdicts for one theme's candidates. Candidates left out of the
// returned list are skipped and may be suggested again later.
class VerdictSource {
 public:
  virtual ~VerdictSource() = default;
  virtual std::vector<CandidateVerdict> decide(const lexicon::Theme& theme,
                                               std::span<const CandidateWord> candidates) = 0;
};

class RejectAllPolicy : public VerdictSource {
 public:
  std::vector<CandidateVerdict> decide(const lexicon::Theme&, std::span<const CandidateWord> candidates) override {
    std::vector<CandidateVerdict> out;
    for (const auto& c : candidates) out.push_back({c.lemma, lexicon::Verdict::reject, "auto-reject"});
    return out;
  }
};

class CallbackPolicy : public VerdictSource {
 public:
  using Fn = std::function<std::vector<CandidateVerdict>(const lexicon::Theme&, std::span<const CandidateWord>)>;
  explicit CallbackPolicy(Fn fn) : fn_(std::move(fn)) {}
  std::vector<CandidateVerdict> decide(const lexicon::Theme& theme, std::span<const CandidateWord> candidates) override {
    return fn_(theme, candidates);
  }

 private:
  Fn fn_;
};

struct ThemeIterationStats {
  std::size_t suggested = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool converged = true;

  bool operator==(const ThemeIterationStats&) const = default;
};

struct IterationRecord {
  int iteration = 1;
  std::uint64_t lexicon_version_before = 0;
  std::uint64_t lexicon_version_after = 0;
  std::size_t suggested = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t matched_texts_before = 0;
  std::size_t matched_texts_after = 0;
  std::map<std::string, ThemeIterationStats> themes;

  bool converged() const { return accepted == 0; }
  bool operator==(const IterationRecord&) const = default;
};

inline nlohmann::json to_json(const IterationRecord& r) {
  nlohmann::json themes = nlohmann::json::object();
  for (const auto& [id, s] : r.themes)
    themes[id] = {{"suggested", s.suggested}, {"accepted", s.accepted}, {"rejected", s.rejected}, {"converged", s.converged}};
  return {{"iteration", r.iteration},
          {"lexicon_version_before", r.lexicon_version_before},
          {"lexicon_version_after", r.lexicon_version_after},
          {"suggested", r.suggested},
          {"accepted", r.accepted},
          {"rejected", r.rejected},
          {"matched_texts_before", r.matched_texts_before},
          {"matched_texts_after", r.matched_texts_after},
          {"themes", themes}};
}

inline IterationRecord iteration_from_json(const nlohmann::json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.lexicon_version_before = j.at("lexicon_version_before").get<std::uint64_t>();
  r.lexicon_version_after = j.at("lexicon_version_after").get<std::uint64_t>();
  r.suggested = j.at("suggested").get<std::size_t>();
  r.accepted = j.at("accepted").get<std::size_t>();
  r.rejected = j.at("rejected").get<std::size_t>();
  r.matched_texts_before = j.value("matched_texts_before", std::size_t{0});
  r.matched_texts_after = j.value("matched_texts_after", std::size_t{0});
  for (const auto& [id, s] : j.at("themes").items()) {
    r.themes[id] = {s.at("suggested").get<std::size_t>(), s.at("accepted").get<std::size_t>(),
                    s.at("rejected").get<std::size_t>(), s.at("converged").get<bool>()};
  }
  return r;
}

// Append-only iterations.ndjson next to the decisions journal.
class IterationJournal {
 public:
  IterationJournal() = default;
  explicit IterationJournal(std::filesystem::path path) : path_(std::move(path)) {}

  bool enabled() const { return !path_.empty(); }
  void append(const IterationRecord& r) const {
    if (enabled()) util::append_line_durable(path_, to_json(r).dump());
  }

  static std::vector<IterationRecord> read(const std::filesystem::path& path) {
    std::vector<IterationRecord> out;
    if (!std::filesystem::exists(path)) return out;
    util::for_each_line(path, [&](std::size_t line, std::string_view text) {
      if (util::trim(text).empty()) return;
      try {
        out.push_back(iteration_from_json(nlohmann::json::parse(text)));
      } catch (const std::exception& e) {
        throw Error(path.string() + ":" + std::to_string(line) + ": " + e.what());
      }
    });
    return out;
  }

 private:
  std::filesystem::path path_;
};

// True iff the latest iteration accepted no word for any theme.
inline bool converged(std::span<const IterationRecord> history) {
  if (history.empty()) throw PreconditionError("converged: no iteration has been recorded");
  return history.back().accepted == 0;
}

using SuggestedByTheme = std::map<std::string, std::set<std::string>>;

inline std::size_t count_matched(std::span<const matcher::MatchResult> results) {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto& r) { return r.matched(); }));
}

inline SuggestedByTheme suggest_all(std::span<const matcher::MatchResult> results,
                                    std::span<const text::ProcessedText> texts, const lexicon::ThemeLexicon& lex,
                                    const SuggestOptions& opts, std::map<std::string, Suggestions>* detail = nullptr) {
  const CorpusStats stats(texts);
  SuggestedByTheme out;
  for (const auto& theme : lex.themes()) {
    auto s = suggest_candidates(theme.id, results, texts, lex, opts, stats);
    auto& set = out[theme.id];
    for (const auto& c : s.candidates) set.insert(c.lemma);
    if (detail) detail->emplace(theme.id, std::move(s));
  }
  return out;
}

// Builds the record for decisions [version_before, lex.version()). Decisions
// made outside the suggestion list (ad-hoc CLI decisions) count as suggested,
// so accepted + rejected <= suggested always holds.
inline IterationRecord summarize_iteration(int iteration, const lexicon::ThemeLexicon& lex,
                                           std::uint64_t version_before, const SuggestedByTheme& suggested,
                                           std::size_t matched_before, std::size_t matched_after) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.lexicon_version_before = version_before;
  rec.lexicon_version_after = lex.version();
  rec.matched_texts_before = matched_before;
  rec.matched_texts_after = matched_after;
  SuggestedByTheme pool = suggested;
  for (const auto& theme : lex.themes()) rec.themes[theme.id];
  const auto& decisions = lex.decisions();
  for (auto i = version_before; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    pool[d.theme_id].insert(d.lemma);
    auto& s = rec.themes[d.theme_id];
    if (d.verdict == lexicon::Verdict::accept) {
      ++s.accepted;
    } else {
      ++s.rejected;
    }
  }
  for (auto& [id, s] : rec.themes) {
    s.suggested = pool.contains(id) ? pool.at(id).size() : 0;
    s.converged = s.accepted == 0;
    rec.suggested += s.suggested;
    rec.accepted += s.accepted;
    rec.rejected += s.rejected;
  }
  return rec;
}

struct IterationContext {
  std::span<const text::ProcessedText> texts;
  matcher::MatcherConfig matcher;
  SuggestOptions suggest;
  const lexicon::DecisionJournal* decisions = nullptr;
  const IterationJournal* iterations = nullptr;
};

// One pass of the loop: match, suggest per theme, collect verdicts, apply
// them through the journal, rematch and record. Suggestions for every theme
// are computed against the same lexicon version before any verdict lands.
inline IterationRecord run_iteration(const IterationContext& ctx, lexicon::ThemeLexicon& lex, VerdictSource& source,
                                     int iteration) {
  const auto version_before = lex.version();
  const auto before = matcher::match_texts(ctx.texts, lex.word_sets(), ctx.matcher, version_before);
  std::map<std::string, Suggestions> detail;
  const auto suggested = suggest_all(before, ctx.texts, lex, ctx.suggest, &detail);

  const lexicon::DecisionJournal no_journal;
  const auto& journal = ctx.decisions ? *ctx.decisions : no_journal;
  for (const auto& theme : lex.themes()) {
    const auto& candidates = detail.at(theme.id).candidates;
    if (candidates.empty()) continue;
    const auto verdicts = source.decide(theme, candidates);
    std::set<std::string> seen;
    for (const auto& v : verdicts) {
      const bool known = std::any_of(candidates.begin(), candidates.end(),
                                     [&](const CandidateWord& c) { return c.lemma == v.lemma; });
      if (!known) throw PreconditionError("verdict for unknown candidate '" + v.lemma + "' in theme " + theme.id);
      if (!seen.insert(v.lemma).second)
        throw PreconditionError("two verdicts for candidate '" + v.lemma + "' in theme " + theme.id);
    }
    for (const auto& v : verdicts)
      lexicon::record_decision(lex, journal, {v.lemma, theme.id, v.verdict, iteration, {}, v.reason});
  }

  const auto after = matcher::match_texts(ctx.texts, lex.word_sets(), ctx.matcher, lex.version());
  auto rec = summarize_iteration(iteration, lex, version_before, suggested, count_matched(before), count_matched(after));
  if (ctx.iterations) ctx.iterations->append(rec);
  return rec;
}

}  // namespace adtheme::refinement
