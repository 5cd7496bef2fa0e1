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
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/lexicon/theme_lexicon.hpp"
#include "adtheme/text/pipeline.hpp"
#include "adtheme/util/error.hpp"

namespace adtheme::matcher {

// An intersection of size <= min_exclusive never matches; one of size
// > multi_threshold always matches, even when it is not the largest.
struct MatcherConfig {
  int min_exclusive = 1;
  int multi_threshold = 5;

  void validate() const {
    if (min_exclusive < 0 || min_exclusive >= multi_threshold)
      throw PreconditionError("matcher thresholds must satisfy 0 <= min_exclusive < multi_threshold (got " +
                              std::to_string(min_exclusive) + ", " + std::to_string(multi_threshold) + ")");
  }

  bool operator==(const MatcherConfig&) const = default;
};

struct MatchResult {
  std::string text_key;
  std::vector<std::string> ad_ids;
  std::set<std::string> matched_themes;
  std::map<std::string, int> intersection_sizes;  // every theme, zeros included
  std::uint64_t lexicon_version = 0;

  bool matched() const { return !matched_themes.empty(); }
  bool operator==(const MatchResult&) const = default;
};

// Assigns themes to one text:
//   s(T) = |lemmas ∩ list(T)|, m = max s(T)
//   m <= min_exclusive           -> no theme
//   otherwise                    -> {T : s(T) = m} ∪ {T : s(T) > multi_threshold}
// Every theme tied at the maximum is matched.
inline MatchResult match_text(const text::ProcessedText& pt, const lexicon::WordSets& lists, const MatcherConfig& cfg,
                              std::uint64_t lexicon_version = 0) {
  MatchResult r;
  r.text_key = pt.text_key;
  r.ad_ids = pt.ad_ids;
  r.lexicon_version = lexicon_version;
  int best = 0;
  for (const auto& [theme, words] : lists) {
    int s = 0;
    if (words.size() < pt.lemmas.size()) {
      for (const auto& w : words) s += pt.contains(w) ? 1 : 0;
    } else {
      for (const auto& lemma : pt.lemmas) s += words.contains(lemma) ? 1 : 0;
    }
    r.intersection_sizes.emplace(theme, s);
    best = std::max(best, s);
  }
  if (best <= cfg.min_exclusive) return r;
  for (const auto& [theme, s] : r.intersection_sizes)
    if (s == best || s > cfg.multi_threshold) r.matched_themes.insert(theme);
  return r;
}

inline MatchResult match_text(const text::ProcessedText& pt, const lexicon::ThemeLexicon& lex,
                              const MatcherConfig& cfg) {
  return match_text(pt, lex.word_sets(), cfg, lex.version());
}

struct PartySummary {
  std::string party;
  std::size_t n_ads = 0;
  std::size_t n_matched = 0;
  double pct_matched() const { return n_ads == 0 ? 0.0 : 100.0 * (static_cast<double>(n_matched) / static_cast<double>(n_ads)); }

  bool operator==(const PartySummary&) const = default;
};

// Per party: ads (expanded through ad_ids) and how many matched >= 1 theme.
// An ad matched to several themes counts once. Ads without a resolved party
// are grouped under "(unresolved)". Sorted by party.
inline std::vector<PartySummary> summarize(std::span<const MatchResult> results, const ingestion::Corpus& corpus) {
  std::map<std::string, PartySummary> by_party;
  for (const auto& r : results) {
    for (const auto& id : r.ad_ids) {
      const auto& ad = corpus.at(id);
      const std::string party = ad.party.empty() ? "(unresolved)" : ad.party;
      auto& row = by_party[party];
      row.party = party;
      ++row.n_ads;
      if (r.matched()) ++row.n_matched;
    }
  }
  std::vector<PartySummary> out;
  for (auto& [party, row] : by_party) out.push_back(row);
  return out;
}

struct CorpusMatch {
  std::vector<MatchResult> results;  // sorted by text_key
  std::vector<PartySummary> summary;
};

inline std::vector<MatchResult> match_texts(std::span<const text::ProcessedText> texts, const lexicon::WordSets& lists,
                                            const MatcherConfig& cfg, std::uint64_t lexicon_version = 0) {
  cfg.validate();
  std::vector<MatchResult> results;
  results.reserve(texts.size());
  for (const auto& pt : texts) results.push_back(match_text(pt, lists, cfg, lexicon_version));
  std::sort(results.begin(), results.end(),
            [](const MatchResult& a, const MatchResult& b) { return a.text_key < b.text_key; });
  return results;
}

inline CorpusMatch match_corpus(std::span<const text::ProcessedText> texts, const lexicon::ThemeLexicon& lex,
                                const MatcherConfig& cfg, const ingestion::Corpus& corpus) {
  CorpusMatch out;
  out.results = match_texts(texts, lex.word_sets(), cfg, lex.version());
  out.summary = summarize(out.results, corpus);
  return out;
}

}  // namespace adtheme::matcher
