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
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/text/linguistic_lexicon.hpp"
#include "adtheme/text/transliterate.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::text {

// A deduplicated ad text reduced to its bag of lemmas.
struct ProcessedText {
  std::string text_key;
  std::vector<std::string> lemmas;           // sorted, unique; the support of lemma_counts
  std::map<std::string, int> lemma_counts;
  std::vector<std::string> ad_ids;           // sorted; every ad carrying this text

  bool contains(std::string_view lemma) const {
    return std::binary_search(lemmas.begin(), lemmas.end(), lemma);
  }

  bool operator==(const ProcessedText&) const = default;
};

// The ad text: creative bodies, then link titles, then link descriptions,
// trimmed and joined by spaces. An element not already ending in . ! or ? gets
// a period so adjacent elements read as separate sentences. Captions are bare
// URLs and are left out. Blank elements are skipped.
inline std::string combine_variants(const ingestion::Ad& ad) {
  std::string out;
  auto append = [&](const std::vector<std::string>& items) {
    for (const auto& raw : items) {
      const auto item = util::trim(raw);
      if (item.empty()) continue;
      if (!out.empty()) out += ' ';
      out += item;
      if (const char last = item.back(); last != '.' && last != '!' && last != '?') out += '.';
    }
  };
  append(ad.creative_bodies);
  append(ad.link_titles);
  append(ad.link_descriptions);
  return out;
}

// Case-folded, whitespace-collapsed, trimmed form of transliterated text.
// Two ads are duplicates iff their normalised texts are equal.
inline std::string normalize_for_key(std::string_view ascii) {
  std::string out;
  out.reserve(ascii.size());
  bool space = false;
  for (unsigned char c : ascii) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c);
  }
  return out;
}

inline std::string text_key(std::string_view ascii) { return util::hex64(util::fnv1a64(normalize_for_key(ascii))); }

struct Token {
  std::size_t offset = 0;
  std::string text;  // case-folded
};

// Splits on every run of non-alphanumeric characters; "co2-uitstoot" yields
// two tokens.
inline std::vector<Token> tokenize(std::string_view ascii) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < ascii.size()) {
    while (i < ascii.size() && !util::is_ascii_alnum(static_cast<unsigned char>(ascii[i]))) ++i;
    const std::size_t start = i;
    while (i < ascii.size() && util::is_ascii_alnum(static_cast<unsigned char>(ascii[i]))) ++i;
    if (i > start) tokens.push_back({start, util::to_lower_ascii(ascii.substr(start, i - start))});
  }
  return tokens;
}

// Lemma for one case-folded token, or empty when the token is filtered out.
// Known tokens survive only with a noun, proper noun or adjective analysis,
// preferring them in that order; unknown tokens are kept as their own lemma.
inline std::string lemma_of(std::string_view token, const LinguisticLexicon& lexicon) {
  if (token.size() < 2 || util::is_all_digits(token)) return {};
  const auto analyses = lexicon.lookup(token);
  std::string lemma;
  if (analyses.empty()) {
    lemma = std::string(token);
  } else {
    const Analysis* best = nullptr;
    auto rank = [](Pos p) { return p == Pos::noun ? 0 : p == Pos::propn ? 1 : p == Pos::adj ? 2 : 3; };
    for (const auto& a : analyses) {
      if (a.pos == Pos::other) continue;
      if (!best || rank(a.pos) < rank(best->pos)) best = &a;
    }
    if (!best) return {};
    lemma = best->lemma;
  }
  if (!util::is_lemma(lemma) || util::is_all_digits(lemma)) return {};
  return lemma;
}

// Reduces transliterated text to a ProcessedText with no ad ids attached.
inline ProcessedText analyze(std::string_view ascii, const LinguisticLexicon& lexicon) {
  ProcessedText pt;
  pt.text_key = text_key(ascii);
  for (const auto& tok : tokenize(ascii)) {
    auto lemma = lemma_of(tok.text, lexicon);
    if (!lemma.empty()) ++pt.lemma_counts[lemma];
  }
  pt.lemmas.reserve(pt.lemma_counts.size());
  for (const auto& [lemma, n] : pt.lemma_counts) pt.lemmas.push_back(lemma);
  return pt;
}

inline ProcessedText process_ad(const ingestion::Ad& ad, const LinguisticLexicon& lexicon) {
  auto pt = analyze(transliterate(combine_variants(ad)), lexicon);
  pt.ad_ids = {ad.id};
  return pt;
}

// Merges texts with equal keys. Output is sorted by text_key and every
// ad_ids list is sorted, so the result does not depend on input order.
inline std::vector<ProcessedText> dedup(std::vector<ProcessedText> texts) {
  std::map<std::string, ProcessedText> merged;
  for (auto& pt : texts) {
    auto it = merged.find(pt.text_key);
    if (it == merged.end()) {
      merged.emplace(pt.text_key, std::move(pt));
    } else {
      auto& ids = it->second.ad_ids;
      ids.insert(ids.end(), pt.ad_ids.begin(), pt.ad_ids.end());
    }
  }
  std::vector<ProcessedText> out;
  out.reserve(merged.size());
  for (auto& [key, pt] : merged) {
    std::sort(pt.ad_ids.begin(), pt.ad_ids.end());
    out.push_back(std::move(pt));
  }
  return out;
}

inline std::vector<ProcessedText> process_corpus(const ingestion::Corpus& corpus, const LinguisticLexicon& lexicon) {
  std::vector<ProcessedText> texts;
  texts.reserve(corpus.size());
  for (const auto& ad : corpus.ads()) texts.push_back(process_ad(ad, lexicon));
  return dedup(std::move(texts));
}

// Byte offsets in `ascii` of tokens whose lemma equals `lemma`. Used to
// highlight a candidate word in its context.
inline std::vector<std::pair<std::size_t, std::size_t>> lemma_occurrences(std::string_view ascii,
                                                                          std::string_view lemma,
                                                                          const LinguisticLexicon& lexicon) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& tok : tokenize(ascii))
    if (lemma_of(tok.text, lexicon) == lemma) out.emplace_back(tok.offset, tok.text.size());
  return out;
}

}  // namespace adtheme::text
