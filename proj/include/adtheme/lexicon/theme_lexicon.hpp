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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adtheme/util/error.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::lexicon {

struct Theme {
  std::string id;
  std::string display_name;
  std::vector<int> cap_categories;
  std::string description;
};

enum class Verdict { accept, reject };

inline std::string_view to_string(Verdict v) { return v == Verdict::accept ? "accept" : "reject"; }

inline std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "accept") return Verdict::accept;
  if (s == "reject") return Verdict::reject;
  return std::nullopt;
}

// One journaled curation decision.
struct Decision {
  std::string lemma;
  std::string theme_id;
  Verdict verdict = Verdict::reject;
  int iteration = 1;
  std::string timestamp;
  std::string reason;
};

struct Rejection {
  std::string lemma;
  std::string theme_id;
  int iteration = 0;
  std::string reason;
};

// Lemma -> iteration it was accepted in; 0 marks a seed word.
struct ThemeWordList {
  std::string theme_id;
  std::map<std::string, int> entries;
  std::uint64_t version = 0;

  bool contains(std::string_view lemma) const { return entries.find(std::string(lemma)) != entries.end(); }
  std::size_t size() const { return entries.size(); }
};

using WordSets = std::map<std::string, std::set<std::string>>;

// Raised when a (lemma, theme) pair has already been decided.
class DecisionConflict : public Error {
 public:
  DecisionConflict(const std::string& msg, Verdict prior, int prior_iteration)
      : Error(msg), prior_verdict_(prior), prior_iteration_(prior_iteration) {}
  Verdict prior_verdict() const { return prior_verdict_; }
  int prior_iteration() const { return prior_iteration_; }

 private:
  Verdict prior_verdict_;
  int prior_iteration_;
};

// Themes, their word lists and the rejection ledger. Every mutation goes
// through apply() and bumps version() by one, so version() equals the number
// of decisions applied on top of the seed lists.
class ThemeLexicon {
 public:
  ThemeLexicon() = default;

  ThemeLexicon(std::vector<Theme> themes, const WordSets& seed) : themes_(std::move(themes)) {
    for (const auto& t : themes_) {
      if (lists_.contains(t.id)) throw Error("duplicate theme id " + t.id);
      ThemeWordList list;
      list.theme_id = t.id;
      if (const auto it = seed.find(t.id); it != seed.end())
        for (const auto& lemma : it->second) list.entries.emplace(lemma, 0);
      lists_.emplace(t.id, std::move(list));
    }
    for (const auto& [id, words] : seed)
      if (!lists_.contains(id)) throw Error("word list for unknown theme " + id);
    seed_ = seed;
  }

  const std::vector<Theme>& themes() const { return themes_; }

  const Theme* find_theme(std::string_view id) const {
    for (const auto& t : themes_)
      if (t.id == id) return &t;
    return nullptr;
  }

  const Theme& theme(std::string_view id) const {
    const auto* t = find_theme(id);
    if (!t) throw NotFoundError("unknown theme " + std::string(id));
    return *t;
  }

  const std::map<std::string, ThemeWordList>& lists() const { return lists_; }

  const ThemeWordList& list(std::string_view id) const {
    const auto it = lists_.find(std::string(id));
    if (it == lists_.end()) throw NotFoundError("unknown theme " + std::string(id));
    return it->second;
  }

  WordSets word_sets() const {
    WordSets out;
    for (const auto& [id, list] : lists_) {
      auto& set = out[id];
      for (const auto& [lemma, it] : list.entries) set.insert(lemma);
    }
    return out;
  }

  bool in_any_list(std::string_view lemma) const {
    for (const auto& [id, list] : lists_)
      if (list.contains(lemma)) return true;
    return false;
  }

  bool is_rejected(const std::string& lemma, const std::string& theme_id) const {
    return ledger_.contains({lemma, theme_id});
  }

  const std::map<std::pair<std::string, std::string>, Rejection>& ledger() const { return ledger_; }
  const std::vector<Decision>& decisions() const { return decisions_; }
  std::uint64_t version() const { return decisions_.size(); }

  std::optional<Decision> prior_decision(const std::string& lemma, const std::string& theme_id) const {
    const auto it = decided_.find({lemma, theme_id});
    if (it == decided_.end()) return std::nullopt;
    return decisions_[it->second];
  }

  // Throws unless `d` may be applied: known theme, well-formed lemma, and no
  // earlier verdict on the same pair. Seed words count as already accepted.
  void check(const Decision& d) const {
    if (!lists_.contains(d.theme_id)) throw NotFoundError("unknown theme " + d.theme_id);
    if (!util::is_lemma(d.lemma)) throw PreconditionError("'" + d.lemma + "' is not a normalised lemma");
    if (d.iteration < 1) throw PreconditionError("iteration must be >= 1");
    if (const auto prior = prior_decision(d.lemma, d.theme_id)) {
      throw DecisionConflict("'" + d.lemma + "' for " + d.theme_id + " was already decided: " +
                                 std::string(to_string(prior->verdict)) + " in iteration " +
                                 std::to_string(prior->iteration),
                             prior->verdict, prior->iteration);
    }
    if (const auto& entries = lists_.at(d.theme_id).entries; entries.contains(d.lemma) && entries.at(d.lemma) == 0) {
      throw DecisionConflict("'" + d.lemma + "' is a seed word of " + d.theme_id, Verdict::accept, 0);
    }
  }

  void apply(const Decision& d) {
    check(d);
    if (d.verdict == Verdict::accept) {
      auto& list = lists_.at(d.theme_id);
      list.entries.emplace(d.lemma, d.iteration);
      ++list.version;
    } else {
      ledger_.emplace(std::make_pair(d.lemma, d.theme_id), Rejection{d.lemma, d.theme_id, d.iteration, d.reason});
    }
    decided_.emplace(std::make_pair(d.lemma, d.theme_id), decisions_.size());
    decisions_.push_back(d);
  }

  // The lexicon as it was after the first `version` decisions.
  ThemeLexicon at_version(std::uint64_t version) const {
    if (version > decisions_.size()) throw PreconditionError("lexicon version " + std::to_string(version) + " is in the future");
    ThemeLexicon out(themes_, seed_);
    for (std::uint64_t i = 0; i < version; ++i) out.apply(decisions_[i]);
    return out;
  }

  ThemeLexicon seed_only() const { return at_version(0); }

 private:
  std::vector<Theme> themes_;
  WordSets seed_;
  std::map<std::string, ThemeWordList> lists_;
  std::map<std::pair<std::string, std::string>, Rejection> ledger_;
  std::vector<Decision> decisions_;
  std::map<std::pair<std::string, std::string>, std::size_t> decided_;
};

// Functional form: a new lexicon with the decision applied.
inline ThemeLexicon apply_decision(const ThemeLexicon& lex, const Decision& d) {
  ThemeLexicon next = lex;
  next.apply(d);
  return next;
}

struct CrossListEntry {
  std::string lemma;
  std::vector<std::string> themes;  // sorted

  bool operator==(const CrossListEntry&) const = default;
};

// Lemmas that sit in two or more word lists, sorted by lemma.
inline std::vector<CrossListEntry> cross_list_report(const WordSets& lists) {
  std::map<std::string, std::vector<std::string>> where;
  for (const auto& [theme, words] : lists)
    for (const auto& w : words) where[w].push_back(theme);
  std::vector<CrossListEntry> out;
  for (auto& [lemma, themes] : where)
    if (themes.size() >= 2) out.push_back({lemma, std::move(themes)});
  return out;
}

inline std::vector<CrossListEntry> cross_list_report(const ThemeLexicon& lex) {
  return cross_list_report(lex.word_sets());
}

}  // namespace adtheme::lexicon
