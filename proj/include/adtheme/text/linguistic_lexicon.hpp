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

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adtheme/text/transliterate.hpp"
#include "adtheme/util/error.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::text {

enum class Pos { noun, propn, adj, other };

inline std::optional<Pos> parse_pos(std::string_view s) {
  if (s == "noun") return Pos::noun;
  if (s == "propn") return Pos::propn;
  if (s == "adj") return Pos::adj;
  if (s == "other") return Pos::other;
  return std::nullopt;
}

struct Analysis {
  Pos pos = Pos::other;
  std::string lemma;
};

// Dictionary from case-folded surface token to its possible analyses, in
// file order. Loaded from "token<TAB>pos<TAB>lemma" lines.
class LinguisticLexicon {
 public:
  void add(std::string_view token, Pos pos, std::string_view lemma) {
    auto key = util::to_lower_ascii(transliterate(token));
    auto& list = entries_[key];
    std::string norm = util::to_lower_ascii(transliterate(lemma));
    for (const auto& a : list)
      if (a.pos == pos && a.lemma == norm) return;
    list.push_back({pos, std::move(norm)});
  }

  std::span<const Analysis> lookup(std::string_view token) const {
    const auto it = entries_.find(std::string(token));
    if (it == entries_.end()) return {};
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }

  static LinguisticLexicon parse(std::istream& in, const std::string& source = "<lexicon>") {
    LinguisticLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto view = util::trim(line);
      if (view.empty() || view.front() == '#') continue;
      const auto fields = util::split(view, '\t');
      auto fail = [&](const std::string& why) {
        throw Error(source + ":" + std::to_string(line_no) + ": " + why);
      };
      if (fields.size() != 3) fail("expected token<TAB>pos<TAB>lemma");
      const auto pos = parse_pos(util::trim(fields[1]));
      if (!pos) fail("unknown part of speech '" + fields[1] + "'");
      const auto token = util::trim(fields[0]);
      const auto lemma = util::trim(fields[2]);
      if (token.empty() || lemma.empty()) fail("empty token or lemma");
      if (*pos != Pos::other && !util::is_lemma(util::to_lower_ascii(transliterate(lemma))))
        fail("lemma '" + std::string(lemma) + "' does not normalise to [a-z0-9]{2,}");
      lex.add(token, *pos, lemma);
    }
    return lex;
  }

  static LinguisticLexicon load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open linguistic lexicon " + path.string());
    return parse(in, path.string());
  }

 private:
  std::unordered_map<std::string, std::vector<Analysis>> entries_;
};

}  // namespace adtheme::text
