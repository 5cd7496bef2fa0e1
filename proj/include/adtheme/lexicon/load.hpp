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
#include <string>
#include <vector>

#include "adtheme/lexicon/journal.hpp"
#include "adtheme/lexicon/theme_lexicon.hpp"
#include "adtheme/text/linguistic_lexicon.hpp"
#include "adtheme/text/pipeline.hpp"
#include "adtheme/util/csv.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::lexicon {

inline constexpr const char* kThemesFile = "themes.csv";
inline constexpr const char* kDecisionsFile = "decisions.ndjson";
inline constexpr const char* kIterationsFile = "iterations.ndjson";

// Runs a word-list line through the same pipeline as ad text. One line can
// yield several lemmas ("co2-uitstoot") or none (a verb).
inline std::vector<std::string> normalize_word(std::string_view word, const text::LinguisticLexicon& linguistic) {
  return text::analyze(text::transliterate(word), linguistic).lemmas;
}

inline std::vector<Theme> load_themes(const std::filesystem::path& path) {
  const auto table = util::read_csv(path);
  util::require_header(table, {"theme_id", "display_name", "cap_categories"}, path);
  std::vector<Theme> themes;
  for (const auto& [line, row] : table.rows) {
    const auto where = path.string() + ":" + std::to_string(line);
    if (row.size() < 3) throw Error(where + ": expected theme_id,display_name,cap_categories");
    Theme t;
    t.id = std::string(util::trim(row[0]));
    t.display_name = std::string(util::trim(row[1]));
    if (t.id.empty() || !std::all_of(t.id.begin(), t.id.end(), [](unsigned char c) {
          return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        }))
      throw Error(where + ": theme id must match [a-z0-9_]+");
    for (const auto& code : util::split(row[2], ';')) {
      const auto c = util::trim(code);
      if (c.empty()) continue;
      if (!util::is_all_digits(c)) throw Error(where + ": CAP category '" + std::string(c) + "' is not a number");
      t.cap_categories.push_back(std::stoi(std::string(c)));
    }
    if (t.cap_categories.empty()) throw Error(where + ": theme " + t.id + " lists no CAP categories");
    if (row.size() > 3) t.description = std::string(util::trim(row[3]));
    for (const auto& other : themes)
      if (other.id == t.id) throw Error(where + ": duplicate theme id " + t.id);
    themes.push_back(std::move(t));
  }
  return themes;
}

struct LoadedLexicon {
  ThemeLexicon lexicon;
  std::vector<std::string> warnings;
};

// Loads themes.csv, one <theme_id>.txt per theme and replays decisions.ndjson
// when present. Words are normalised on load. A list file for a theme not in
// themes.csv is fatal; missing or empty lists and duplicates are warnings.
inline LoadedLexicon load_lexicon(const std::filesystem::path& dir, const text::LinguisticLexicon& linguistic) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("lexicon directory " + dir.string() + " does not exist");
  LoadedLexicon out;
  auto themes = load_themes(dir / kThemesFile);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  WordSets seed;
  for (const auto& file : files) {
    const auto id = file.stem().string();
    const bool known = std::any_of(themes.begin(), themes.end(), [&](const Theme& t) { return t.id == id; });
    if (!known) throw Error("word list " + file.string() + " belongs to unknown theme " + id);
    auto& words = seed[id];
    std::ifstream in(file);
    if (!in) throw Error("cannot read " + file.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto view = util::trim(line);
      if (view.empty() || view.front() == '#') continue;
      const auto where = file.string() + ":" + std::to_string(line_no);
      const auto lemmas = normalize_word(view, linguistic);
      if (lemmas.empty()) out.warnings.push_back(where + ": '" + std::string(view) + "' normalises to nothing");
      for (const auto& lemma : lemmas)
        if (!words.insert(lemma).second) out.warnings.push_back(where + ": duplicate word '" + lemma + "'");
    }
  }
  for (const auto& t : themes) {
    if (!seed.contains(t.id)) {
      out.warnings.push_back("theme " + t.id + " has no word list file");
    } else if (seed[t.id].empty()) {
      out.warnings.push_back("theme " + t.id + " has an empty word list");
    }
  }

  out.lexicon = ThemeLexicon(std::move(themes), seed);
  for (const auto& d : DecisionJournal::read(dir / kDecisionsFile, &out.warnings)) out.lexicon.apply(d);
  for (const auto& entry : cross_list_report(out.lexicon))
    out.warnings.push_back("'" + entry.lemma + "' appears in " + util::join(entry.themes, ", "));
  return out;
}

}  // namespace adtheme::lexicon
