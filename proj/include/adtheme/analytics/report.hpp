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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/analytics/demographics.hpp"
#include "adtheme/analytics/distribution.hpp"
#include "adtheme/matcher/matcher.hpp"
#include "adtheme/matcher/results_io.hpp"
#include "adtheme/util/csv.hpp"
#include "adtheme/util/files.hpp"
#include "adtheme/util/format.hpp"

namespace adtheme::analytics {

enum class Format { csv, markdown };

inline std::string display_name(std::span<const lexicon::Theme> themes, const std::string& id) {
  for (const auto& t : themes)
    if (t.id == id) return t.display_name.empty() ? t.id : t.display_name;
  return id;
}

// Rows by descending percentage; equal values by display name.
inline std::vector<std::pair<std::string, double>> sorted_rows(const ThemeDistribution& d,
                                                               std::span<const lexicon::Theme> themes) {
  std::vector<std::pair<std::string, double>> rows(d.rows.begin(), d.rows.end());
  std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return display_name(themes, a.first) < display_name(themes, b.first);
  });
  return rows;
}

// --- theme distributions -------------------------------------------------

inline std::string render(std::span<const ThemeDistribution> dists, std::span<const lexicon::Theme> themes,
                          Format format) {
  std::string out;
  if (format == Format::csv) {
    out = "party,basis,theme_id,theme,percentage\n";
    for (const auto& d : dists)
      for (const auto& [id, pct] : sorted_rows(d, themes))
        out += util::csv_field(d.party) + "," + std::string(to_string(d.basis)) + "," + id + "," +
               util::csv_field(display_name(themes, id)) + "," + util::fixed2(pct) + "\n";
    return out;
  }
  for (const auto& d : dists) {
    out += "| Theme (" + d.party + ") | % |\n|:--|--:|\n";
    for (const auto& [id, pct] : sorted_rows(d, themes))
      out += "| " + display_name(themes, id) + " | " + util::percent(pct) + " |\n";
    out += "\n";
  }
  return out;
}

// --- matched share per party ---------------------------------------------

inline std::string render(std::span<const matcher::PartySummary> summary, Format format) {
  if (format == Format::csv) return matcher::summary_csv({summary.begin(), summary.end()});
  std::string out = "| Party | Number of Ads | Matched | Not matched |\n|:--|--:|--:|--:|\n";
  for (const auto& row : summary) {
    const double matched = util::round_half_up_2(row.pct_matched());
    out += "| " + row.party + " | " + std::to_string(row.n_ads) + " | " + util::percent(matched) + " | " +
           util::percent(100.0 - matched) + " |\n";
  }
  return out;
}

// --- top parties per theme -----------------------------------------------

inline std::string render(std::span<const OwnershipRow> rows, std::span<const lexicon::Theme> themes, std::size_t k,
                          Format format) {
  std::string out;
  if (format == Format::csv) {
    out = "theme_id,theme,rank,party,share_pct\n";
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.ranked.size(); ++i)
        out += row.theme_id + "," + util::csv_field(display_name(themes, row.theme_id)) + "," + std::to_string(i + 1) +
               "," + util::csv_field(row.ranked[i].first) + "," + util::fixed2(100.0 * row.ranked[i].second) + "\n";
    return out;
  }
  static const char* kOrdinals[] = {"1st", "2nd", "3rd"};
  out = "| Theme |";
  std::string rule = "|:--|";
  for (std::size_t i = 0; i < k; ++i) {
    out += " " + (i < 3 ? std::string(kOrdinals[i]) : std::to_string(i + 1) + "th") + " |";
    rule += ":--|";
  }
  out += "\n" + rule + "\n";
  for (const auto& row : rows) {
    out += "| " + display_name(themes, row.theme_id) + " |";
    for (std::size_t i = 0; i < k; ++i) {
      if (i < row.ranked.size()) {
        out += " " + row.ranked[i].first + " (" + util::percent(100.0 * row.ranked[i].second) + ") |";
      } else {
        out += " - |";
      }
    }
    out += "\n";
  }
  return out;
}

// --- demographics --------------------------------------------------------

// Cell value for rendering: the percentage, 0 when the axis has data for the
// group but not this key, nullopt when the group has no data on the axis.
inline std::optional<double> cell_value(const DemographicTable& t, const std::string& group, const CellKey& key) {
  const auto git = t.pct.find(group);
  if (git == t.pct.end()) return std::nullopt;
  if (const auto it = git->second.find(key); it != git->second.end()) return it->second;
  for (const auto& [k, v] : git->second)
    if (k.first == key.first) return 0.0;
  return std::nullopt;
}

inline std::string render(const DemographicTable& t, std::span<const lexicon::Theme> themes, Format format) {
  const auto rows = t.row_order();
  auto group_name = [&](const std::string& g) {
    return t.grouping == Grouping::per_theme ? display_name(themes, g) : g;
  };
  std::string out;
  if (format == Format::csv) {
    out = "grouping,group,axis,key,percentage,population\n";
    for (const auto& g : t.groups) {
      for (const auto& key : rows) {
        const auto v = cell_value(t, g, key);
        const auto pop = t.baseline.find(key);
        out += std::string(to_string(t.grouping)) + "," + util::csv_field(g) + "," +
               std::string(ingestion::to_string(key.first)) + "," + util::csv_field(key.second) + "," +
               (v ? util::fixed2(*v) : "") + "," + (pop != t.baseline.end() ? util::fixed2(pop->second) : "") + "\n";
      }
    }
    return out;
  }
  out = "| Dem. | Pop. |";
  std::string rule = "|:--|--:|";
  for (const auto& g : t.groups) {
    out += " " + group_name(g) + " |";
    rule += "--:|";
  }
  out += "\n" + rule + "\n";
  for (const auto& key : rows) {
    const auto pop = t.baseline.find(key);
    out += "| " + key.second + " | " + (pop != t.baseline.end() ? util::percent(pop->second) : "-") + " |";
    for (const auto& g : t.groups) {
      const auto v = cell_value(t, g, key);
      out += " " + (v ? util::percent(*v) : std::string("n/a")) + " |";
    }
    out += "\n";
  }
  return out;
}

// --- JSON payloads -------------------------------------------------------

inline nlohmann::json to_json(const ThemeDistribution& d, std::span<const lexicon::Theme> themes) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [id, pct] : sorted_rows(d, themes))
    rows.push_back({{"theme_id", id}, {"theme", display_name(themes, id)}, {"percentage", util::round_half_up_2(pct)}});
  return {{"party", d.party}, {"basis", std::string(to_string(d.basis))}, {"n_ads", d.n_ads},
          {"n_matched_ads", d.n_matched_ads}, {"rows", rows}};
}

inline nlohmann::json to_json(const OwnershipRow& row) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& [party, share] : row.ranked)
    ranked.push_back({{"party", party}, {"share_pct", util::round_half_up_2(100.0 * share)}});
  return {{"theme_id", row.theme_id}, {"ranked", ranked}};
}

inline nlohmann::json to_json(const DemographicTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& key : t.row_order()) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto& g : t.groups) {
      const auto v = cell_value(t, g, key);
      values[g] = v ? nlohmann::json(util::round_half_up_2(*v)) : nlohmann::json(nullptr);
    }
    const auto pop = t.baseline.find(key);
    rows.push_back({{"axis", std::string(ingestion::to_string(key.first))},
                    {"key", key.second},
                    {"population", pop != t.baseline.end() ? nlohmann::json(pop->second) : nlohmann::json(nullptr)},
                    {"values", values}});
  }
  nlohmann::json coverage = nlohmann::json::object();
  for (const auto& [g, axes] : t.coverage)
    for (const auto& [axis, c] : axes)
      coverage[g][std::string(ingestion::to_string(axis))] = {{"included", c.included}, {"excluded", c.excluded}};
  return {{"grouping", std::string(to_string(t.grouping))}, {"groups", t.groups}, {"rows", rows}, {"coverage", coverage}};
}

// --- full report ---------------------------------------------------------

struct ReportInputs {
  std::span<const matcher::MatchResult> results;
  const ingestion::Corpus* corpus = nullptr;
  std::span<const lexicon::Theme> themes;
  const Baseline* baseline = nullptr;
  matcher::MatcherConfig matcher;
  std::uint64_t lexicon_version = 0;
  std::size_t top_k = 3;
};

struct ReportTables {
  std::vector<matcher::PartySummary> summary;
  std::vector<ThemeDistribution> by_ads;
  std::vector<ThemeDistribution> by_impressions;
  std::vector<OwnershipRow> ownership;
  DemographicTable per_theme;
  DemographicTable per_party;
  std::vector<std::string> notes;
};

inline ReportTables compute_tables(const ReportInputs& in) {
  ReportTables t;
  const auto& corpus = *in.corpus;
  const Baseline empty;
  const auto& baseline = in.baseline ? *in.baseline : empty;
  t.summary = matcher::summarize(in.results, corpus);
  for (const auto& party : parties(corpus)) {
    for (const auto basis : {Basis::ad_count, Basis::impressions}) {
      try {
        auto d = theme_distribution(in.results, corpus, party, basis, in.themes);
        (basis == Basis::ad_count ? t.by_ads : t.by_impressions).push_back(std::move(d));
      } catch (const DistributionError& e) {
        if (basis == Basis::ad_count || e.kind() == DistributionError::Kind::no_weight) t.notes.push_back(e.what());
      }
    }
  }
  t.ownership = top_parties_per_theme(in.results, corpus, in.top_k, in.themes);
  t.per_theme = demographic_table(in.results, corpus, Grouping::per_theme, baseline, in.themes);
  t.per_party = demographic_table(in.results, corpus, Grouping::per_party, baseline, in.themes);
  return t;
}

inline std::string coverage_markdown(const DemographicTable& t, std::span<const lexicon::Theme> themes) {
  std::string out = "| Group | Gender | Age | Region |\n|:--|--:|--:|--:|\n";
  for (const auto& g : t.groups) {
    const auto& cov = t.coverage.at(g);
    out += "| " + (t.grouping == Grouping::per_theme ? display_name(themes, g) : g) + " |";
    for (const auto axis : ingestion::kAllAxes) {
      const auto& c = cov.at(axis);
      out += " " + std::to_string(c.included) + "/" + std::to_string(c.included + c.excluded) + " |";
    }
    out += "\n";
  }
  return out;
}

// File name -> content for every report artefact. Content is a pure function
// of the inputs: no timestamps, no paths.
inline std::map<std::string, std::string> render_report(const ReportInputs& in, const ReportTables& t) {
  std::map<std::string, std::string> files;
  files["matched_summary.csv"] = render(std::span<const matcher::PartySummary>(t.summary), Format::csv);
  files["theme_distribution_ads.csv"] = render(std::span<const ThemeDistribution>(t.by_ads), in.themes, Format::csv);
  files["theme_distribution_impressions.csv"] =
      render(std::span<const ThemeDistribution>(t.by_impressions), in.themes, Format::csv);
  files["top_parties.csv"] = render(std::span<const OwnershipRow>(t.ownership), in.themes, in.top_k, Format::csv);
  files["demographics_per_theme.csv"] = render(t.per_theme, in.themes, Format::csv);
  files["demographics_per_party.csv"] = render(t.per_party, in.themes, Format::csv);

  std::size_t n_ads = 0;
  for (const auto& r : in.results) n_ads += r.ad_ids.size();
  std::string md = "# Theme report\n\n";
  md += "- Matcher: min_exclusive=" + std::to_string(in.matcher.min_exclusive) +
        ", multi_threshold=" + std::to_string(in.matcher.multi_threshold) + "\n";
  md += "- Lexicon version: " + std::to_string(in.lexicon_version) + "\n";
  md += "- Ads: " + std::to_string(n_ads) + " (" + std::to_string(in.results.size()) + " unique texts)\n\n";
  md += "## Ads matched to at least one theme\n\n" + render(std::span<const matcher::PartySummary>(t.summary), Format::markdown);
  md += "\n## Theme distribution by number of ads\n\n" +
        render(std::span<const ThemeDistribution>(t.by_ads), in.themes, Format::markdown);
  md += "## Theme distribution by impressions\n\n" +
        render(std::span<const ThemeDistribution>(t.by_impressions), in.themes, Format::markdown);
  md += "## Top parties by impressions per theme\n\n" +
        render(std::span<const OwnershipRow>(t.ownership), in.themes, in.top_k, Format::markdown);
  md += "\n## Demographic distribution of impressions per theme\n\n" + render(t.per_theme, in.themes, Format::markdown);
  md += "\n## Demographic distribution of impressions per party\n\n" + render(t.per_party, in.themes, Format::markdown);
  md += "\n## Demographic coverage (ads with data / ads)\n\n### Per theme\n\n" + coverage_markdown(t.per_theme, in.themes);
  md += "\n### Per party\n\n" + coverage_markdown(t.per_party, in.themes);
  if (!t.notes.empty()) {
    md += "\n## Notes\n\n";
    for (const auto& n : t.notes) md += "- " + n + "\n";
  }
  files["report.md"] = md;
  return files;
}

inline void write_report(const std::filesystem::path& dir, const std::map<std::string, std::string>& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) util::write_file_atomic(dir / name, content);
}

}  // namespace adtheme::analytics
