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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adtheme/analytics/distribution.hpp"
#include "adtheme/ingestion/ad.hpp"
#include "adtheme/matcher/matcher.hpp"
#include "adtheme/util/csv.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::analytics {

using ingestion::DemographicAxis;
using CellKey = std::pair<DemographicAxis, std::string>;

// Population percentages per (axis, key), e.g. national statistics.
class Baseline {
 public:
  Baseline() = default;
  explicit Baseline(std::map<CellKey, double> pct) : pct_(std::move(pct)) {}

  // CSV with header axis,key,percentage.
  static Baseline load(const std::filesystem::path& path) {
    const auto table = util::read_csv(path);
    util::require_header(table, {"axis", "key", "percentage"}, path);
    std::map<CellKey, double> pct;
    for (const auto& [line, row] : table.rows) {
      const auto where = path.string() + ":" + std::to_string(line);
      if (row.size() < 3) throw Error(where + ": expected axis,key,percentage");
      const auto axis = ingestion::parse_axis(util::trim(row[0]));
      if (!axis) throw Error(where + ": unknown axis '" + row[0] + "'");
      double value = 0;
      try {
        value = std::stod(std::string(util::trim(row[2])));
      } catch (const std::exception&) {
        throw Error(where + ": percentage is not a number");
      }
      pct[{*axis, std::string(util::trim(row[1]))}] = value;
    }
    return Baseline(std::move(pct));
  }

  const std::map<CellKey, double>& values() const { return pct_; }
  std::optional<double> get(const CellKey& key) const {
    const auto it = pct_.find(key);
    return it == pct_.end() ? std::nullopt : std::optional<double>(it->second);
  }

 private:
  std::map<CellKey, double> pct_;
};

enum class Grouping { per_theme, per_party };

inline std::string_view to_string(Grouping g) { return g == Grouping::per_theme ? "per_theme" : "per_party"; }

struct AxisCoverage {
  std::size_t included = 0;  // ads carrying this axis
  std::size_t excluded = 0;  // ads without it
};

struct DemographicTable {
  Grouping grouping = Grouping::per_theme;
  std::vector<std::string> groups;
  // group -> (axis, key) -> percentage. An axis is absent for a group when
  // none of its ads carried that axis.
  std::map<std::string, std::map<CellKey, double>> pct;
  std::map<CellKey, double> baseline;
  std::map<std::string, std::map<DemographicAxis, AxisCoverage>> coverage;

  // Fixed row order: female, male; age buckets ascending; regions
  // alphabetically. Keys outside the known sets follow, sorted.
  std::vector<CellKey> row_order() const {
    std::set<CellKey> keys;
    for (const auto& [k, v] : baseline) keys.insert(k);
    for (const auto& [g, cells] : pct)
      for (const auto& [k, v] : cells) keys.insert(k);
    static const std::vector<std::string> kGender = {"female", "male"};
    static const std::vector<std::string> kAge = {"13-17", "18-24", "25-34", "35-44", "45-54", "55-64", "65+"};
    std::vector<CellKey> out;
    auto take_known = [&](DemographicAxis axis, const std::vector<std::string>& known) {
      for (const auto& k : known)
        if (keys.contains({axis, k})) out.emplace_back(axis, k);
      for (const auto& k : keys)
        if (k.first == axis && std::find(known.begin(), known.end(), k.second) == known.end()) out.push_back(k);
    };
    take_known(DemographicAxis::gender, kGender);
    take_known(DemographicAxis::age, kAge);
    take_known(DemographicAxis::region, {});
    return out;
  }
};

namespace detail {

// Accumulates midpoint x share per cell for one group.
struct GroupAccumulator {
  std::map<CellKey, double> weight;
  std::map<DemographicAxis, AxisCoverage> coverage;

  void add(const ingestion::Ad& ad) {
    const double m = ad.impressions.midpoint();
    for (const auto axis : ingestion::kAllAxes) {
      if (!ad.has_axis(axis)) {
        ++coverage[axis].excluded;
        continue;
      }
      ++coverage[axis].included;
      for (const auto& c : ad.demographics)
        if (c.axis == axis) weight[{axis, c.key}] += m * c.share;
    }
  }

  std::map<CellKey, double> normalised() const {
    std::map<DemographicAxis, double> totals;
    for (const auto& [k, w] : weight) totals[k.first] += w;
    std::map<CellKey, double> out;
    for (const auto& [k, w] : weight) {
      const double t = totals[k.first];
      if (t > 0.0) out[k] = 100.0 * (w / t);
    }
    return out;
  }
};

}  // namespace detail

// Impression-weighted demographic shares per group. Each ad contributes
// midpoint(impressions) x share to every cell and values are normalised
// within each axis. per_theme groups take the ads matched to each theme
// across all parties; per_party groups take all of a party's ads. Ads missing
// an axis are left out of that axis and counted in `coverage`.
inline DemographicTable demographic_table(std::span<const matcher::MatchResult> results,
                                          const ingestion::Corpus& corpus, Grouping grouping,
                                          const Baseline& baseline, std::span<const lexicon::Theme> themes) {
  DemographicTable table;
  table.grouping = grouping;
  table.baseline = baseline.values();
  std::map<std::string, detail::GroupAccumulator> acc;
  if (grouping == Grouping::per_theme) {
    table.groups = theme_ids(themes);
    for (const auto& id : table.groups) acc[id];
    for (const auto& r : results)
      for (const auto& theme : r.matched_themes)
        for (const auto& id : r.ad_ids) acc[theme].add(corpus.at(id));
  } else {
    table.groups = parties(corpus);
    for (const auto& ad : corpus.ads())
      if (!ad.party.empty()) acc[ad.party].add(ad);
  }
  for (const auto& g : table.groups) {
    const auto& a = acc[g];
    table.pct[g] = a.normalised();
    auto& cov = table.coverage[g];
    for (const auto axis : ingestion::kAllAxes) {
      const auto it = a.coverage.find(axis);
      cov[axis] = it == a.coverage.end() ? AxisCoverage{} : it->second;
    }
  }
  return table;
}

}  // namespace adtheme::analytics
