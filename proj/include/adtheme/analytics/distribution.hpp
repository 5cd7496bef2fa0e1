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
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/lexicon/theme_lexicon.hpp"
#include "adtheme/matcher/matcher.hpp"
#include "adtheme/util/error.hpp"

namespace adtheme::analytics {

enum class Basis { ad_count, impressions };

inline std::string_view to_string(Basis b) { return b == Basis::ad_count ? "ad_count" : "impressions"; }

struct ThemeDistribution {
  std::string party;
  Basis basis = Basis::ad_count;
  std::map<std::string, double> rows;  // theme_id -> percentage; every theme present
  std::size_t n_ads = 0;
  std::size_t n_matched_ads = 0;
};

class DistributionError : public Error {
 public:
  enum class Kind { no_ads, no_matches, no_weight };
  DistributionError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline std::vector<std::string> theme_ids(std::span<const lexicon::Theme> themes) {
  std::vector<std::string> ids;
  for (const auto& t : themes) ids.push_back(t.id);
  return ids;
}

// Share of each theme among a party's (ad, theme) matches. An ad matched to k
// themes contributes to k rows with full weight, so columns sum to 100. The
// weight is 1 per pair, or the ad's impression midpoint.
inline ThemeDistribution theme_distribution(std::span<const matcher::MatchResult> results,
                                            const ingestion::Corpus& corpus, const std::string& party, Basis basis,
                                            std::span<const lexicon::Theme> themes) {
  ThemeDistribution d;
  d.party = party;
  d.basis = basis;
  std::map<std::string, double> weight;
  for (const auto& t : themes) weight[t.id] = 0.0;
  double total = 0.0;
  for (const auto& r : results) {
    for (const auto& id : r.ad_ids) {
      const auto& ad = corpus.at(id);
      if (ad.party != party) continue;
      ++d.n_ads;
      if (!r.matched()) continue;
      ++d.n_matched_ads;
      const double w = basis == Basis::ad_count ? 1.0 : ad.impressions.midpoint();
      for (const auto& theme : r.matched_themes) {
        weight[theme] += w;
        total += w;
      }
    }
  }
  if (d.n_ads == 0) throw DistributionError(DistributionError::Kind::no_ads, "party " + party + " has no ads");
  if (d.n_matched_ads == 0)
    throw DistributionError(DistributionError::Kind::no_matches, "party " + party + " has ads but none matched a theme");
  if (total <= 0.0)
    throw DistributionError(DistributionError::Kind::no_weight, "party " + party + " has matched ads with zero impressions");
  for (const auto& [theme, w] : weight) d.rows[theme] = 100.0 * (w / total);
  return d;
}

inline std::vector<std::string> parties(const ingestion::Corpus& corpus) {
  std::set<std::string> out;
  for (const auto& ad : corpus.ads())
    if (!ad.party.empty()) out.insert(ad.party);
  return {out.begin(), out.end()};
}

struct OwnershipRow {
  std::string theme_id;
  std::vector<std::pair<std::string, double>> ranked;  // (party, fraction of theme impressions), descending
  double total_impressions = 0.0;
};

// For every theme, parties ranked by summed impression midpoints of their
// ads matched to it. Shares are fractions of the theme's total over all
// parties, truncated to the top k. Equal shares rank by party name.
inline std::vector<OwnershipRow> top_parties_per_theme(std::span<const matcher::MatchResult> results,
                                                       const ingestion::Corpus& corpus, std::size_t k,
                                                       std::span<const lexicon::Theme> themes) {
  std::map<std::string, std::map<std::string, double>> by_theme;
  for (const auto& r : results) {
    for (const auto& id : r.ad_ids) {
      const auto& ad = corpus.at(id);
      const std::string party = ad.party.empty() ? "(unresolved)" : ad.party;
      for (const auto& theme : r.matched_themes) by_theme[theme][party] += ad.impressions.midpoint();
    }
  }
  std::vector<OwnershipRow> out;
  for (const auto& t : themes) {
    OwnershipRow row;
    row.theme_id = t.id;
    const auto it = by_theme.find(t.id);
    if (it != by_theme.end()) {
      for (const auto& [party, w] : it->second) row.total_impressions += w;
      if (row.total_impressions > 0.0) {
        for (const auto& [party, w] : it->second) row.ranked.emplace_back(party, w / row.total_impressions);
      }
      std::stable_sort(row.ranked.begin(), row.ranked.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      if (row.ranked.size() > k) row.ranked.resize(k);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace adtheme::analytics
