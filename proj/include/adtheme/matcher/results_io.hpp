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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/matcher/matcher.hpp"
#include "adtheme/util/csv.hpp"
#include "adtheme/util/files.hpp"
#include "adtheme/util/format.hpp"

namespace adtheme::matcher {

inline nlohmann::json to_json(const MatchResult& r) {
  nlohmann::json sizes = nlohmann::json::object();
  for (const auto& [theme, s] : r.intersection_sizes) sizes[theme] = s;
  return {{"text_key", r.text_key},
          {"ad_ids", r.ad_ids},
          {"matched_themes", std::vector<std::string>(r.matched_themes.begin(), r.matched_themes.end())},
          {"intersection_sizes", sizes},
          {"lexicon_version", r.lexicon_version}};
}

inline MatchResult result_from_json(const nlohmann::json& j) {
  MatchResult r;
  r.text_key = j.at("text_key").get<std::string>();
  r.ad_ids = j.at("ad_ids").get<std::vector<std::string>>();
  for (const auto& t : j.at("matched_themes")) r.matched_themes.insert(t.get<std::string>());
  for (const auto& [theme, s] : j.at("intersection_sizes").items()) r.intersection_sizes[theme] = s.get<int>();
  r.lexicon_version = j.at("lexicon_version").get<std::uint64_t>();
  return r;
}

inline void save_results(const std::vector<MatchResult>& results, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : results) out += to_json(r).dump() + "\n";
  util::write_file_atomic(path, out);
}

inline std::vector<MatchResult> load_results(const std::filesystem::path& path) {
  std::vector<MatchResult> out;
  util::for_each_line(path, [&](std::size_t line, std::string_view text) {
    if (util::trim(text).empty()) return;
    try {
      out.push_back(result_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

// party,n_ads,pct_matched
inline std::string summary_csv(const std::vector<PartySummary>& summary) {
  std::string out = "party,n_ads,pct_matched\n";
  for (const auto& row : summary)
    out += util::csv_field(row.party) + "," + std::to_string(row.n_ads) + "," + util::fixed2(row.pct_matched()) + "\n";
  return out;
}

}  // namespace adtheme::matcher
