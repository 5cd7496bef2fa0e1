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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/util/csv.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::ingestion {

// Hand-maintained mapping from archive page id to party label.
class PageRegistry {
 public:
  PageRegistry() = default;
  explicit PageRegistry(std::map<std::string, std::string> parties) : parties_(std::move(parties)) {}

  // CSV with header page_id,party.
  static PageRegistry load(const std::filesystem::path& path) {
    const auto table = util::read_csv(path);
    util::require_header(table, {"page_id", "party"}, path);
    std::map<std::string, std::string> parties;
    for (const auto& [line, row] : table.rows) {
      if (row.size() < 2) throw Error(path.string() + ":" + std::to_string(line) + ": expected page_id,party");
      const std::string id(util::trim(row[0]));
      const std::string party(util::trim(row[1]));
      if (id.empty() || party.empty())
        throw Error(path.string() + ":" + std::to_string(line) + ": empty page_id or party");
      const auto [it, inserted] = parties.emplace(id, party);
      if (!inserted && it->second != party)
        throw Error(path.string() + ":" + std::to_string(line) + ": page " + id + " assigned to two parties");
    }
    return PageRegistry(std::move(parties));
  }

  const std::string* party_of(const std::string& page_id) const {
    const auto it = parties_.find(page_id);
    return it == parties_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> page_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, party] : parties_) out.push_back(id);
    return out;
  }

  // Sets Ad::party for every ad whose page resolves. Returns the sorted set
  // of page ids that did not resolve; those ads keep an empty party.
  std::vector<std::string> resolve(Corpus& corpus) const {
    std::set<std::string> unresolved;
    for (auto& ad : corpus.mutable_ads()) {
      if (const auto* p = party_of(ad.page_id)) {
        ad.party = *p;
      } else {
        unresolved.insert(ad.page_id);
      }
    }
    return {unresolved.begin(), unresolved.end()};
  }

  std::size_t size() const { return parties_.size(); }

 private:
  std::map<std::string, std::string> parties_;
};

}  // namespace adtheme::ingestion
