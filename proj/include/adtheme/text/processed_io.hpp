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

#include "adtheme/text/pipeline.hpp"
#include "adtheme/util/files.hpp"

namespace adtheme::text {

inline nlohmann::json to_json(const ProcessedText& pt) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [lemma, n] : pt.lemma_counts) counts[lemma] = n;
  return {{"text_key", pt.text_key}, {"lemmas", pt.lemmas}, {"counts", counts}, {"ad_ids", pt.ad_ids}};
}

inline ProcessedText processed_from_json(const nlohmann::json& j) {
  ProcessedText pt;
  pt.text_key = j.at("text_key").get<std::string>();
  pt.lemmas = j.at("lemmas").get<std::vector<std::string>>();
  for (const auto& [lemma, n] : j.at("counts").items()) pt.lemma_counts[lemma] = n.get<int>();
  pt.ad_ids = j.at("ad_ids").get<std::vector<std::string>>();
  return pt;
}

inline void save_processed(const std::vector<ProcessedText>& texts, const std::filesystem::path& path) {
  std::string out;
  for (const auto& pt : texts) {
    out += to_json(pt).dump();
    out += '\n';
  }
  util::write_file_atomic(path, out);
}

inline std::vector<ProcessedText> load_processed(const std::filesystem::path& path) {
  std::vector<ProcessedText> out;
  util::for_each_line(path, [&](std::size_t line, std::string_view text) {
    if (util::trim(text).empty()) return;
    try {
      out.push_back(processed_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace adtheme::text
