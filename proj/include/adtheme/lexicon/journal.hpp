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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adtheme/lexicon/theme_lexicon.hpp"
#include "adtheme/util/files.hpp"

namespace adtheme::lexicon {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const Decision& d) {
  nlohmann::json j = {{"lemma", d.lemma},
                      {"theme_id", d.theme_id},
                      {"verdict", std::string(to_string(d.verdict))},
                      {"iteration", d.iteration},
                      {"timestamp", d.timestamp}};
  if (!d.reason.empty()) j["reason"] = d.reason;
  return j;
}

inline Decision decision_from_json(const nlohmann::json& j) {
  Decision d;
  d.lemma = j.at("lemma").get<std::string>();
  d.theme_id = j.at("theme_id").get<std::string>();
  const auto v = parse_verdict(j.at("verdict").get<std::string>());
  if (!v) throw Error("unknown verdict " + j.at("verdict").dump());
  d.verdict = *v;
  d.iteration = j.at("iteration").get<int>();
  d.timestamp = j.value("timestamp", "");
  d.reason = j.value("reason", "");
  return d;
}

// Append-only decisions.ndjson. The journal is the source of truth: entries
// are fsynced before the in-memory lexicon changes.
class DecisionJournal {
 public:
  DecisionJournal() = default;
  explicit DecisionJournal(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  bool enabled() const { return !path_.empty(); }

  void append(const Decision& d) const {
    if (enabled()) util::append_line_durable(path_, to_json(d).dump());
  }

  // Reads all entries. A torn final line (a crash mid-append) is skipped and
  // reported through `warnings`; a bad line elsewhere is an error.
  static std::vector<Decision> read(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr) {
    std::vector<Decision> out;
    if (!std::filesystem::exists(path)) return out;
    std::vector<std::pair<std::size_t, std::string>> lines;
    util::for_each_line(path, [&](std::size_t n, std::string_view line) {
      if (!util::trim(line).empty()) lines.emplace_back(n, std::string(line));
    });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      try {
        out.push_back(decision_from_json(nlohmann::json::parse(lines[i].second)));
      } catch (const std::exception& e) {
        const std::string where = path.string() + ":" + std::to_string(lines[i].first);
        if (i + 1 == lines.size()) {
          if (warnings) warnings->push_back(where + ": ignoring torn journal entry");
          continue;
        }
        throw Error(where + ": " + e.what());
      }
    }
    return out;
  }

 private:
  std::filesystem::path path_;
};

// Validates, journals, then applies. Fills in a timestamp when missing.
inline void record_decision(ThemeLexicon& lex, const DecisionJournal& journal, Decision d) {
  lex.check(d);
  if (d.timestamp.empty()) d.timestamp = utc_timestamp();
  journal.append(d);
  lex.apply(d);
}

// Full state of a lexicon: lists with the iteration each word entered,
// per-list versions, the rejection ledger and the decision log. Two lexicons
// are equal iff their dumps are byte-identical.
inline nlohmann::json to_json(const ThemeLexicon& lex) {
  nlohmann::json lists = nlohmann::json::object();
  for (const auto& [id, list] : lex.lists()) lists[id] = {{"version", list.version}, {"entries", list.entries}};
  nlohmann::json rejected = nlohmann::json::array();
  for (const auto& [key, r] : lex.ledger())
    rejected.push_back({{"lemma", r.lemma}, {"theme_id", r.theme_id}, {"iteration", r.iteration}, {"reason", r.reason}});
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto& d : lex.decisions()) decisions.push_back(to_json(d));
  return {{"version", lex.version()}, {"lists", lists}, {"rejected", rejected}, {"decisions", decisions}};
}

}  // namespace adtheme::lexicon
