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

#include <nlohmann/json.hpp>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/ingestion/parse.hpp"
#include "adtheme/util/error.hpp"
#include "adtheme/util/files.hpp"
#include "adtheme/util/strings.hpp"

namespace adtheme::ingestion {

struct RejectedLine {
  std::size_t line = 0;
  std::string field_path;
  std::string message;
  std::string raw;
};

struct LoadReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<RejectedLine> rejections;
};

struct LoadedCorpus {
  Corpus corpus;
  LoadReport report;
};

// Parses NDJSON text, one ad per line. Blank lines are ignored; every other
// line is either accepted or rejected with its line number.
inline LoadedCorpus parse_corpus(std::istream& in) {
  LoadedCorpus out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (util::trim(line).empty()) continue;
    auto reject = [&](std::string path, std::string msg) {
      out.report.rejections.push_back({line_no, std::move(path), std::move(msg), line});
      ++out.report.rejected;
    };
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      reject("$", std::string("malformed JSON: ") + e.what());
      continue;
    }
    try {
      Ad ad = parse_ad_record(rec);
      if (out.corpus.contains(ad.id)) {
        reject("id", "duplicate ad id " + ad.id);
        continue;
      }
      out.corpus.add(std::move(ad));
      ++out.report.accepted;
    } catch (const RecordError& e) {
      reject(e.field_path(), e.what());
    }
  }
  return out;
}

inline LoadedCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read corpus " + path.string());
  return parse_corpus(in);
}

inline std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& ad : corpus.ads()) {
    out += ad_to_record(ad).dump();
    out += '\n';
  }
  return out;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  util::write_file_atomic(path, serialize_corpus(corpus));
}

// Rejected records go to a sidecar file so nothing is dropped silently.
inline void write_quarantine(const LoadReport& report, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : report.rejections) {
    nlohmann::json j = {{"line", r.line}, {"field", r.field_path}, {"error", r.message}, {"raw", r.raw}};
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  util::write_file_atomic(path, out);
}

}  // namespace adtheme::ingestion
