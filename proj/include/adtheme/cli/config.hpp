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

#include "adtheme/matcher/matcher.hpp"
#include "adtheme/util/error.hpp"

namespace adtheme::cli {

namespace fs = std::filesystem;

struct RunConfig {
  fs::path corpus;       // raw NDJSON corpus; written by fetch, read by preprocess
  fs::path lexicon_dir;  // themes.csv, <theme>.txt, decisions.ndjson, iterations.ndjson
  fs::path registry;     // page_id,party CSV; optional
  fs::path linguistic;   // token/pos/lemma TSV
  fs::path stopwords;    // optional
  fs::path baseline;     // axis,key,percentage CSV; optional
  fs::path out_dir = "out";
  fs::path static_dir;   // served at / by `serve`; optional

  matcher::MatcherConfig matcher;
  std::size_t top_k = 30;       // candidates per theme and iteration
  double df_ceiling = 0.05;
  std::size_t ownership_k = 3;  // parties per theme in the ownership table

  std::string host = "127.0.0.1";
  int port = 8765;
};

// Raised when a command needs a file another command produces.
class MissingArtifact : public Error {
 public:
  MissingArtifact(fs::path artifact, std::string producer)
      : Error("missing " + artifact.string() + "; run " + producer + " first"),
        artifact_(std::move(artifact)),
        producer_(std::move(producer)) {}
  const fs::path& artifact() const { return artifact_; }
  const std::string& producer() const { return producer_; }

 private:
  fs::path artifact_;
  std::string producer_;
};

class StaleArtifact : public MissingArtifact {
 public:
  StaleArtifact(fs::path artifact, std::string producer, const std::string& why)
      : MissingArtifact(std::move(artifact), std::move(producer)), why_(why) {}
  const std::string& why() const { return why_; }

 private:
  std::string why_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Files under the output directory and the command producing each.
struct Artifacts {
  fs::path dir;

  fs::path corpus() const { return dir / "corpus.ndjson"; }
  fs::path quarantine() const { return dir / "quarantine.ndjson"; }
  fs::path processed() const { return dir / "processed.ndjson"; }
  fs::path results() const { return dir / "results.ndjson"; }
  fs::path match_summary() const { return dir / "match_summary.csv"; }
  fs::path match_meta() const { return dir / "match_meta.json"; }
  fs::path report_dir() const { return dir / "report"; }

  static void require(const fs::path& path, const std::string& producer) {
    if (!fs::is_regular_file(path)) throw MissingArtifact(path, producer);
  }
};

enum class Need : unsigned {
  none = 0,
  corpus = 1u << 0,
  lexicon = 1u << 1,
  linguistic = 1u << 2,
};

constexpr Need operator|(Need a, Need b) { return static_cast<Need>(static_cast<unsigned>(a) | static_cast<unsigned>(b)); }
constexpr bool has(Need set, Need flag) { return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0; }

// Makes every path absolute and checks the ones a command relies on.
inline void resolve(RunConfig& cfg, Need need) {
  auto absolute = [](fs::path& p) {
    if (!p.empty()) p = fs::absolute(p).lexically_normal();
  };
  for (auto* p : {&cfg.corpus, &cfg.lexicon_dir, &cfg.registry, &cfg.linguistic, &cfg.stopwords, &cfg.baseline,
                  &cfg.out_dir, &cfg.static_dir})
    absolute(*p);

  std::vector<std::string> problems;
  auto need_file = [&](const fs::path& p, const char* flag) {
    if (p.empty()) {
      problems.push_back(std::string(flag) + " is required");
    } else if (!fs::is_regular_file(p)) {
      problems.push_back(std::string(flag) + " " + p.string() + " does not exist");
    }
  };
  auto optional_file = [&](const fs::path& p, const char* flag) {
    if (!p.empty() && !fs::is_regular_file(p)) problems.push_back(std::string(flag) + " " + p.string() + " does not exist");
  };
  if (has(need, Need::corpus)) need_file(cfg.corpus, "--corpus");
  if (has(need, Need::linguistic)) need_file(cfg.linguistic, "--linguistic");
  if (has(need, Need::lexicon)) {
    if (cfg.lexicon_dir.empty()) {
      problems.push_back("--lexicon is required");
    } else if (!fs::is_directory(cfg.lexicon_dir)) {
      problems.push_back("--lexicon " + cfg.lexicon_dir.string() + " is not a directory");
    }
  }
  optional_file(cfg.registry, "--registry");
  optional_file(cfg.stopwords, "--stopwords");
  optional_file(cfg.baseline, "--baseline");
  if (!cfg.static_dir.empty() && !fs::is_directory(cfg.static_dir))
    problems.push_back("--static " + cfg.static_dir.string() + " is not a directory");
  if (cfg.df_ceiling <= 0.0 || cfg.df_ceiling > 1.0) problems.push_back("--df-ceiling must be in (0, 1]");
  if (cfg.top_k == 0) problems.push_back("--top-k must be positive");
  if (cfg.ownership_k == 0) problems.push_back("--ownership-k must be positive");
  if (cfg.port < 0 || cfg.port > 65535) problems.push_back("--port must be in [0, 65535]");
  try {
    cfg.matcher.validate();
  } catch (const PreconditionError& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw ConfigError(msg);
  }
}

}  // namespace adtheme::cli
