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

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adtheme/cli/pipeline.hpp"
#include "adtheme/cli/service.hpp"
#include "adtheme/cli/session.hpp"

namespace {

using namespace adtheme;
using cli::Need;
using cli::RunConfig;

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2, kConflict = 3 };

// One JSON object per error on stderr so wrappers can parse it.
int report_error(const std::string& code, const std::string& message, nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = code;
  extra["message"] = message;
  std::cerr << extra.dump() << "\n";
  return code == "conflict" ? kConflict : (code == "internal" || code == "fetch" || code == "auth") ? kFailure : kUsage;
}

// Verdicts typed at the terminal: a(ccept), r(eject), s(kip), q(uit).
class PromptPolicy : public refinement::VerdictSource {
 public:
  PromptPolicy(const cli::Session& session, std::istream& in, std::ostream& out)
      : session_(session), in_(in), out_(out) {}

  bool quit() const { return quit_; }

  std::vector<refinement::CandidateVerdict> decide(const lexicon::Theme& theme,
                                                   std::span<const refinement::CandidateWord> candidates) override {
    std::vector<refinement::CandidateVerdict> out;
    if (quit_) return out;
    out_ << "\n== " << theme.display_name << " (" << theme.id << "): " << candidates.size() << " candidates\n";
    for (const auto& c : candidates) {
      out_ << "\n  " << c.lemma << "  in " << c.match_count << " matched texts, corpus df "
           << util::fixed(100.0 * c.corpus_doc_frequency, 2) << "%\n";
      if (!c.sample_text_keys.empty()) out_ << "    " << highlighted(c.sample_text_keys.front(), c.lemma) << "\n";
      for (;;) {
        out_ << "  [a]ccept [r]eject [s]kip [q]uit > " << std::flush;
        std::string answer;
        if (!std::getline(in_, answer)) {
          quit_ = true;
          return out;
        }
        const auto a = util::to_lower_ascii(util::trim(answer));
        if (a == "a" || a == "accept") {
          out.push_back({c.lemma, lexicon::Verdict::accept, ""});
        } else if (a == "r" || a == "reject") {
          out.push_back({c.lemma, lexicon::Verdict::reject, ""});
        } else if (a == "q" || a == "quit") {
          quit_ = true;
          return out;
        } else if (a != "s" && a != "skip") {
          continue;
        }
        break;
      }
    }
    return out;
  }

 private:
  std::string highlighted(const std::string& key, const std::string& lemma) const {
    auto text = session_.ascii_text(key);
    const auto marks = text::lemma_occurrences(text, lemma, session_.linguistic());
    for (auto it = marks.rbegin(); it != marks.rend(); ++it) {
      text.insert(it->first + it->second, "]]");
      text.insert(it->first, "[[");
    }
    if (text.size() > 240) text = text.substr(0, 237) + "...";
    return text;
  }

  const cli::Session& session_;
  std::istream& in_;
  std::ostream& out_;
  bool quit_ = false;
};

void print_suggestions(const std::string& theme_id, const refinement::Suggestions& s) {
  std::cout << "# " << theme_id << ": " << s.candidates.size() << " candidates from " << s.matched_texts
            << " matched texts\n";
  if (!s.diagnostic.empty()) std::cout << "#   " << s.diagnostic << "\n";
  for (const auto& c : s.candidates)
    std::cout << theme_id << "\t" << c.lemma << "\t" << c.match_count << "\t"
              << util::fixed(c.corpus_doc_frequency, 4) << "\n";
}

void print_iteration(const refinement::IterationRecord& r) {
  std::cout << "iteration " << r.iteration << ": suggested " << r.suggested << ", accepted " << r.accepted
            << ", rejected " << r.rejected << ", matched texts " << r.matched_texts_before << " -> "
            << r.matched_texts_after << ", lexicon version " << r.lexicon_version_before << " -> "
            << r.lexicon_version_after << (r.converged() ? " (converged)" : "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theme matching for political ad archives"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option values");

  RunConfig cfg;
  app.add_option("--corpus", cfg.corpus, "Raw NDJSON ad corpus");
  app.add_option("--lexicon", cfg.lexicon_dir, "Theme lexicon directory");
  app.add_option("--registry", cfg.registry, "page_id,party CSV");
  app.add_option("--linguistic", cfg.linguistic, "Token/POS/lemma TSV");
  app.add_option("--stopwords", cfg.stopwords, "Stopword list");
  app.add_option("--baseline", cfg.baseline, "Population baseline CSV");
  app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--min-exclusive", cfg.matcher.min_exclusive, "Overlaps up to this size never match")
      ->capture_default_str();
  app.add_option("--multi-threshold", cfg.matcher.multi_threshold, "Overlaps above this size always match")
      ->capture_default_str();
  app.add_option("--df-ceiling", cfg.df_ceiling, "Skip candidates above this corpus document frequency")
      ->capture_default_str();
  app.add_option("--top-k", cfg.top_k, "Candidates per theme and iteration")->capture_default_str();
  app.add_option("--ownership-k", cfg.ownership_k, "Parties per theme in the ownership table")->capture_default_str();
  app.add_option("--host", cfg.host, "Service bind address")->capture_default_str();
  app.add_option("--port", cfg.port, "Service port")->capture_default_str();
  app.add_option("--static", cfg.static_dir, "Directory served at / by serve");

  auto* fetch = app.add_subcommand("fetch", "Download ads from an ads archive API into --corpus");
  cli::FetchArgs fetch_args;
  std::string from, to;
  fetch->add_option("--page-id", fetch_args.page_ids, "Page ids (default: all pages in --registry)");
  fetch->add_option("--from", from, "First delivery date, YYYY-MM-DD")->required();
  fetch->add_option("--to", to, "Last delivery date, YYYY-MM-DD")->required();
  fetch->add_option("--token", fetch_args.api.access_token, "Access token")->envname("ADTHEME_ACCESS_TOKEN");
  fetch->add_option("--base-url", fetch_args.api.base_url)->capture_default_str();
  fetch->add_option("--api-path", fetch_args.api.path)->capture_default_str();
  fetch->add_option("--countries", fetch_args.api.reached_countries)->capture_default_str();
  fetch->add_option("--page-size", fetch_args.api.page_size)->capture_default_str();

  auto* preprocess = app.add_subcommand("preprocess", "Validate, resolve parties and lemmatize the corpus");
  auto* match = app.add_subcommand("match", "Match preprocessed texts against the lexicon");

  auto* suggest = app.add_subcommand("suggest", "List candidate words per theme");
  std::string suggest_theme;
  suggest->add_option("--theme", suggest_theme, "Only this theme");

  auto* decide = app.add_subcommand("decide", "Record one accept/reject verdict");
  std::string verdict_str, lemma, theme_id, reason;
  int iteration = 0;
  decide->add_option("verdict", verdict_str, "accept or reject")->required()->check(CLI::IsMember({"accept", "reject"}));
  decide->add_option("lemma", lemma)->required();
  decide->add_option("theme", theme_id)->required();
  decide->add_option("--reason", reason);
  decide->add_option("--iteration", iteration, "Iteration to file the verdict under (default: the open one)");

  auto* iterate = app.add_subcommand("iterate", "Run refinement iterations with a terminal verdict loop");
  std::string auto_policy;
  bool until_converged = false;
  int max_iterations = 100;
  iterate->add_option("--auto", auto_policy, "Decide without prompting")->check(CLI::IsMember({"reject"}));
  iterate->add_flag("--until-converged", until_converged, "Repeat until an iteration accepts nothing");
  iterate->add_option("--max-iterations", max_iterations)->capture_default_str();
  auto* close = app.add_subcommand("close-iteration", "Close the open iteration over decisions made with decide");

  auto* report = app.add_subcommand("report", "Write report tables for the latest match run");
  auto* status = app.add_subcommand("status", "Print lexicon version and iteration history as JSON");
  auto* serve = app.add_subcommand("serve", "Serve the curation HTTP API");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fetch->parsed()) {
      cli::resolve(cfg, Need::none);
      const auto a = ingestion::parse_date(from), b = ingestion::parse_date(to);
      if (!a || !b) throw cli::ConfigError("--from/--to must be YYYY-MM-DD");
      fetch_args.range = {*a, *b};
      cli::fetch(cfg, fetch_args, std::cerr);
    } else if (preprocess->parsed()) {
      cli::resolve(cfg, Need::corpus | Need::linguistic);
      cli::preprocess(cfg, std::cerr);
    } else if (match->parsed()) {
      cli::resolve(cfg, Need::lexicon | Need::linguistic);
      cli::match(cfg, std::cerr);
    } else if (report->parsed()) {
      cli::resolve(cfg, Need::lexicon | Need::linguistic);
      cli::report(cfg, std::cerr);
    } else if (decide->parsed()) {
      cli::resolve(cfg, Need::lexicon | Need::linguistic);
      cli::Session session(cfg, false);
      const auto d = session.decide(lemma, theme_id, *lexicon::parse_verdict(verdict_str), reason,
                                    iteration > 0 ? std::optional<int>(iteration) : std::nullopt);
      std::cout << lexicon::to_json(d).dump() << "\n";
    } else if (status->parsed()) {
      cli::resolve(cfg, Need::lexicon | Need::linguistic);
      cli::Session session(cfg, false);
      std::cout << session.status_json().dump(2) << "\n";
    } else {
      cli::resolve(cfg, Need::lexicon | Need::linguistic);
      cli::Session session(cfg, true);
      for (const auto& w : session.warnings()) std::cerr << "warning: " << w << "\n";
      if (suggest->parsed()) {
        if (!suggest_theme.empty()) {
          print_suggestions(suggest_theme, session.suggestions(suggest_theme));
        } else {
          for (const auto& t : session.themes()) print_suggestions(t.id, session.suggestions(t.id));
        }
      } else if (close->parsed()) {
        print_iteration(session.close_iteration());
      } else if (iterate->parsed()) {
        refinement::RejectAllPolicy reject_all;
        PromptPolicy prompt(session, std::cin, std::cout);
        refinement::VerdictSource& source = auto_policy.empty() ? static_cast<refinement::VerdictSource&>(prompt)
                                                                : reject_all;
        for (int i = 0; i < max_iterations; ++i) {
          const auto rec = session.iterate(source);
          print_iteration(rec);
          if (!until_converged || rec.converged() || prompt.quit()) break;
        }
      } else if (serve->parsed()) {
        auto server = cli::make_server(session);
        if (!server->bind_to_port(cfg.host, cfg.port))
          throw Error("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
        std::cerr << "listening on http://" << cfg.host << ":" << cfg.port << "\n";
        server->listen_after_bind();
      }
    }
  } catch (const cli::StaleArtifact& e) {
    return report_error("stale_artifact", "run " + e.producer() + " first: " + e.why(),
                        {{"artifact", e.artifact().string()}, {"producer", e.producer()}});
  } catch (const cli::MissingArtifact& e) {
    return report_error("missing_artifact", "run " + e.producer() + " first",
                        {{"artifact", e.artifact().string()}, {"producer", e.producer()}});
  } catch (const cli::ConfigError& e) {
    return report_error("config", e.what());
  } catch (const lexicon::DecisionConflict& e) {
    return report_error("conflict", e.what(),
                        {{"prior_verdict", std::string(to_string(e.prior_verdict()))},
                         {"prior_iteration", e.prior_iteration()}});
  } catch (const ingestion::AuthError& e) {
    return report_error("auth", e.what());
  } catch (const ingestion::FetchError& e) {
    return report_error("fetch", e.what());
  } catch (const NotFoundError& e) {
    return report_error("not_found", e.what());
  } catch (const PreconditionError& e) {
    return report_error("precondition", e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return kOk;
}
