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


// Acceptance suite. Prints one PASS/FAIL (or SKIP) line per criterion and
// exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adtheme/analytics/demographics.hpp"
#include "adtheme/analytics/distribution.hpp"
#include "adtheme/analytics/report.hpp"
#include "adtheme/cli/pipeline.hpp"
#include "adtheme/ingestion/corpus_io.hpp"
#include "adtheme/ingestion/page_registry.hpp"
#include "adtheme/lexicon/journal.hpp"
#include "adtheme/lexicon/load.hpp"
#include "adtheme/matcher/matcher.hpp"
#include "adtheme/refinement/refinement.hpp"
#include "adtheme/text/linguistic_lexicon.hpp"
#include "adtheme/text/pipeline.hpp"
#include "adtheme/text/transliterate.hpp"
#include "adtheme/util/files.hpp"
#include "support/test_support.hpp"

namespace {

using namespace adtheme;
using namespace adtheme::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  enum class Status { pass, fail, skip } status = Status::pass;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::Status::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Status::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Status::skip, std::move(detail)}; }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome matcher_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20210317);
  std::size_t n_texts = 0, n_matched = 0;
  for (int i = 0; i < 1000; ++i) {
    auto rc = random_corpus(rng);
    matcher::MatcherConfig cfg;
    if (i % 2 == 1) {
      cfg.min_exclusive = std::uniform_int_distribution<int>(0, 3)(rng);
      cfg.multi_threshold = std::uniform_int_distribution<int>(cfg.min_exclusive + 1, 8)(rng);
    }
    const lexicon::ThemeLexicon lex(rc.themes, rc.lists);
    const auto got = matcher::match_corpus(rc.texts, lex, cfg, rc.corpus);
    if (got.results.size() != rc.texts.size()) return fail("corpus " + std::to_string(i) + ": result count differs");

    std::map<std::string, std::set<std::string>> expected;
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_party;
    for (const auto& pt : rc.texts) {
      auto themes = naive_match(pt.lemmas, rc.lists, cfg.min_exclusive, cfg.multi_threshold);
      for (const auto& id : pt.ad_ids) {
        const auto& party = rc.corpus.at(id).party;
        auto& row = by_party[party.empty() ? "(unresolved)" : party];
        ++row.first;
        row.second += themes.empty() ? 0 : 1;
      }
      expected.emplace(pt.text_key, std::move(themes));
    }
    for (const auto& r : got.results) {
      const auto it = expected.find(r.text_key);
      if (it == expected.end() || it->second != r.matched_themes)
        return fail("corpus " + std::to_string(i) + ": text " + r.text_key + " differs from the brute-force oracle");
      n_matched += r.matched() ? 1 : 0;
    }
    if (got.summary.size() != by_party.size()) return fail("corpus " + std::to_string(i) + ": summary rows differ");
    for (const auto& row : got.summary) {
      const auto& [n, m] = by_party.at(row.party);
      if (row.n_ads != n || row.n_matched != m) return fail("corpus " + std::to_string(i) + ": summary for " + row.party);
    }
    n_texts += rc.texts.size();
  }
  const double elapsed = seconds_since(t0);
  const auto detail = "1000 corpora, " + std::to_string(n_texts) + " texts (" + std::to_string(n_matched) +
                      " matched), " + secs(elapsed);
  return elapsed < 60.0 ? pass(detail) : fail(detail + " exceeds 60 s");
}

// ---------------------------------------------------------------------------

Outcome threshold_boundaries() {
  struct Case {
    const char* name;
    std::array<int, 5> scores;
    std::set<std::size_t> expected;  // indexes into scores
  };
  const std::vector<Case> cases = {
      {"nothing shared", {0, 0, 0, 0, 0}, {}},
      {"s=1 alone", {1, 0, 0, 0, 0}, {}},
      {"s=1 everywhere", {1, 1, 1, 1, 1}, {}},
      {"s=2 max", {2, 1, 1, 0, 0}, {0}},
      {"s=2 tie", {2, 2, 1, 0, 0}, {0, 1}},
      {"s=5 max", {5, 4, 3, 0, 0}, {0}},
      {"s=5 non-max", {7, 5, 2, 1, 0}, {0}},
      {"s=6 non-max", {7, 6, 2, 1, 0}, {0, 1}},
      {"s=6 and s=5 non-max", {8, 6, 5, 5, 0}, {0, 1}},
      {"s=6 max tie", {6, 6, 5, 1, 1}, {0, 1}},
      {"all above five", {9, 8, 7, 6, 6}, {0, 1, 2, 3, 4}},
  };
  const auto themes = make_themes(5);
  const matcher::MatcherConfig cfg;
  std::size_t checked = 0;
  for (const auto& c : cases) {
    std::array<std::size_t, 5> perm{0, 1, 2, 3, 4};
    do {
      lexicon::WordSets lists;
      std::vector<std::string> lemmas{"filler", "noise"};
      std::set<std::string> expected;
      for (std::size_t k = 0; k < 5; ++k) {
        const auto& id = themes[k].id;
        const int s = c.scores[perm[k]];
        auto& list = lists[id];
        for (int j = 0; j < s; ++j) {
          list.insert(id + "x" + std::to_string(j));
          lemmas.push_back(id + "x" + std::to_string(j));
        }
        for (int j = 0; j < 4; ++j) list.insert(id + "absent" + std::to_string(j));
        if (c.expected.contains(perm[k])) expected.insert(id);
      }
      const auto pt = make_text("k", lemmas);
      const auto r = matcher::match_text(pt, lists, cfg);
      for (std::size_t k = 0; k < 5; ++k) {
        if (r.intersection_sizes.at(themes[k].id) != c.scores[perm[k]])
          return fail(std::string(c.name) + ": intersection size mis-set");
      }
      if (r.matched_themes != expected) return fail(std::string(c.name) + ": wrong themes for a permutation");
      ++checked;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return pass(std::to_string(cases.size()) + " score patterns x 120 permutations = " + std::to_string(checked) +
              " assignments");
}

// ---------------------------------------------------------------------------

Outcome monotonicity() {
  std::mt19937_64 rng(99);
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const auto themes = make_themes(14);
  const matcher::MatcherConfig cfg;
  std::size_t grew = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto vocab = uniform(20, 300);
    lexicon::WordSets lists;
    for (const auto& t : themes) {
      auto& list = lists[t.id];
      for (auto n = uniform(0, 15); n > 0; --n) list.insert(vocab_word(uniform(0, vocab - 1)));
    }
    std::vector<std::string> lemmas;
    for (auto n = uniform(0, 60); n > 0; --n) lemmas.push_back(vocab_word(uniform(0, vocab - 1)));
    const auto pt = make_text("k", lemmas);

    lexicon::ThemeLexicon lex(themes, lists);
    const auto& target = themes[uniform(0, themes.size() - 1)].id;
    std::string word;
    do word = vocab_word(uniform(0, vocab - 1));
    while (lists[target].contains(word));
    const auto before = matcher::match_text(pt, lex, cfg).intersection_sizes;
    lex.apply({word, target, lexicon::Verdict::accept, 1, {}, {}});
    const auto after = matcher::match_text(pt, lex, cfg).intersection_sizes;

    for (const auto& t : themes) {
      const int b = before.at(t.id), a = after.at(t.id);
      if (t.id != target && a != b) return fail("triple " + std::to_string(i) + ": s(U) changed for U != T");
      if (t.id == target) {
        if (a < b) return fail("triple " + std::to_string(i) + ": s(T) decreased");
        if (a != b + (pt.contains(word) ? 1 : 0)) return fail("triple " + std::to_string(i) + ": s(T) grew by != 1");
        grew += a > b ? 1 : 0;
      }
    }
  }
  return pass("10000 triples, s(T) grew in " + std::to_string(grew));
}

// ---------------------------------------------------------------------------

Outcome normalization() {
  std::mt19937_64 rng(31);
  std::size_t n_dist = 0, n_axes = 0;
  double worst_dist = 0, worst_axis = 0;
  RandomCorpusOptions opts;
  opts.max_texts = 120;
  opts.demographics = true;
  for (int i = 0; i < 200; ++i) {
    auto rc = random_corpus(rng, opts);
    const lexicon::ThemeLexicon lex(rc.themes, rc.lists);
    const auto results = matcher::match_texts(rc.texts, lex.word_sets(), {});
    for (const auto& party : analytics::parties(rc.corpus)) {
      for (const auto basis : {analytics::Basis::ad_count, analytics::Basis::impressions}) {
        try {
          const auto d = analytics::theme_distribution(results, rc.corpus, party, basis, rc.themes);
          if (d.rows.size() != rc.themes.size()) return fail("distribution omits themes");
          double sum = 0;
          for (const auto& [id, v] : d.rows) sum += v;
          worst_dist = std::max(worst_dist, std::abs(sum - 100.0));
          ++n_dist;
        } catch (const analytics::DistributionError&) {
        }
      }
    }
    for (const auto grouping : {analytics::Grouping::per_theme, analytics::Grouping::per_party}) {
      const auto t = analytics::demographic_table(results, rc.corpus, grouping, {}, rc.themes);
      for (const auto& [group, cells] : t.pct) {
        std::map<ingestion::DemographicAxis, double> sums;
        for (const auto& [key, v] : cells) sums[key.first] += v;
        for (const auto& [axis, sum] : sums) {
          worst_axis = std::max(worst_axis, std::abs(sum - 100.0));
          ++n_axes;
        }
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu distributions (max |sum-100| %.2e), %zu demographic axes (max %.2e)", n_dist,
                worst_dist, n_axes, worst_axis);
  if (n_dist == 0 || n_axes == 0) return fail("nothing generated");
  if (worst_dist > 0.01 || worst_axis > 0.05) return fail(buf);
  return pass(buf);
}

// ---------------------------------------------------------------------------

ingestion::Corpus scaled(const ingestion::Corpus& corpus, std::uint64_t c) {
  ingestion::Corpus out;
  for (auto ad : corpus.ads()) {
    const auto& imp = ad.impressions;
    std::optional<std::uint64_t> hi;
    if (imp.upper()) hi = *imp.upper() * c;
    ad.impressions = ingestion::RangeMetric(imp.lower() * c, hi);
    out.add(std::move(ad));
  }
  return out;
}

Outcome midpoint_arithmetic() {
  ingestion::Corpus two;
  two.add(make_ad("a1", "P", 1000, 2000));
  two.add(make_ad("a2", "P", 4000, 5000));
  const std::vector<matcher::MatchResult> res = {make_result("k1", {"a1"}, {"t0"}), make_result("k2", {"a2"}, {"t1"})};
  const auto themes = make_themes(2);
  if (two.at("a1").impressions.midpoint() != 1500.0 || two.at("a2").impressions.midpoint() != 4500.0)
    return fail("midpoints are not 1500/4500");
  const auto d = analytics::theme_distribution(res, two, "P", analytics::Basis::impressions, themes);
  if (d.rows.at("t0") != 25.0 || d.rows.at("t1") != 75.0) return fail("two-ad example is not exactly 25/75");
  const auto own = analytics::top_parties_per_theme(res, two, 3, themes);
  if (own[0].ranked.at(0).second != 1.0 || own[0].total_impressions != 1500.0) return fail("ownership totals differ");

  // Scaling every range by a power of two leaves every share bit-identical;
  // any other integer factor leaves them equal to within rounding.
  std::mt19937_64 rng(5);
  RandomCorpusOptions opts;
  opts.max_texts = 60;
  opts.demographics = true;
  std::size_t compared = 0;
  for (int i = 0; i < 100; ++i) {
    auto rc = random_corpus(rng, opts);
    const auto results = matcher::match_texts(rc.texts, rc.lists, {});
    for (const std::uint64_t c : {2ull, 8ull, 1024ull, 3ull, 7ull, 1000ull}) {
      const bool exact = (c & (c - 1)) == 0;
      const auto big = scaled(rc.corpus, c);
      auto same = [&](double a, double b) { return exact ? a == b : std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
      for (const auto& party : analytics::parties(rc.corpus)) {
        try {
          const auto a = analytics::theme_distribution(results, rc.corpus, party, analytics::Basis::impressions, rc.themes);
          const auto b = analytics::theme_distribution(results, big, party, analytics::Basis::impressions, rc.themes);
          for (const auto& [id, v] : a.rows) {
            if (!same(v, b.rows.at(id))) return fail("distribution not scale invariant (factor " + std::to_string(c) + ")");
            ++compared;
          }
        } catch (const analytics::DistributionError&) {
        }
      }
      const auto oa = analytics::top_parties_per_theme(results, rc.corpus, 5, rc.themes);
      const auto ob = analytics::top_parties_per_theme(results, big, 5, rc.themes);
      for (std::size_t t = 0; t < oa.size(); ++t) {
        if (oa[t].ranked.size() != ob[t].ranked.size()) return fail("ownership ranking length changed under scaling");
        for (std::size_t r = 0; r < oa[t].ranked.size(); ++r) {
          if (!same(oa[t].ranked[r].second, ob[t].ranked[r].second))
            return fail("ownership share not scale invariant (factor " + std::to_string(c) + ")");
          ++compared;
        }
      }
      for (const auto grouping : {analytics::Grouping::per_theme, analytics::Grouping::per_party}) {
        const auto ta = analytics::demographic_table(results, rc.corpus, grouping, {}, rc.themes);
        const auto tb = analytics::demographic_table(results, big, grouping, {}, rc.themes);
        for (const auto& [g, cells] : ta.pct) {
          if (cells.size() != tb.pct.at(g).size()) return fail("demographic cells changed under scaling");
          for (const auto& [key, v] : cells) {
            if (!same(v, tb.pct.at(g).at(key)))
              return fail("demographic share not scale invariant (factor " + std::to_string(c) + ")");
            ++compared;
          }
        }
      }
    }
  }
  return pass("1500/4500 -> 25.00/75.00 exactly; " + std::to_string(compared) + " scaled values compared");
}

// ---------------------------------------------------------------------------

Outcome demographic_oracle() {
  std::ifstream in(test_data_dir() / "demographic_fixtures.json");
  if (!in) return fail("cannot read demographic_fixtures.json");
  const auto fixtures = nlohmann::json::parse(in);
  std::size_t cells = 0;
  double worst = 0;
  for (const auto& fx : fixtures) {
    const std::string name = fx.at("name");
    std::vector<lexicon::Theme> themes;
    for (const auto& id : fx.at("themes")) themes.push_back({id, id, {}, {}});
    ingestion::Corpus corpus;
    for (const auto& a : fx.at("ads")) {
      std::optional<std::uint64_t> hi;
      if (!a.at("impressions")[1].is_null()) hi = a.at("impressions")[1].get<std::uint64_t>();
      std::vector<ingestion::DemographicCell> dc;
      for (const auto& c : a.at("cells"))
        dc.push_back({*ingestion::parse_axis(c[0].get<std::string>()), c[1].get<std::string>(), c[2].get<int>() / 100.0});
      corpus.add(make_ad(a.at("id"), a.at("party"), a.at("impressions")[0].get<std::uint64_t>(), hi, std::move(dc)));
    }
    std::vector<matcher::MatchResult> results;
    for (const auto& r : fx.at("results"))
      results.push_back(make_result(r.at("text_key"), r.at("ad_ids").get<std::vector<std::string>>(),
                                    r.at("themes").get<std::set<std::string>>()));

    for (const auto grouping : {analytics::Grouping::per_theme, analytics::Grouping::per_party}) {
      const auto table = analytics::demographic_table(results, corpus, grouping, {}, themes);
      const auto& expected = fx.at("expected").at(std::string(analytics::to_string(grouping)));
      if (table.groups.size() != expected.size()) return fail(name + ": group count differs");
      for (const auto& [group, want] : expected.items()) {
        const auto& got = table.pct.at(group);
        if (got.size() != want.size()) return fail(name + ": cell set differs for " + group);
        for (const auto& [k, v] : want.items()) {
          const auto bar = k.find('|');
          const analytics::CellKey key{*ingestion::parse_axis(k.substr(0, bar)), k.substr(bar + 1)};
          const auto it = got.find(key);
          if (it == got.end()) return fail(name + ": missing " + k + " for " + group);
          const double diff = std::abs(it->second - v.get<double>());
          worst = std::max(worst, diff);
          if (diff >= 5e-5) return fail(name + ": " + group + " " + k + " differs by " + std::to_string(diff));
          ++cells;
        }
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu fixtures, %zu cells, max deviation %.1e", fixtures.size(), cells, worst);
  return fixtures.size() == 20 ? pass(buf) : fail(std::string(buf) + "; expected 20 fixtures");
}

// ---------------------------------------------------------------------------

struct FixtureTexts {
  text::LinguisticLexicon linguistic;
  std::vector<text::ProcessedText> texts;
};

FixtureTexts load_fixture_texts() {
  FixtureTexts f;
  f.linguistic = text::LinguisticLexicon::load(data_dir() / "linguistic" / "nl.tsv");
  auto corpus = ingestion::load_corpus(data_dir() / "fixture" / "ads.ndjson").corpus;
  ingestion::PageRegistry::load(data_dir() / "fixture" / "pages.csv").resolve(corpus);
  f.texts = text::process_corpus(corpus, f.linguistic);
  return f;
}

std::string lexicon_dump(const lexicon::ThemeLexicon& lex) { return lexicon::to_json(lex).dump(); }

Outcome refinement_loop() {
  const auto fx = load_fixture_texts();
  std::ostringstream detail;

  // Auto-reject converges after exactly one iteration.
  {
    const TempDir dir("adtheme-accept");
    fs::copy(data_dir() / "seed", dir.path() / "lex");
    auto lex = lexicon::load_lexicon(dir.path() / "lex", fx.linguistic).lexicon;
    const lexicon::DecisionJournal journal(dir.path() / "lex" / lexicon::kDecisionsFile);
    const refinement::IterationJournal iterations(dir.path() / "lex" / lexicon::kIterationsFile);
    refinement::IterationContext ctx{fx.texts, {}, {}, &journal, &iterations};
    refinement::RejectAllPolicy reject;
    std::vector<refinement::IterationRecord> history{refinement::run_iteration(ctx, lex, reject, 1)};
    if (history[0].rejected == 0) return fail("auto-reject saw no candidates");
    if (!refinement::converged(history)) return fail("auto-reject did not converge after one iteration");
    if (refinement::IterationJournal::read(dir.path() / "lex" / lexicon::kIterationsFile).size() != 1)
      return fail("iteration journal does not hold exactly one record");
    detail << "auto-reject converged in 1 iteration (" << history[0].rejected << " rejected); ";
  }

  // No rejected pair is ever suggested or listed again.
  std::mt19937_64 rng(2021);
  std::size_t decisions = 0, iterations_run = 0;
  for (int session = 0; session < 100; ++session) {
    RandomCorpusOptions opts;
    opts.max_texts = 80;
    opts.max_vocab = 150;
    opts.n_themes = 5;
    opts.max_list = 12;
    opts.max_lemmas = 25;
    auto rc = random_corpus(rng, opts);
    lexicon::ThemeLexicon lex(rc.themes, rc.lists);
    refinement::IterationContext ctx{rc.texts, {}, {10, 1.0, {}}, nullptr, nullptr};
    std::set<std::pair<std::string, std::string>> rejected;
    std::string violation;
    lexicon::ThemeLexicon at_start = lex;
    refinement::CallbackPolicy policy([&](const lexicon::Theme& theme, std::span<const refinement::CandidateWord> cands) {
      std::vector<refinement::CandidateVerdict> out;
      for (const auto& c : cands) {
        if (rejected.contains({c.lemma, theme.id}) && violation.empty())
          violation = "rejected pair (" + c.lemma + ", " + theme.id + ") suggested again";
        if (at_start.in_any_list(c.lemma) && violation.empty()) violation = "listed word " + c.lemma + " suggested";
        const auto roll = std::uniform_int_distribution<int>(0, 9)(rng);
        if (roll < 2) {
          out.push_back({c.lemma, lexicon::Verdict::accept, {}});
        } else if (roll < 8) {
          out.push_back({c.lemma, lexicon::Verdict::reject, {}});
          rejected.insert({c.lemma, theme.id});
        }
      }
      return out;
    });
    for (int it = 1; it <= 12; ++it) {
      at_start = lex;
      const auto rec = refinement::run_iteration(ctx, lex, policy, it);
      ++iterations_run;
      if (!violation.empty()) return fail("session " + std::to_string(session) + ": " + violation);
      if (rec.converged()) break;
    }
    for (const auto& [lemma, theme] : rejected) {
      if (lex.list(theme).contains(lemma)) return fail("rejected word " + lemma + " entered " + theme);
      try {
        lex.check({lemma, theme, lexicon::Verdict::accept, 99, {}, {}});
        return fail("rejected pair could be accepted later");
      } catch (const lexicon::DecisionConflict&) {
      }
    }
    decisions += lex.version();
  }
  detail << "100 sessions, " << iterations_run << " iterations, " << decisions << " decisions without resurrection; ";

  // Replaying the journal reproduces the lexicon bit for bit.
  for (int seed = 0; seed < 10; ++seed) {
    const TempDir dir("adtheme-replay");
    fs::copy(data_dir() / "seed", dir.path() / "lex");
    auto lex = lexicon::load_lexicon(dir.path() / "lex", fx.linguistic).lexicon;
    const lexicon::DecisionJournal journal(dir.path() / "lex" / lexicon::kDecisionsFile);
    refinement::IterationContext ctx{fx.texts, {}, {8, 0.2, {}}, &journal, nullptr};
    std::mt19937_64 prng(seed);
    refinement::CallbackPolicy policy([&](const lexicon::Theme&, std::span<const refinement::CandidateWord> cands) {
      std::vector<refinement::CandidateVerdict> out;
      for (const auto& c : cands) {
        const auto roll = std::uniform_int_distribution<int>(0, 2)(prng);
        if (roll == 0) out.push_back({c.lemma, lexicon::Verdict::accept, "fits"});
        if (roll == 1) out.push_back({c.lemma, lexicon::Verdict::reject, "off topic"});
      }
      return out;
    });
    for (int it = 1; it <= 4; ++it) refinement::run_iteration(ctx, lex, policy, it);
    const auto replayed = lexicon::load_lexicon(dir.path() / "lex", fx.linguistic).lexicon;
    if (lex.version() == 0) return fail("replay session made no decisions");
    if (lexicon_dump(replayed) != lexicon_dump(lex)) return fail("journal replay differs (seed " + std::to_string(seed) + ")");
  }
  detail << "10 journal replays bit-exact";
  return pass(detail.str());
}

// ---------------------------------------------------------------------------

Outcome golden_run() {
  const auto t0 = Clock::now();
  const TempDir dir("adtheme-golden");
  fs::copy(data_dir() / "seed", dir.path() / "lex");
  const std::vector<std::string> files = {"matched_summary.csv",         "theme_distribution_ads.csv",
                                          "theme_distribution_impressions.csv", "top_parties.csv",
                                          "demographics_per_theme.csv",  "demographics_per_party.csv",
                                          "report.md"};
  for (int run = 0; run < 2; ++run) {
    cli::RunConfig cfg;
    cfg.corpus = data_dir() / "fixture" / "ads.ndjson";
    cfg.registry = data_dir() / "fixture" / "pages.csv";
    cfg.lexicon_dir = dir.path() / "lex";
    cfg.linguistic = data_dir() / "linguistic" / "nl.tsv";
    cfg.baseline = data_dir() / "baseline" / "nl.csv";
    cfg.out_dir = dir.path() / ("out" + std::to_string(run));
    std::ostringstream log;
    cli::preprocess(cfg, log);
    cli::match(cfg, log);
    cli::report(cfg, log);
    for (const auto& f : files) {
      const auto got = util::read_file(cli::Artifacts{cfg.out_dir}.report_dir() / f);
      const auto want = util::read_file(golden_dir() / f);
      if (got != want) return fail(f + " differs from the golden copy (run " + std::to_string(run + 1) + ")");
    }
  }
  const double elapsed = seconds_since(t0);
  const auto detail = std::to_string(files.size()) + " files byte-identical over 2 runs, " + secs(elapsed);
  return elapsed < 10.0 ? pass(detail) : fail(detail + " exceeds 10 s");
}

// ---------------------------------------------------------------------------

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

Outcome text_pipeline() {
  const auto en = text::LinguisticLexicon::load(data_dir() / "linguistic" / "en.tsv");
  if (text::lemma_of("cars", en) != "car") return fail("cars -> " + text::lemma_of("cars", en));
  if (text::lemma_of("better", en) != "good") return fail("better -> " + text::lemma_of("better", en));
  const auto pt = text::analyze("Better cars, better houses!", en);
  if (pt.lemmas != std::vector<std::string>{"car", "good", "house"}) return fail("analyze did not lemmatize as expected");

  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> kind(0, 3), len(0, 40);
  std::size_t bytes = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    for (int n = len(rng); n > 0; --n) {
      char32_t c = 0;
      switch (kind(rng)) {
        case 0: c = std::uniform_int_distribution<char32_t>(0x20, 0x7E)(rng); break;
        case 1: c = std::uniform_int_distribution<char32_t>(0xA0, 0x24F)(rng); break;
        case 2: c = std::uniform_int_distribution<char32_t>(0x250, 0xFFFD)(rng); break;
        default: c = std::uniform_int_distribution<char32_t>(0x10000, 0x10FFFF)(rng); break;
      }
      if (c >= 0xD800 && c <= 0xDFFF) c = 0xFFFD;
      s += encode_utf8(c);
    }
    const auto once = text::transliterate(s);
    for (unsigned char ch : once)
      if (ch >= 0x80) return fail("transliteration left a non-ASCII byte");
    if (text::transliterate(once) != once) return fail("transliteration is not idempotent on string " + std::to_string(i));
    bytes += s.size();
  }
  return pass("cars->car, better->good; 10000 random strings (" + std::to_string(bytes) +
              " bytes) ASCII and idempotent");
}

// ---------------------------------------------------------------------------

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

Outcome replication() {
  const char* corpus_path = env("ADTHEME_REPLICATION_CORPUS");
  const char* registry_path = env("ADTHEME_REPLICATION_REGISTRY");
  const char* lexicon_path = env("ADTHEME_REPLICATION_LEXICON");
  if (!corpus_path || !registry_path || !lexicon_path)
    return skip("needs external data: set ADTHEME_REPLICATION_CORPUS, ADTHEME_REPLICATION_REGISTRY and "
                "ADTHEME_REPLICATION_LEXICON");
  const char* linguistic_path = env("ADTHEME_REPLICATION_LINGUISTIC");
  const auto linguistic =
      text::LinguisticLexicon::load(linguistic_path ? fs::path(linguistic_path) : data_dir() / "linguistic" / "nl.tsv");
  auto corpus = ingestion::load_corpus(corpus_path).corpus;
  ingestion::PageRegistry::load(registry_path).resolve(corpus);
  const auto texts = text::process_corpus(corpus, linguistic);
  const auto lex = lexicon::load_lexicon(lexicon_path, linguistic).lexicon;
  const auto match = matcher::match_corpus(texts, lex, {}, corpus);

  std::ifstream in(test_data_dir() / "replication_reference.json");
  const auto ref = nlohmann::json::parse(in);
  const double tol = ref.at("tolerance_pp").get<double>();
  double worst = 0;
  std::size_t cells = 0;
  std::vector<std::string> misses;
  auto compare = [&](const std::string& what, double got, double want) {
    const double diff = std::abs(got - want);
    worst = std::max(worst, diff);
    ++cells;
    if (diff > tol) misses.push_back(what + " " + util::fixed2(got) + " vs " + util::fixed2(want));
  };
  for (const auto& [table, basis] : {std::pair{"theme_distribution_ads", analytics::Basis::ad_count},
                                     std::pair{"theme_distribution_impressions", analytics::Basis::impressions}}) {
    for (const auto& [party, rows] : ref.at(table).items()) {
      const auto d = analytics::theme_distribution(match.results, corpus, party, basis, lex.themes());
      for (const auto& [theme, want] : rows.items())
        compare(std::string(table) + " " + party + " " + theme, d.rows.at(theme), want.get<double>());
    }
  }
  for (const auto& [party, row] : ref.at("matched_summary").items()) {
    const auto it = std::find_if(match.summary.begin(), match.summary.end(), [&](const auto& s) { return s.party == party; });
    if (it == match.summary.end()) {
      misses.push_back("matched_summary: no ads for " + party);
      continue;
    }
    compare("matched_summary " + party, it->pct_matched(), row.at("matched_pct").get<double>());
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu cells, max deviation %.2f pp", cells, worst);
  if (!misses.empty()) return fail(std::string(buf) + "; first miss: " + misses.front());
  return pass(buf);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"matcher oracle equivalence", matcher_oracle},
      {"threshold boundaries", threshold_boundaries},
      {"monotonicity", monotonicity},
      {"distribution normalization", normalization},
      {"impression midpoint arithmetic", midpoint_arithmetic},
      {"demographic aggregation oracle", demographic_oracle},
      {"refinement loop", refinement_loop},
      {"end-to-end golden run", golden_run},
      {"text pipeline", text_pipeline},
      {"replication harness", replication},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Status::pass ? "PASS" : o.status == Outcome::Status::skip ? "SKIP" : "FAIL";
    if (o.status == Outcome::Status::fail) ++failures;
    std::cout << tag << "  " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
