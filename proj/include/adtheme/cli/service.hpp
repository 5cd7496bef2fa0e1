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

#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adtheme/cli/session.hpp"

namespace adtheme::cli {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

// Runs `fn` and maps library exceptions onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const lexicon::DecisionConflict& e) {
    send_json(res, 409,
              {{"error", "conflict"},
               {"message", e.what()},
               {"prior", {{"verdict", std::string(to_string(e.prior_verdict()))}, {"iteration", e.prior_iteration()}}}});
  } catch (const NotFoundError& e) {
    send_error(res, 404, "not_found", e.what());
  } catch (const PreconditionError& e) {
    send_error(res, 400, "bad_request", e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, "bad_request", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  auto body = nlohmann::json::parse(req.body);
  if (!body.is_object()) throw PreconditionError("request body must be a JSON object");
  return body;
}

inline nlohmann::json report_table_json(const std::string& table, const analytics::ReportTables& t,
                                        const analytics::ReportInputs& in) {
  nlohmann::json rows = nlohmann::json::array();
  if (table == "matched_summary") {
    for (const auto& s : t.summary)
      rows.push_back({{"party", s.party},
                      {"n_ads", s.n_ads},
                      {"n_matched", s.n_matched},
                      {"pct_matched", util::round_half_up_2(s.pct_matched())}});
  } else if (table == "theme_distribution_ads" || table == "theme_distribution_impressions") {
    for (const auto& d : table == "theme_distribution_ads" ? t.by_ads : t.by_impressions)
      rows.push_back(analytics::to_json(d, in.themes));
  } else if (table == "top_parties") {
    for (const auto& r : t.ownership) rows.push_back(analytics::to_json(r));
  } else if (table == "demographics_per_theme") {
    return analytics::to_json(t.per_theme);
  } else if (table == "demographics_per_party") {
    return analytics::to_json(t.per_party);
  } else {
    throw NotFoundError("unknown report table " + table);
  }
  return rows;
}

}  // namespace detail

inline constexpr const char* kReportTables[] = {"matched_summary",        "theme_distribution_ads",
                                                "theme_distribution_impressions", "top_parties",
                                                "demographics_per_theme", "demographics_per_party"};

// Routes for the curation workbench. The server borrows `session`.
inline std::unique_ptr<httplib::Server> make_server(Session& session) {
  using detail::guarded;
  using detail::send_json;
  auto server = std::make_unique<httplib::Server>();

  server->Get("/themes", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session.themes_json()); });
  });

  server->Get(R"(/themes/([A-Za-z0-9_]+)/candidates)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session.candidates_json(req.matches[1])); });
  });

  server->Get(R"(/texts/([0-9a-f]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session.text_json(req.matches[1])); });
  });

  server->Post("/decisions", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = detail::parse_body(req);
      const auto verdict = lexicon::parse_verdict(body.at("verdict").get<std::string>());
      if (!verdict) throw PreconditionError("verdict must be accept or reject");
      const auto d = session.decide(body.at("lemma").get<std::string>(), body.at("theme_id").get<std::string>(),
                                    *verdict, body.value("reason", std::string{}));
      send_json(res, 201, {{"decision", lexicon::to_json(d)}, {"lexicon_version", session.lexicon().version()}});
    });
  });

  server->Post("/iterate", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, refinement::to_json(session.close_iteration())); });
  });

  server->Get(R"(/reports/([a-z_]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string table = req.matches[1];
      const auto results = session.results();
      const auto in = session.report_inputs(*results);
      const auto tables = analytics::compute_tables(in);
      auto data = detail::report_table_json(table, tables, in);
      const auto files = analytics::render_report(in, tables);
      send_json(res, 200,
                {{"table", table},
                 {"lexicon_version", in.lexicon_version},
                 {"data", std::move(data)},
                 {"csv", files.at(table + ".csv")},
                 {"notes", tables.notes}});
    });
  });

  server->Get("/status", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session.status_json()); });
  });

  if (!session.config().static_dir.empty()) server->set_mount_point("/", session.config().static_dir.string());
  return server;
}

}  // namespace adtheme::cli
