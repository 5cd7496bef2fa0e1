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
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/util/error.hpp"

namespace adtheme::ingestion {

inline constexpr const char* kDefaultFields =
    "id,page_id,page_name,ad_delivery_start_time,ad_delivery_stop_time,currency,spend,impressions,"
    "estimated_audience_size,demographic_distribution,delivery_by_region,ad_creative_bodies,"
    "ad_creative_link_titles,ad_creative_link_descriptions,ad_creative_link_captions";

struct ApiConfig {
  std::string base_url = "https://graph.facebook.com";  // scheme://host[:port]
  std::string path = "/v18.0/ads_archive";
  std::string access_token;
  std::string reached_countries = "[\"NL\"]";
  std::string ad_type = "POLITICAL_AND_ISSUE_ADS";
  std::string fields = kDefaultFields;
  int page_size = 250;
  int max_retries = 5;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::seconds timeout{60};

  std::string endpoint() const { return base_url + path; }
};

struct DateRange {
  Date min{};
  Date max{};
};

// Terminal: the access token was refused. Names the endpoint, never the token.
class AuthError : public Error {
 public:
  using Error::Error;
};

// Terminal: transport failure or retries exhausted.
class FetchError : public Error {
 public:
  using Error::Error;
};

// Non-terminal problem with one page or record; the stream continues.
struct FetchIssue {
  std::string page_id;
  std::size_t page_index = 0;
  std::string message;
  std::string raw;
};

struct FetchStats {
  std::size_t pages = 0;
  std::size_t records = 0;
  std::size_t duplicates = 0;
  std::size_t retries = 0;
  std::vector<FetchIssue> issues;
};

namespace detail {

inline bool is_rate_limit(int status, const nlohmann::json& body) {
  if (status == 429) return true;
  if (body.is_object() && body.contains("error") && body["error"].is_object()) {
    const auto code = body["error"].value("code", 0);
    return code == 4 || code == 17 || code == 32 || code == 613;
  }
  return false;
}

inline bool is_auth_failure(int status, const nlohmann::json& body) {
  if (status == 401) return true;
  if (body.is_object() && body.contains("error") && body["error"].is_object()) {
    const auto& err = body["error"];
    const auto code = err.value("code", 0);
    return code == 190 || code == 102 || (err.value("type", "") == "OAuthException" && status == 403);
  }
  return status == 403;
}

}  // namespace detail

// Streams raw archive records for each page id over the given delivery window.
// Follows paging cursors to exhaustion, retries rate-limited and transient
// responses with exponential backoff, and emits each archive id at most once.
inline FetchStats fetch_ads(const std::vector<std::string>& page_ids, const DateRange& range,
                            const ApiConfig& cfg, const std::function<void(const nlohmann::json&)>& on_record) {
  if (cfg.access_token.empty()) throw PreconditionError("fetch_ads: access token is required");
  if (page_ids.empty()) throw PreconditionError("fetch_ads: no page ids given");
  if (std::chrono::sys_days{range.max} < std::chrono::sys_days{range.min})
    throw PreconditionError("fetch_ads: date range is not well-ordered");

  httplib::Client client(cfg.base_url);
  client.set_connection_timeout(cfg.timeout);
  client.set_read_timeout(cfg.timeout);

  FetchStats stats;
  std::set<std::string> seen;
  for (const auto& page_id : page_ids) {
    std::string after;
    for (std::size_t page_index = 0;; ++page_index) {
      httplib::Params params{{"search_page_ids", page_id},
                             {"ad_delivery_date_min", format_date(range.min)},
                             {"ad_delivery_date_max", format_date(range.max)},
                             {"ad_reached_countries", cfg.reached_countries},
                             {"ad_type", cfg.ad_type},
                             {"fields", cfg.fields},
                             {"limit", std::to_string(cfg.page_size)},
                             {"access_token", cfg.access_token}};
      if (!after.empty()) params.emplace("after", after);

      nlohmann::json body;
      int status = 0;
      std::string raw;
      auto backoff = cfg.initial_backoff;
      for (int attempt = 0;; ++attempt) {
        auto res = client.Get(cfg.path, params, httplib::Headers{});
        bool retryable = false;
        if (!res) {
          retryable = true;
          status = 0;
        } else {
          status = res->status;
          raw = res->body;
          body = nlohmann::json::parse(raw, nullptr, false);
          if (detail::is_auth_failure(status, body))
            throw AuthError("authentication rejected by " + cfg.endpoint() + " (HTTP " + std::to_string(status) + ")");
          retryable = detail::is_rate_limit(status, body) || status >= 500;
        }
        if (!retryable) break;
        if (attempt >= cfg.max_retries) {
          throw FetchError("giving up on " + cfg.endpoint() + " after " + std::to_string(cfg.max_retries) +
                           " retries (last status " + std::to_string(status) + ")");
        }
        ++stats.retries;
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      ++stats.pages;

      if (status != 200 || body.is_discarded() || !body.is_object() || !body.contains("data") ||
          !body["data"].is_array()) {
        stats.issues.push_back({page_id, page_index, "malformed page (HTTP " + std::to_string(status) + ")", raw});
        break;
      }
      const auto& data = body["data"];
      for (const auto& rec : data) {
        if (!rec.is_object() || !rec.contains("id") || !(rec["id"].is_string() || rec["id"].is_number_integer())) {
          stats.issues.push_back({page_id, page_index, "record without id", rec.dump()});
          continue;
        }
        const std::string id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
        if (!seen.insert(id).second) {
          ++stats.duplicates;
          continue;
        }
        ++stats.records;
        on_record(rec);
      }

      after.clear();
      if (const auto paging = body.find("paging"); paging != body.end() && paging->is_object()) {
        const bool has_next = paging->contains("next");
        if (has_next && paging->contains("cursors") && (*paging)["cursors"].is_object())
          after = (*paging)["cursors"].value("after", "");
      }
      if (after.empty() || data.empty()) break;
    }
  }
  return stats;
}

}  // namespace adtheme::ingestion
