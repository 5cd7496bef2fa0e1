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

#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "adtheme/ingestion/ad.hpp"
#include "adtheme/util/error.hpp"

namespace adtheme::ingestion {

// A record-level rejection. `field_path` names the offending field, e.g.
// "spend.lower_bound" or "demographic_distribution[2].percentage".
class RecordError : public Error {
 public:
  RecordError(std::string field_path, const std::string& message)
      : Error(field_path + ": " + message), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

// Tolerance on per-axis share sums; archive percentages are rounded.
inline constexpr double kShareSumTolerance = 0.02;

namespace detail {

inline std::string required_string(const nlohmann::json& rec, const char* field) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) throw RecordError(field, "missing required field");
  if (it->is_string()) {
    if (it->get_ref<const std::string&>().empty()) throw RecordError(field, "empty value");
    return it->get<std::string>();
  }
  if (it->is_number_integer()) return it->dump();
  throw RecordError(field, "expected a string");
}

inline std::string optional_string(const nlohmann::json& rec, const char* field) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) return {};
  if (!it->is_string()) throw RecordError(field, "expected a string");
  return it->get<std::string>();
}

inline std::uint64_t parse_bound(const nlohmann::json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw RecordError(path, "negative bound");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return out;
  }
  throw RecordError(path, "non-numeric bound");
}

inline std::optional<RangeMetric> parse_range(const nlohmann::json& rec, const char* field, bool required) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) throw RecordError(field, "missing required range");
    return std::nullopt;
  }
  if (!it->is_object()) throw RecordError(field, "expected an object with lower_bound/upper_bound");
  const std::string base = field;
  const auto lo = it->find("lower_bound");
  if (lo == it->end() || lo->is_null()) throw RecordError(base + ".lower_bound", "missing lower bound");
  const auto lower = parse_bound(*lo, base + ".lower_bound");
  std::optional<std::uint64_t> upper;
  if (const auto up = it->find("upper_bound"); up != it->end() && !up->is_null())
    upper = parse_bound(*up, base + ".upper_bound");
  if (upper && *upper < lower) throw RecordError(base + ".upper_bound", "upper bound below lower bound");
  return RangeMetric(lower, upper);
}

inline double parse_share(const nlohmann::json& v, const std::string& path) {
  double out = 0;
  if (v.is_number()) {
    out = v.get<double>();
  } else if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw RecordError(path, "non-numeric share");
  } else {
    throw RecordError(path, "missing or non-numeric share");
  }
  if (!std::isfinite(out) || out < 0.0 || out > 1.0) throw RecordError(path, "share outside [0,1]");
  return out;
}

inline std::vector<std::string> string_list(const nlohmann::json& rec, const char* field) {
  std::vector<std::string> out;
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) return out;
  if (!it->is_array()) throw RecordError(field, "expected an array of strings");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    if (!v.is_string()) throw RecordError(std::string(field) + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline std::optional<Date> parse_date_field(const nlohmann::json& rec, const char* field, bool required) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) throw RecordError(field, "missing required date");
    return std::nullopt;
  }
  if (!it->is_string()) throw RecordError(field, "expected a date string");
  auto d = parse_date(it->get_ref<const std::string&>());
  if (!d) throw RecordError(field, "malformed date");
  return d;
}

// Accumulates marginal shares per (axis, key) in first-seen order.
class CellAccumulator {
 public:
  void add(DemographicAxis axis, const std::string& key, double share) {
    const auto k = std::make_pair(axis, key);
    if (const auto it = index_.find(k); it != index_.end()) {
      cells_[it->second].share += share;
    } else {
      index_.emplace(k, cells_.size());
      cells_.push_back({axis, key, share});
    }
  }
  std::vector<DemographicCell> take() {
    for (auto& c : cells_) c.share = std::min(c.share, 1.0);
    return std::move(cells_);
  }

 private:
  std::vector<DemographicCell> cells_;
  std::map<std::pair<DemographicAxis, std::string>, std::size_t> index_;
};

inline void check_axis_sums(const std::vector<DemographicCell>& cells) {
  for (const auto axis : kAllAxes) {
    double sum = 0;
    bool present = false;
    for (const auto& c : cells) {
      if (c.axis != axis) continue;
      present = true;
      sum += c.share;
    }
    if (present && std::fabs(sum - 1.0) > kShareSumTolerance + 1e-12) {
      const char* field = axis == DemographicAxis::region ? "delivery_by_region" : "demographic_distribution";
      throw RecordError(field, std::string(to_string(axis)) + " shares sum to " + std::to_string(sum) +
                                   ", outside 1 +/- 0.02");
    }
  }
}

}  // namespace detail

// Converts one archive record into an Ad. demographic_distribution entries
// carry age and/or gender; joint age x gender entries are marginalised onto
// both axes. delivery_by_region entries become region cells.
inline Ad parse_ad_record(const nlohmann::json& record) {
  if (!record.is_object()) throw RecordError("$", "record is not an object");
  Ad ad;
  ad.id = detail::required_string(record, "id");
  ad.page_id = detail::required_string(record, "page_id");
  ad.page_name = detail::optional_string(record, "page_name");
  ad.party = detail::optional_string(record, "party");
  ad.start_date = *detail::parse_date_field(record, "ad_delivery_start_time", true);
  ad.end_date = detail::parse_date_field(record, "ad_delivery_stop_time", false);
  if (ad.end_date && std::chrono::sys_days{*ad.end_date} < std::chrono::sys_days{ad.start_date})
    throw RecordError("ad_delivery_stop_time", "stop date before start date");
  ad.currency = detail::optional_string(record, "currency");
  ad.spend = *detail::parse_range(record, "spend", true);
  ad.impressions = *detail::parse_range(record, "impressions", true);
  ad.audience = detail::parse_range(record, "estimated_audience_size", false);

  detail::CellAccumulator cells;
  if (const auto it = record.find("demographic_distribution"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw RecordError("demographic_distribution", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      const std::string path = "demographic_distribution[" + std::to_string(i) + "]";
      if (!e.is_object()) throw RecordError(path, "expected an object");
      const auto pct = e.find("percentage");
      if (pct == e.end()) throw RecordError(path + ".percentage", "missing share");
      const double share = detail::parse_share(*pct, path + ".percentage");
      const auto g = e.find("gender");
      const auto a = e.find("age");
      if ((g == e.end() || !g->is_string()) && (a == e.end() || !a->is_string()))
        throw RecordError(path, "entry has neither gender nor age");
      if (g != e.end() && g->is_string()) cells.add(DemographicAxis::gender, g->get<std::string>(), share);
      if (a != e.end() && a->is_string()) cells.add(DemographicAxis::age, a->get<std::string>(), share);
    }
  }
  if (const auto it = record.find("delivery_by_region"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw RecordError("delivery_by_region", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      const std::string path = "delivery_by_region[" + std::to_string(i) + "]";
      if (!e.is_object()) throw RecordError(path, "expected an object");
      const auto pct = e.find("percentage");
      if (pct == e.end()) throw RecordError(path + ".percentage", "missing share");
      const double share = detail::parse_share(*pct, path + ".percentage");
      const auto r = e.find("region");
      if (r == e.end() || !r->is_string()) throw RecordError(path + ".region", "missing region");
      cells.add(DemographicAxis::region, r->get<std::string>(), share);
    }
  }
  ad.demographics = cells.take();
  detail::check_axis_sums(ad.demographics);

  ad.creative_bodies = detail::string_list(record, "ad_creative_bodies");
  ad.link_titles = detail::string_list(record, "ad_creative_link_titles");
  ad.link_descriptions = detail::string_list(record, "ad_creative_link_descriptions");
  ad.link_captions = detail::string_list(record, "ad_creative_link_captions");
  return ad;
}

// Inverse of parse_ad_record: writes the archive field names. Bounds are
// written as strings like the archive API does; shares as JSON numbers so they
// round-trip exactly. `party` is an extension field, omitted when unresolved.
inline nlohmann::json ad_to_record(const Ad& ad) {
  using nlohmann::json;
  auto range = [](const RangeMetric& r) {
    json j = {{"lower_bound", std::to_string(r.lower())}};
    if (r.upper()) j["upper_bound"] = std::to_string(*r.upper());
    return j;
  };
  json j = json::object();
  j["id"] = ad.id;
  j["page_id"] = ad.page_id;
  j["page_name"] = ad.page_name;
  if (!ad.party.empty()) j["party"] = ad.party;
  j["ad_delivery_start_time"] = format_date(ad.start_date);
  if (ad.end_date) j["ad_delivery_stop_time"] = format_date(*ad.end_date);
  j["currency"] = ad.currency;
  j["spend"] = range(ad.spend);
  j["impressions"] = range(ad.impressions);
  if (ad.audience) j["estimated_audience_size"] = range(*ad.audience);
  json demo = json::array();
  json region = json::array();
  for (const auto& c : ad.demographics) {
    if (c.axis == DemographicAxis::region) {
      region.push_back({{"region", c.key}, {"percentage", c.share}});
    } else {
      demo.push_back({{std::string(to_string(c.axis)), c.key}, {"percentage", c.share}});
    }
  }
  j["demographic_distribution"] = std::move(demo);
  j["delivery_by_region"] = std::move(region);
  j["ad_creative_bodies"] = ad.creative_bodies;
  j["ad_creative_link_titles"] = ad.link_titles;
  j["ad_creative_link_descriptions"] = ad.link_descriptions;
  j["ad_creative_link_captions"] = ad.link_captions;
  return j;
}

}  // namespace adtheme::ingestion
