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
#include <cstdio>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adtheme/util/error.hpp"

namespace adtheme::ingestion {

// A ranged estimate as published by the ad archive. `upper` is absent for
// open-ended top buckets such as ">1M impressions".
class RangeMetric {
 public:
  RangeMetric() = default;
  explicit RangeMetric(std::uint64_t lower, std::optional<std::uint64_t> upper = std::nullopt)
      : lower_(lower), upper_(upper) {
    if (upper_ && *upper_ < lower_) throw std::invalid_argument("range upper bound below lower bound");
  }

  std::uint64_t lower() const { return lower_; }
  const std::optional<std::uint64_t>& upper() const { return upper_; }

  // Point value used by every aggregate. Open-ended ranges use the lower bound.
  double midpoint() const {
    return upper_ ? (static_cast<double>(lower_) + static_cast<double>(*upper_)) / 2.0
                  : static_cast<double>(lower_);
  }

  bool operator==(const RangeMetric&) const = default;

 private:
  std::uint64_t lower_ = 0;
  std::optional<std::uint64_t> upper_;
};

enum class DemographicAxis { gender, age, region };

inline std::string_view to_string(DemographicAxis axis) {
  switch (axis) {
    case DemographicAxis::gender: return "gender";
    case DemographicAxis::age: return "age";
    case DemographicAxis::region: return "region";
  }
  return "unknown";
}

inline std::optional<DemographicAxis> parse_axis(std::string_view s) {
  if (s == "gender") return DemographicAxis::gender;
  if (s == "age") return DemographicAxis::age;
  if (s == "region") return DemographicAxis::region;
  return std::nullopt;
}

inline constexpr DemographicAxis kAllAxes[] = {DemographicAxis::gender, DemographicAxis::age,
                                               DemographicAxis::region};

struct DemographicCell {
  DemographicAxis axis = DemographicAxis::gender;
  std::string key;
  double share = 0.0;  // in [0, 1]

  bool operator==(const DemographicCell&) const = default;
};

using Date = std::chrono::year_month_day;

// Accepts "YYYY-MM-DD" optionally followed by a time part ("T..." or " ...").
inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  const auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

// One archived ad. Text-element lists are always present, possibly empty.
struct Ad {
  std::string id;
  std::string page_id;
  std::string page_name;
  std::string party;  // resolved from the page registry; empty until resolved
  Date start_date{};
  std::optional<Date> end_date;
  std::string currency;
  RangeMetric spend;
  RangeMetric impressions;
  std::optional<RangeMetric> audience;
  std::vector<DemographicCell> demographics;
  std::vector<std::string> creative_bodies;
  std::vector<std::string> link_titles;
  std::vector<std::string> link_descriptions;
  std::vector<std::string> link_captions;

  bool has_axis(DemographicAxis axis) const {
    for (const auto& c : demographics)
      if (c.axis == axis) return true;
    return false;
  }

  bool operator==(const Ad&) const = default;
};

class DuplicateAdError : public Error {
 public:
  using Error::Error;
};

// Ads in insertion order with an id index. Ids are unique.
class Corpus {
 public:
  void add(Ad ad) {
    if (index_.contains(ad.id)) throw DuplicateAdError("duplicate ad id " + ad.id);
    index_.emplace(ad.id, ads_.size());
    ads_.push_back(std::move(ad));
  }

  const Ad* find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &ads_[it->second];
  }

  const Ad& at(std::string_view id) const {
    const Ad* ad = find(id);
    if (!ad) throw NotFoundError("unknown ad id " + std::string(id));
    return *ad;
  }

  bool contains(std::string_view id) const { return find(id) != nullptr; }
  const std::vector<Ad>& ads() const { return ads_; }
  std::vector<Ad>& mutable_ads() { return ads_; }
  std::size_t size() const { return ads_.size(); }
  bool empty() const { return ads_.empty(); }

  bool operator==(const Corpus& other) const { return ads_ == other.ads_; }

 private:
  std::vector<Ad> ads_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace adtheme::ingestion
