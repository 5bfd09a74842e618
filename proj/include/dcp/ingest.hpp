#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcp/count_sample.hpp"

namespace dcp {

using Date = std::chrono::year_month_day;

// Strict ISO 8601 (YYYY-MM-DD); anything else is a FormatError.
Date parse_iso_date(std::string_view text);
std::string iso_date_string(const Date& d);

enum class SeriesSource { WhoCovid, OwidMpox, Generic };

// One location's daily counts. Dates are strictly increasing and aligned
// with counts; counts are nonnegative (negative upstream corrections get
// clamped during parsing).
struct CountSeries {
  std::string location;
  std::vector<Date> dates;
  std::vector<std::int64_t> counts;
  SeriesSource source = SeriesSource::Generic;
};

struct CutoffPlan {
  Date start_date;
  std::vector<Date> cutoffs;  // increasing, each > start_date
};

struct ParseReport {
  std::vector<CountSeries> series;    // sorted by location
  std::size_t clamped_negatives = 0;  // cells clamped to zero
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// WHO daily COVID format: columns Date_reported, Country, New_cases
// (extras ignored), one series per country.
ParseReport parse_who_csv(const std::string& text);

// OWID mpox format: columns location, date, new_cases.
ParseReport parse_owid_csv(const std::string& text);

// Our own minimal interchange format: header `date,count`.
ParseReport parse_generic_csv(const std::string& text);

std::string to_generic_csv(const CountSeries& series);

// Counts with start <= date <= cutoff (inclusive both ends), in date order.
CountSample window(const CountSeries& series, const Date& start,
                   const Date& cutoff);

// One cumulative window per cutoff, all anchored at plan.start_date.
std::vector<std::pair<Date, CountSample>> sequential_windows(
    const CountSeries& series, const CutoffPlan& plan);

}  // namespace dcp
