#include "dcp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace dcp {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c >= '0' && c <= '9';
  });
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2)))
    throw FormatError("invalid ISO date '" + std::string(text) +
                      "' (expected YYYY-MM-DD)");
  int y = 0, m = 0, d = 0;
  std::from_chars(text.data(), text.data() + 4, y);
  std::from_chars(text.data() + 5, text.data() + 7, m);
  std::from_chars(text.data() + 8, text.data() + 10, d);
  const Date date{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                  std::chrono::day{unsigned(d)}};
  if (!date.ok())
    throw FormatError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string iso_date_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

namespace {

// RFC-4180-ish field splitter: quoted fields, doubled-quote escapes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim_ws(std::string s) {
  const auto issp = [](unsigned char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

// Count cells may be empty (-> 0) or integral-valued numerics; OWID files
// write integer counts as floats.
std::int64_t parse_count_cell(const std::string& raw, int lineno,
                              std::size_t* clamped) {
  const std::string cell = trim_ws(raw);
  if (cell.empty()) return 0;
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || end != cell.data() + cell.size())
    throw FormatError("line " + std::to_string(lineno) +
                      ": non-numeric count '" + cell + "'");
  const double rounded = std::nearbyint(value);
  if (std::abs(value - rounded) > 1e-6)
    throw FormatError("line " + std::to_string(lineno) +
                      ": non-integer count '" + cell + "'");
  if (rounded < 0.0) {
    ++*clamped;
    return 0;
  }
  return static_cast<std::int64_t>(rounded);
}

ParseReport parse_table(const std::string& text, const char* date_col,
                        const char* key_col, const char* count_col,
                        SeriesSource source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("empty input: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Strip a UTF-8 byte-order mark if present.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_csv_line(line);
  const auto find_col = [&](const char* name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim_ws(header[i]) == name) return i;
    throw FormatError(std::string("missing required column '") + name + "'");
  };
  const std::size_t date_ix = find_col(date_col);
  const std::size_t count_ix = find_col(count_col);
  const std::size_t key_ix = key_col ? find_col(key_col) : 0;

  std::map<std::string, std::vector<std::pair<Date, std::int64_t>>> rows;
  ParseReport report;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::size_t need =
        std::max({date_ix, count_ix, key_col ? key_ix : std::size_t{0}});
    if (fields.size() <= need)
      throw FormatError("line " + std::to_string(lineno) + ": expected at least " +
                        std::to_string(need + 1) + " fields, got " +
                        std::to_string(fields.size()));
    Date date{};
    try {
      date = parse_iso_date(trim_ws(fields[date_ix]));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::int64_t count =
        parse_count_cell(fields[count_ix], lineno, &report.clamped_negatives);
    const std::string key = key_col ? trim_ws(fields[key_ix]) : std::string{};
    rows[key].emplace_back(date, count);
  }

  for (auto& [location, entries] : rows) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    CountSeries series;
    series.location = location;
    series.source = source;
    series.dates.reserve(entries.size());
    series.counts.reserve(entries.size());
    for (const auto& [date, count] : entries) {
      if (!series.dates.empty() && series.dates.back() == date)
        throw FormatError("duplicate date " + iso_date_string(date) +
                          (location.empty() ? std::string{}
                                            : " for location '" + location + "'"));
      series.dates.push_back(date);
      series.counts.push_back(count);
    }
    report.series.push_back(std::move(series));
  }
  if (report.series.empty())
    throw FormatError("no data rows found");
  return report;
}

}  // namespace

ParseReport parse_who_csv(const std::string& text) {
  return parse_table(text, "Date_reported", "Country", "New_cases",
                     SeriesSource::WhoCovid);
}

ParseReport parse_owid_csv(const std::string& text) {
  return parse_table(text, "date", "location", "new_cases",
                     SeriesSource::OwidMpox);
}

ParseReport parse_generic_csv(const std::string& text) {
  return parse_table(text, "date", nullptr, "count", SeriesSource::Generic);
}

std::string to_generic_csv(const CountSeries& series) {
  std::ostringstream out;
  out << "date,count\n";
  for (std::size_t i = 0; i < series.dates.size(); ++i)
    out << iso_date_string(series.dates[i]) << ',' << series.counts[i] << '\n';
  return out.str();
}

CountSample window(const CountSeries& series, const Date& start,
                   const Date& cutoff) {
  if (start > cutoff)
    throw std::invalid_argument("window: start is after cutoff");
  const auto lo =
      std::lower_bound(series.dates.begin(), series.dates.end(), start);
  const auto hi =
      std::upper_bound(series.dates.begin(), series.dates.end(), cutoff);
  if (lo >= hi)
    throw EmptyWindowError("window " + iso_date_string(start) + ".." +
                           iso_date_string(cutoff) + " contains no data for '" +
                           series.location + "'");
  const auto first = series.counts.begin() + (lo - series.dates.begin());
  const auto last = series.counts.begin() + (hi - series.dates.begin());
  return CountSample(std::vector<std::int64_t>(first, last));
}

std::vector<std::pair<Date, CountSample>> sequential_windows(
    const CountSeries& series, const CutoffPlan& plan) {
  if (plan.cutoffs.empty())
    throw std::invalid_argument("sequential_windows: no cutoffs in plan");
  for (std::size_t i = 0; i < plan.cutoffs.size(); ++i) {
    if (!(plan.cutoffs[i] > plan.start_date))
      throw std::invalid_argument("sequential_windows: cutoff " +
                                  iso_date_string(plan.cutoffs[i]) +
                                  " does not follow the start date");
    if (i > 0 && !(plan.cutoffs[i] > plan.cutoffs[i - 1]))
      throw std::invalid_argument("sequential_windows: cutoffs must increase");
  }
  std::vector<std::pair<Date, CountSample>> out;
  out.reserve(plan.cutoffs.size());
  for (const Date& cutoff : plan.cutoffs)
    out.emplace_back(cutoff, window(series, plan.start_date, cutoff));
  return out;
}

}  // namespace dcp
