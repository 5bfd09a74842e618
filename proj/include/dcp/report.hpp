#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dcp/count_sample.hpp"
#include "dcp/fit.hpp"
#include "dcp/inference.hpp"

namespace dcp {

enum class TableKind { AicTable, LrtTable, AlphaTrace, EcdfOverlay, ZeroProb };
enum class OutputFormat { Csv, Json, Markdown };

std::string_view table_kind_name(TableKind kind);
std::optional<OutputFormat> output_format_from_name(std::string_view name);

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct ReportTable {
  TableKind kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;  // leading annotations, e.g. grid notes
};

std::string render(const ReportTable& table, OutputFormat format);

// Flat key/value rendering of a single fit (params, loglik, AIC,
// convergence) in the same three formats.
std::string render_fit_result(const FitResult& fit, OutputFormat format);

// One row per labelled sample window; one AIC column per family plus a
// `best` column naming the lowest-AIC model of that row.
ReportTable make_aic_table(
    const std::vector<std::pair<std::string, std::vector<ComparisonEntry>>>& rows);

// Lambda / p-value / reject columns for both tail boundaries; optionally
// the boundary-mixture p-values as extra columns.
ReportTable make_lrt_table(
    const std::vector<std::pair<std::string, LrtReport>>& rows,
    bool include_mixture);

ReportTable make_alpha_trace(
    const std::vector<std::pair<std::string, double>>& rows);

// Empirical CDF against each successfully fitted model's CDF on a grid of
// y values: dense through 1000, log-thinned above (noted in comments).
ReportTable make_ecdf_overlay(const CountSample& sample,
                              const std::vector<ComparisonEntry>& fits);

// Fitted P(Y=0) per model alongside the empirical zero fraction.
ReportTable make_zero_prob(const CountSample& sample,
                           const std::vector<ComparisonEntry>& fits);

// pmf of a fitted model at one point (used by the overlay/zero tables and
// exposed for tests).
double model_pmf(const FitResult& fit, std::int64_t y);

}  // namespace dcp
