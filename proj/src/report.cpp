#include "dcp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "dcp/discrete.hpp"
#include "dcp/specfun.hpp"

namespace dcp {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

json cell_json(const Cell& cell) {
  struct Visitor {
    json operator()(const std::string& s) const { return s; }
    json operator()(double v) const {
      return std::isfinite(v) ? json(v) : json(format_double(v));
    }
    json operator()(std::int64_t v) const { return v; }
    json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_csv(const ReportTable& t) {
  std::ostringstream out;
  for (const auto& c : t.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << csv_escape(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
  return out.str();
}

std::string render_json(const ReportTable& t) {
  json doc;
  doc["kind"] = std::string(table_kind_name(t.kind));
  doc["comments"] = t.comments;
  doc["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
      r[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render_markdown(const ReportTable& t) {
  std::ostringstream out;
  for (const auto& c : t.comments) out << "> " << c << '\n';
  if (!t.comments.empty()) out << '\n';
  out << '|';
  for (const auto& c : t.columns) out << ' ' << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& row : t.rows) {
    out << '|';
    for (const auto& cell : row) out << ' ' << cell_text(cell) << " |";
    out << '\n';
  }
  return out.str();
}

// Successful fits in family enumeration order.
std::vector<const FitResult*> successful_fits(
    const std::vector<ComparisonEntry>& fits) {
  std::vector<const FitResult*> out;
  for (const Family f : kAllFamilies)
    for (const auto& e : fits)
      if (e.result && e.spec.family == f) out.push_back(&*e.result);
  return out;
}

}  // namespace

std::string_view table_kind_name(TableKind kind) {
  switch (kind) {
    case TableKind::AicTable: return "aic_table";
    case TableKind::LrtTable: return "lrt_table";
    case TableKind::AlphaTrace: return "alpha_trace";
    case TableKind::EcdfOverlay: return "ecdf_overlay";
    case TableKind::ZeroProb: return "zero_prob";
  }
  return "?";
}

std::optional<OutputFormat> output_format_from_name(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "markdown" || name == "md") return OutputFormat::Markdown;
  return std::nullopt;
}

std::string render(const ReportTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return render_csv(table);
    case OutputFormat::Json: return render_json(table);
    case OutputFormat::Markdown: return render_markdown(table);
  }
  return {};
}

std::string render_fit_result(const FitResult& fit, OutputFormat format) {
  const auto names = family_param_names(fit.spec.family);
  if (format == OutputFormat::Json) {
    json doc;
    doc["family"] = std::string(family_name(fit.spec.family));
    doc["k"] = fit.spec.k;
    json params = json::object();
    for (std::size_t i = 0; i < names.size() && i < fit.params.size(); ++i)
      params[names[i]] = fit.params[i];
    doc["params"] = std::move(params);
    doc["loglik"] = fit.loglik;
    doc["aic"] = fit.aic;
    doc["converged"] = fit.converged;
    doc["n_restarts_used"] = fit.n_restarts_used;
    return doc.dump(2) + "\n";
  }
  ReportTable t;
  t.kind = TableKind::AicTable;  // kind unused for key/value rendering
  t.columns = {"key", "value"};
  t.rows.push_back({std::string("family"), std::string(family_name(fit.spec.family))});
  for (std::size_t i = 0; i < names.size() && i < fit.params.size(); ++i)
    t.rows.push_back({names[i], fit.params[i]});
  t.rows.push_back({std::string("loglik"), fit.loglik});
  t.rows.push_back({std::string("aic"), fit.aic});
  t.rows.push_back({std::string("converged"), fit.converged});
  t.rows.push_back({std::string("n_restarts_used"),
                    static_cast<std::int64_t>(fit.n_restarts_used)});
  return format == OutputFormat::Csv ? render_csv(t) : render_markdown(t);
}

ReportTable make_aic_table(
    const std::vector<std::pair<std::string, std::vector<ComparisonEntry>>>& rows) {
  // Union of families across rows, in enumeration order, as columns.
  std::vector<Family> fams;
  for (const Family f : kAllFamilies)
    for (const auto& [label, entries] : rows)
      if (std::any_of(entries.begin(), entries.end(),
                      [&](const ComparisonEntry& e) { return e.spec.family == f; })) {
        fams.push_back(f);
        break;
      }

  ReportTable t;
  t.kind = TableKind::AicTable;
  t.columns = {"cutoff"};
  for (const Family f : fams) t.columns.emplace_back(family_name(f));
  t.columns.emplace_back("best");

  for (const auto& [label, entries] : rows) {
    std::vector<Cell> row;
    row.emplace_back(label);
    std::string best;
    for (const Family f : fams) {
      const auto it = std::find_if(
          entries.begin(), entries.end(),
          [&](const ComparisonEntry& e) { return e.spec.family == f; });
      if (it == entries.end() || !it->result) {
        row.emplace_back(std::string("NA"));
        if (it != entries.end() && !it->error.empty())
          t.comments.push_back(label + " " + std::string(family_name(f)) +
                               ": " + it->error);
      } else {
        row.emplace_back(it->result->aic);
        if (it->best) best = family_name(f);
      }
    }
    row.emplace_back(best);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable make_lrt_table(
    const std::vector<std::pair<std::string, LrtReport>>& rows,
    bool include_mixture) {
  ReportTable t;
  t.kind = TableKind::LrtTable;
  t.columns = {"cutoff",   "alpha_hat", "lambda_1", "p_1",
               "reject_1", "lambda_2",  "p_2",      "reject_2"};
  if (include_mixture) {
    t.columns.emplace_back("p_mix_1");
    t.columns.emplace_back("p_mix_2");
  }
  for (const auto& [label, rep] : rows) {
    std::vector<Cell> row;
    row.emplace_back(label);
    row.emplace_back(rep.infinite_mean.unconstrained.params[2]);
    row.emplace_back(rep.infinite_mean.lambda);
    row.emplace_back(rep.infinite_mean.p_value);
    row.emplace_back(rep.infinite_mean.reject_at_005);
    row.emplace_back(rep.infinite_variance.lambda);
    row.emplace_back(rep.infinite_variance.p_value);
    row.emplace_back(rep.infinite_variance.reject_at_005);
    if (include_mixture) {
      row.emplace_back(rep.infinite_mean.p_value_mixture);
      row.emplace_back(rep.infinite_variance.p_value_mixture);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable make_alpha_trace(
    const std::vector<std::pair<std::string, double>>& rows) {
  ReportTable t;
  t.kind = TableKind::AlphaTrace;
  t.columns = {"cutoff", "alpha_hat"};
  for (const auto& [label, alpha] : rows)
    t.rows.push_back({label, alpha});
  return t;
}

double model_pmf(const FitResult& fit, std::int64_t y) {
  if (y < 0) return 0.0;
  const auto& p = fit.params;
  const double yd = static_cast<double>(y);
  switch (fit.spec.family) {
    case Family::WDLNP:
    case Family::WDWP:
      return DiscreteComposite(composite_from_params(fit.spec.family, p)).pmf(y);
    case Family::Poisson: {
      const double lambda = p[0];
      if (lambda == 0.0) return y == 0 ? 1.0 : 0.0;
      return std::exp(yd * std::log(lambda) - lambda - log_gamma(yd + 1.0));
    }
    case Family::ZIP: {
      const double pi = p[0], lambda = p[1];
      const double pois =
          std::exp(yd * std::log(lambda) - lambda - log_gamma(yd + 1.0));
      return y == 0 ? pi + (1.0 - pi) * std::exp(-lambda) : (1.0 - pi) * pois;
    }
    case Family::NB: {
      const double r = p[0], pr = p[1];
      return std::exp(log_gamma(yd + r) - log_gamma(r) - log_gamma(yd + 1.0) +
                      r * std::log(pr) + yd * std::log1p(-pr));
    }
    case Family::ZINB: {
      const double pi = p[0], r = p[1], pr = p[2];
      const double nb =
          std::exp(log_gamma(yd + r) - log_gamma(r) - log_gamma(yd + 1.0) +
                   r * std::log(pr) + yd * std::log1p(-pr));
      return y == 0 ? pi + (1.0 - pi) * std::exp(r * std::log(pr))
                    : (1.0 - pi) * nb;
    }
  }
  return 0.0;
}

ReportTable make_ecdf_overlay(const CountSample& sample,
                              const std::vector<ComparisonEntry>& fits) {
  const auto models = successful_fits(fits);
  const std::int64_t y_max = sample.max();

  // Dense grid through 1000, ~2% log steps above.
  std::vector<std::int64_t> grid;
  const std::int64_t dense_top = std::min<std::int64_t>(y_max, 1000);
  for (std::int64_t y = 0; y <= dense_top; ++y) grid.push_back(y);
  bool thinned = false;
  std::int64_t cur = dense_top;
  while (cur < y_max) {
    thinned = true;
    cur = std::max(cur + 1, static_cast<std::int64_t>(
                                static_cast<double>(cur) * 1.02));
    grid.push_back(std::min(cur, y_max));
  }
  if (!grid.empty() && grid.back() != y_max) grid.push_back(y_max);

  ReportTable t;
  t.kind = TableKind::EcdfOverlay;
  if (thinned)
    t.comments.push_back(
        "y grid log-thinned above 1000 (about 2% steps) up to y_max = " +
        std::to_string(y_max));
  t.columns = {"y", "ecdf"};
  for (const FitResult* m : models)
    t.columns.emplace_back(family_name(m->spec.family));

  // Composite CDFs come from the distribution object directly; baseline
  // CDFs accumulate pmf between grid points (capped; the tail beyond the
  // cap carries negligible baseline mass).
  struct Track {
    const FitResult* fit;
    std::optional<DiscreteComposite> dist;
    double cum = 0.0;
    std::int64_t next = 0;  // next y to accumulate
  };
  std::vector<Track> tracks;
  for (const FitResult* m : models) {
    Track tr;
    tr.fit = m;
    if (is_composite_family(m->spec.family))
      tr.dist.emplace(composite_from_params(m->spec.family, m->params));
    tracks.push_back(std::move(tr));
  }
  constexpr std::int64_t kAccumCap = 2'000'000;

  const auto& hist = sample.histogram();
  std::size_t hist_ix = 0;
  std::int64_t rank = 0;
  const double n = static_cast<double>(sample.n());

  for (const std::int64_t y : grid) {
    while (hist_ix < hist.size() && hist[hist_ix].first <= y)
      rank += hist[hist_ix++].second;
    std::vector<Cell> row;
    row.emplace_back(y);
    row.emplace_back(static_cast<double>(rank) / n);
    for (Track& tr : tracks) {
      if (tr.dist) {
        row.emplace_back(tr.dist->cdf(y));
      } else {
        for (; tr.next <= y && tr.next <= kAccumCap; ++tr.next)
          tr.cum += model_pmf(*tr.fit, tr.next);
        row.emplace_back(std::min(tr.cum, 1.0));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable make_zero_prob(const CountSample& sample,
                           const std::vector<ComparisonEntry>& fits) {
  ReportTable t;
  t.kind = TableKind::ZeroProb;
  t.columns = {"model", "prob_zero"};
  t.rows.push_back(
      {std::string("empirical"),
       static_cast<double>(sample.zero_count()) / static_cast<double>(sample.n())});
  for (const FitResult* m : successful_fits(fits))
    t.rows.push_back({std::string(family_name(m->spec.family)), model_pmf(*m, 0)});
  for (const auto& e : fits)
    if (!e.result)
      t.comments.push_back(std::string(family_name(e.spec.family)) +
                           " fit failed: " + e.error);
  return t;
}

}  // namespace dcp
