#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dcp/discrete.hpp"
#include "dcp/fit.hpp"
#include "dcp/inference.hpp"
#include "dcp/ingest.hpp"
#include "dcp/report.hpp"

namespace {

using namespace dcp;

// Exit codes: 0 success, 1 usage error, 2 data error, 3 fit non-convergence
// (outputs are still written in that case).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::path p(out_path);
  if (const char* dir = std::getenv("DCPARETO_OUT_DIR");
      dir && *dir && p.is_relative())
    p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw FormatError("cannot write output file: " + p.string());
  out << content;
}

ParseReport parse_input(const std::string& text, const std::string& format) {
  if (format == "who") return parse_who_csv(text);
  if (format == "owid") return parse_owid_csv(text);
  if (format == "generic") return parse_generic_csv(text);
  throw UsageError("unknown format '" + format + "' (valid: who, owid, generic)");
}

const CountSeries& select_series(const ParseReport& report,
                                 const std::string& location) {
  if (location.empty()) {
    if (report.series.size() == 1) return report.series.front();
    std::string msg = "input holds multiple locations; pass --location (";
    for (std::size_t i = 0; i < report.series.size() && i < 20; ++i)
      msg += (i ? ", " : "") + report.series[i].location;
    if (report.series.size() > 20) msg += ", ...";
    throw UsageError(msg + ")");
  }
  for (const CountSeries& s : report.series)
    if (s.location == location) return s;
  std::string msg = "unknown location '" + location + "' (valid: ";
  for (std::size_t i = 0; i < report.series.size() && i < 20; ++i)
    msg += (i ? ", " : "") + report.series[i].location;
  if (report.series.size() > 20) msg += ", ...";
  throw UsageError(msg + ")");
}

Date parse_cli_date(const std::string& text, const char* flag) {
  try {
    return parse_iso_date(text);
  } catch (const FormatError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

Family parse_model(const std::string& name, bool composite_only) {
  const auto fam = family_from_name(name);
  if (!fam || (composite_only && !is_composite_family(*fam)))
    throw UsageError("unknown model '" + name + "' (valid: " +
                     (composite_only ? "wdlnp, wdwp"
                                     : "wdlnp, wdwp, poisson, zip, nb, zinb") +
                     ")");
  return *fam;
}

std::vector<Family> parse_model_list(const std::string& csv) {
  if (csv.empty())
    return {kAllFamilies, kAllFamilies + std::size(kAllFamilies)};
  std::vector<Family> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ','))
    out.push_back(parse_model(tok, false));
  if (out.empty()) throw UsageError("--models: empty model list");
  return out;
}

OutputFormat parse_out_format(const std::string& name) {
  const auto f = output_format_from_name(name);
  if (!f)
    throw UsageError("unknown output format '" + name +
                     "' (valid: csv, json, markdown)");
  return *f;
}

FitConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  FitConfig cfg;
  if (!path.empty()) {
    try {
      cfg = FitConfig::from_file(path);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (seed) cfg.seed = *seed;
  return cfg;
}

// Shared ingestion options for the data-driven commands.
struct DataArgs {
  std::string input;
  std::string format = "generic";
  std::string location;
  std::string start;
  std::string end;
  std::string config;
  std::string out;
  std::string out_format = "csv";
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "input CSV path")->required();
    cmd->add_option("--format", format, "input format: who, owid, generic");
    cmd->add_option("--location", location, "series to select (who/owid)");
    cmd->add_option("--start", start, "window start date (ISO, default: first)");
    cmd->add_option("--end", end, "window end date (ISO, default: last)");
    cmd->add_option("--config", config, "fit configuration file (key=value)");
    cmd->add_option("--seed", seed, "seed recorded in the fit configuration");
    cmd->add_option("--out", out, "output path (default: stdout)");
    cmd->add_option("--out-format", out_format, "csv, json, or markdown");
  }

  CountSample load_window(const CountSeries& series) const {
    const Date s = start.empty() ? series.dates.front()
                                 : parse_cli_date(start, "--start");
    const Date e =
        end.empty() ? series.dates.back() : parse_cli_date(end, "--end");
    return window(series, s, e);
  }
};

std::vector<std::pair<Date, CountSample>> resolve_windows(
    const DataArgs& args, const CountSeries& series,
    const std::string& cutoffs_csv) {
  if (cutoffs_csv.empty()) {
    const Date e =
        args.end.empty() ? series.dates.back() : parse_cli_date(args.end, "--end");
    return {{e, args.load_window(series)}};
  }
  CutoffPlan plan;
  plan.start_date = args.start.empty() ? series.dates.front()
                                       : parse_cli_date(args.start, "--start");
  std::istringstream in(cutoffs_csv);
  std::string tok;
  while (std::getline(in, tok, ','))
    plan.cutoffs.push_back(parse_cli_date(tok, "--cutoffs"));
  try {
    return sequential_windows(series, plan);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int exit_code_for(const std::vector<ComparisonEntry>& entries, int current) {
  bool any_success = false;
  bool any_unconverged = false;
  for (const auto& e : entries) {
    if (e.result) {
      any_success = true;
      if (!e.result->converged) any_unconverged = true;
    }
  }
  if (!any_success) return 2;
  if (any_unconverged && current == 0) return 3;
  return current;
}

int run_fit(const DataArgs& args, const std::string& model) {
  const Family fam = parse_model(model, false);
  const OutputFormat of = parse_out_format(args.out_format);
  const FitConfig cfg = load_config(args.config, args.seed);
  const ParseReport report = parse_input(read_file(args.input), args.format);
  const CountSample sample = args.load_window(select_series(report, args.location));
  const FitResult fit = fit_model(fam, sample, cfg);
  write_output(args.out, render_fit_result(fit, of));
  return fit.converged ? 0 : 3;
}

int run_compare(const DataArgs& args, const std::string& models_csv,
                const std::string& cutoffs_csv) {
  const std::vector<Family> families = parse_model_list(models_csv);
  const OutputFormat of = parse_out_format(args.out_format);
  const FitConfig cfg = load_config(args.config, args.seed);
  const ParseReport report = parse_input(read_file(args.input), args.format);
  const CountSeries& series = select_series(report, args.location);

  std::vector<std::pair<std::string, std::vector<ComparisonEntry>>> rows;
  int rc = 0;
  for (const auto& [cutoff, sample] : resolve_windows(args, series, cutoffs_csv)) {
    auto entries = compare_models(sample, families, cfg);
    rc = exit_code_for(entries, rc);
    rows.emplace_back(iso_date_string(cutoff), std::move(entries));
  }
  write_output(args.out, render(make_aic_table(rows), of));
  return rc;
}

int run_test(const DataArgs& args, const std::string& model,
             const std::string& cutoffs_csv, const std::string& alpha_trace_out,
             bool mixture) {
  const Family fam = parse_model(model, true);
  const OutputFormat of = parse_out_format(args.out_format);
  const FitConfig cfg = load_config(args.config, args.seed);
  const ParseReport report = parse_input(read_file(args.input), args.format);
  const CountSeries& series = select_series(report, args.location);

  std::vector<std::pair<std::string, LrtReport>> rows;
  std::vector<std::pair<std::string, double>> trace;
  int rc = 0;
  for (const auto& [cutoff, sample] : resolve_windows(args, series, cutoffs_csv)) {
    LrtReport rep = lrt_report(fam, sample, cfg);
    const bool ok = rep.infinite_mean.unconstrained.converged &&
                    rep.infinite_mean.constrained.converged &&
                    rep.infinite_variance.constrained.converged;
    if (!ok && rc == 0) rc = 3;
    trace.emplace_back(iso_date_string(cutoff),
                       rep.infinite_mean.unconstrained.params[2]);
    rows.emplace_back(iso_date_string(cutoff), std::move(rep));
  }
  write_output(args.out, render(make_lrt_table(rows, mixture), of));
  if (!alpha_trace_out.empty())
    write_output(alpha_trace_out, render(make_alpha_trace(trace), of));
  return rc;
}

int run_plotdata(const DataArgs& args, const std::string& models_csv,
                 const std::string& zero_out) {
  const std::vector<Family> families = parse_model_list(models_csv);
  const OutputFormat of = parse_out_format(args.out_format);
  const FitConfig cfg = load_config(args.config, args.seed);
  const ParseReport report = parse_input(read_file(args.input), args.format);
  const CountSample sample = args.load_window(select_series(report, args.location));

  const auto entries = compare_models(sample, families, cfg);
  const int rc = exit_code_for(entries, 0);
  write_output(args.out, render(make_ecdf_overlay(sample, entries), of));
  write_output(zero_out, render(make_zero_prob(sample, entries), of));
  return rc;
}

int run_simulate(const std::string& model, const std::vector<double>& params,
                 std::int64_t n, std::uint64_t seed, const std::string& out) {
  const Family fam = parse_model(model, true);
  if (params.size() != 4)
    throw UsageError("--params: expected 4 comma-separated values (" +
                     [&] {
                       std::string s;
                       for (const auto& name : family_param_names(fam))
                         s += (s.empty() ? "" : ",") + name;
                       return s;
                     }() +
                     ")");
  if (n < 1) throw UsageError("--n must be >= 1");

  std::optional<DiscreteComposite> dist;
  try {
    dist.emplace(composite_from_params(fam, params));
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid parameters: ") + e.what());
  }

  CountSeries series;
  series.location = "simulated";
  series.source = SeriesSource::Generic;
  series.counts = dist->sample(seed, static_cast<std::size_t>(n));
  const Date first{std::chrono::year{2000}, std::chrono::month{1},
                   std::chrono::day{1}};
  series.dates.reserve(series.counts.size());
  for (std::size_t i = 0; i < series.counts.size(); ++i)
    series.dates.push_back(
        Date{std::chrono::sys_days(first) + std::chrono::days(i)});
  write_output(out, to_generic_csv(series));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dcpareto: discrete composite Pareto-tail count models — fitting, "
      "model comparison, tail-index tests, and plot data for epidemic "
      "case-count series"};
  app.require_subcommand(1);
  int rc = 0;

  DataArgs fit_args;
  std::string fit_model_name;
  auto* fit_cmd = app.add_subcommand("fit", "fit one model to a count window");
  fit_args.attach(fit_cmd);
  fit_cmd->add_option("--model", fit_model_name, "model family")->required();
  fit_cmd->callback([&] { rc = run_fit(fit_args, fit_model_name); });

  DataArgs cmp_args;
  std::string cmp_models, cmp_cutoffs;
  auto* cmp_cmd =
      app.add_subcommand("compare", "AIC comparison across model families");
  cmp_args.attach(cmp_cmd);
  cmp_cmd->add_option("--models", cmp_models,
                      "comma-separated families (default: all six)");
  cmp_cmd->add_option("--cutoffs", cmp_cutoffs,
                      "comma-separated ISO dates for sequential windows");
  cmp_cmd->callback([&] { rc = run_compare(cmp_args, cmp_models, cmp_cutoffs); });

  DataArgs test_args;
  std::string test_model, test_cutoffs, test_trace;
  bool test_mixture = false;
  auto* test_cmd =
      app.add_subcommand("test", "likelihood-ratio tests of the tail index");
  test_args.attach(test_cmd);
  test_cmd->add_option("--model", test_model, "wdlnp or wdwp")->required();
  test_cmd->add_option("--cutoffs", test_cutoffs,
                       "comma-separated ISO dates for sequential windows");
  test_cmd->add_option("--alpha-trace", test_trace,
                       "also write a cutoff/alpha-hat trace to this path");
  test_cmd->add_flag("--mixture-p", test_mixture,
                     "include boundary-mixture p-value columns");
  test_cmd->callback([&] {
    rc = run_test(test_args, test_model, test_cutoffs, test_trace, test_mixture);
  });

  DataArgs plot_args;
  std::string plot_models, plot_zero_out;
  auto* plot_cmd = app.add_subcommand(
      "plotdata", "ECDF overlay and zero-probability tables");
  plot_args.attach(plot_cmd);
  plot_cmd->add_option("--models", plot_models,
                       "comma-separated families (default: all six)");
  plot_cmd->add_option("--out-zero", plot_zero_out,
                       "output path for the zero-probability table");
  plot_cmd->callback(
      [&] { rc = run_plotdata(plot_args, plot_models, plot_zero_out); });

  std::string sim_model, sim_out;
  std::vector<double> sim_params;
  std::int64_t sim_n = 0;
  std::uint64_t sim_seed = 0;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "draw a deterministic sample and write it as generic CSV");
  sim_cmd->add_option("--model", sim_model, "wdlnp or wdwp")->required();
  sim_cmd->add_option("--params", sim_params, "4 comma-separated parameters")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--n", sim_n, "sample size")->required();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--out", sim_out, "output path (default: stdout)");
  sim_cmd->callback(
      [&] { rc = run_simulate(sim_model, sim_params, sim_n, sim_seed, sim_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
