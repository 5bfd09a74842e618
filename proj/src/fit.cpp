#include "dcp/fit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "dcp/discrete.hpp"
#include "dcp/heads.hpp"
#include "dcp/nelder_mead.hpp"
#include "dcp/specfun.hpp"

namespace dcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogFloor = -745.0;  // ln(smallest positive double), rounded

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::WDLNP: return "wdlnp";
    case Family::WDWP: return "wdwp";
    case Family::Poisson: return "poisson";
    case Family::ZIP: return "zip";
    case Family::NB: return "nb";
    case Family::ZINB: return "zinb";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  for (const Family f : kAllFamilies)
    if (name == family_name(f)) return f;
  return std::nullopt;
}

bool is_composite_family(Family f) {
  return f == Family::WDLNP || f == Family::WDWP;
}

int family_param_count(Family f) {
  switch (f) {
    case Family::WDLNP: return 4;
    case Family::WDWP: return 4;
    case Family::Poisson: return 1;
    case Family::ZIP: return 2;
    case Family::NB: return 2;
    case Family::ZINB: return 3;
  }
  return 0;
}

std::vector<std::string> family_param_names(Family f) {
  switch (f) {
    case Family::WDLNP: return {"mu", "sigma", "alpha", "theta"};
    case Family::WDWP: return {"shape", "scale", "alpha", "theta"};
    case Family::Poisson: return {"lambda"};
    case Family::ZIP: return {"pi", "lambda"};
    case Family::NB: return {"r", "p"};
    case Family::ZINB: return {"pi", "r", "p"};
  }
  return {};
}

ModelSpec model_spec(Family f) { return ModelSpec{f, family_param_count(f)}; }

// ---------------------------------------------------------------------------
// FitConfig parsing

namespace {

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

}  // namespace

FitConfig FitConfig::from_kv_text(const std::string& text) {
  FitConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "ftol") {
        cfg.ftol = std::stod(value);
        if (!(cfg.ftol > 0)) throw std::invalid_argument("must be > 0");
      } else if (key == "xtol") {
        cfg.xtol = std::stod(value);
        if (!(cfg.xtol > 0)) throw std::invalid_argument("must be > 0");
      } else if (key == "max_iters") {
        cfg.max_iters = std::stoi(value);
        if (cfg.max_iters < 1) throw std::invalid_argument("must be >= 1");
      } else if (key == "restarts") {
        cfg.restarts = std::stoi(value);
        if (cfg.restarts < 1) throw std::invalid_argument("must be >= 1");
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      if (what.rfind("config line", 0) == 0) throw;
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": bad value for '" + key + "' (" + what + ")");
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": value out of range for '" + key + "'");
    }
  }
  return cfg;
}

FitConfig FitConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_kv_text(buf.str());
}

// ---------------------------------------------------------------------------
// Log-likelihoods

double loglik_composite(const CompositeParams& params,
                        const CountSample& sample) {
  const DiscreteComposite dist(params);
  double total = 0.0;
  std::int64_t floored = 0;
  for (const auto& [value, mult] : sample.histogram()) {
    double lp = dist.log_pmf(value);
    if (std::isnan(lp) || lp == -kInf) return -kInf;
    if (lp < kLogFloor) {
      lp = kLogFloor;
      floored += mult;
    }
    total += static_cast<double>(mult) * lp;
  }
  if (static_cast<double>(floored) > 0.01 * static_cast<double>(sample.n()))
    return -kInf;
  return total;
}

namespace {

double poisson_loglik(double lambda, const CountSample& s) {
  if (lambda < 0.0 || std::isnan(lambda)) return -kInf;
  if (lambda == 0.0) return s.zero_count() == s.n() ? 0.0 : -kInf;
  const double ll = std::log(lambda);
  double total = 0.0;
  for (const auto& [v, m] : s.histogram()) {
    const double y = static_cast<double>(v);
    total += static_cast<double>(m) * (y * ll - lambda - log_gamma(y + 1.0));
  }
  return total;
}

double zip_loglik(double pi, double lambda, const CountSample& s) {
  if (!(pi >= 0.0 && pi < 1.0) || !(lambda > 0.0)) return -kInf;
  const double ll = std::log(lambda);
  const double log_one_minus_pi = std::log1p(-pi);
  double total = static_cast<double>(s.zero_count()) *
                 std::log(pi + (1.0 - pi) * std::exp(-lambda));
  for (const auto& [v, m] : s.histogram()) {
    if (v == 0) continue;
    const double y = static_cast<double>(v);
    total += static_cast<double>(m) *
             (log_one_minus_pi + y * ll - lambda - log_gamma(y + 1.0));
  }
  return total;
}

double nb_term(double y, double r, double log_p, double log_q) {
  return log_gamma(y + r) - log_gamma(r) - log_gamma(y + 1.0) + r * log_p +
         y * log_q;
}

double nb_loglik(double r, double p, const CountSample& s) {
  if (!(r > 0.0) || !(p > 0.0 && p < 1.0)) return -kInf;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double total = 0.0;
  for (const auto& [v, m] : s.histogram())
    total += static_cast<double>(m) * nb_term(static_cast<double>(v), r, log_p, log_q);
  return total;
}

double zinb_loglik(double pi, double r, double p, const CountSample& s) {
  if (!(pi >= 0.0 && pi < 1.0) || !(r > 0.0) || !(p > 0.0 && p < 1.0))
    return -kInf;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double total = static_cast<double>(s.zero_count()) *
                 std::log(pi + (1.0 - pi) * std::exp(r * log_p));
  const double log_one_minus_pi = std::log1p(-pi);
  for (const auto& [v, m] : s.histogram()) {
    if (v == 0) continue;
    total += static_cast<double>(m) *
             (log_one_minus_pi + nb_term(static_cast<double>(v), r, log_p, log_q));
  }
  return total;
}

}  // namespace

double loglik_baseline(Family family, const std::vector<double>& params,
                       const CountSample& sample) {
  if (static_cast<int>(params.size()) != family_param_count(family))
    throw std::invalid_argument("loglik_baseline: wrong parameter count");
  switch (family) {
    case Family::Poisson: return poisson_loglik(params[0], sample);
    case Family::ZIP: return zip_loglik(params[0], params[1], sample);
    case Family::NB: return nb_loglik(params[0], params[1], sample);
    case Family::ZINB: return zinb_loglik(params[0], params[1], params[2], sample);
    default:
      throw std::invalid_argument("loglik_baseline: not a baseline family");
  }
}

double aic(double loglik, int k) { return -2.0 * loglik + 2.0 * k; }

// ---------------------------------------------------------------------------
// Composite fitting

CompositeParams composite_from_params(Family family,
                                      const std::vector<double>& params) {
  if (params.size() != 4)
    throw std::invalid_argument("composite_from_params: need 4 parameters");
  HeadModel head = family == Family::WDLNP
                       ? make_lognormal_head(params[0], params[1])
                       : make_weibull_head(params[0], params[1]);
  return CompositeParams(std::move(head), params[2], params[3]);
}

namespace {

// Natural <-> unconstrained coordinates. Natural layout is always
// {h1, h2, alpha, theta}; h1 is mu (identity) for the lognormal head and
// shape (log) for the Weibull head; h2, alpha, theta go through logs.
// Under Pinned the alpha coordinate drops out; under UpperBound it maps
// through bound * sigmoid.
struct CompositeTransform {
  Family family;
  TailConstraint constraint;
  double alpha_bound;

  std::size_t dim() const {
    return constraint == TailConstraint::Pinned ? 3 : 4;
  }

  std::vector<double> to_unconstrained(const std::vector<double>& nat) const {
    std::vector<double> t;
    t.push_back(family == Family::WDLNP ? nat[0] : std::log(nat[0]));
    t.push_back(std::log(nat[1]));
    if (constraint == TailConstraint::None) {
      t.push_back(std::log(nat[2]));
    } else if (constraint == TailConstraint::UpperBound) {
      const double frac = clamp(nat[2] / alpha_bound, 1e-4, 1.0 - 1e-4);
      t.push_back(logit(frac));
    }
    t.push_back(std::log(nat[3]));
    return t;
  }

  std::vector<double> to_natural(const std::vector<double>& t) const {
    std::vector<double> nat(4);
    nat[0] = family == Family::WDLNP ? t[0] : std::exp(t[0]);
    nat[1] = std::exp(t[1]);
    if (constraint == TailConstraint::None) {
      nat[2] = std::exp(t[2]);
      nat[3] = std::exp(t[3]);
    } else if (constraint == TailConstraint::UpperBound) {
      nat[2] = alpha_bound * sigmoid(t[2]);
      nat[3] = std::exp(t[3]);
    } else {
      nat[2] = alpha_bound;
      nat[3] = std::exp(t[2]);
    }
    return nat;
  }
};

// Hill-style tail-index estimate from counts above the threshold.
double hill_alpha(const CountSample& s, double threshold) {
  double sum = 0.0;
  std::int64_t k = 0;
  for (const auto& [v, m] : s.histogram()) {
    if (static_cast<double>(v) <= threshold) continue;
    sum += static_cast<double>(m) * std::log(static_cast<double>(v) / threshold);
    k += m;
  }
  if (k < 5 || !(sum > 0.0)) return 1.5;
  return clamp(static_cast<double>(k) / sum, 0.3, 20.0);
}

// Method-of-moments starting values for the head from counts <= theta0.
void head_start(Family family, const CountSample& s, double theta0, double& h1,
                double& h2) {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t k = 0;
  for (const auto& [v, m] : s.histogram()) {
    const double y = static_cast<double>(v);
    if (y > theta0) continue;
    const double z = family == Family::WDLNP ? std::log(y + 1.0) : y;
    sum += static_cast<double>(m) * z;
    sumsq += static_cast<double>(m) * z * z;
    k += m;
  }
  if (family == Family::WDLNP) {
    if (k < 2) {
      h1 = 0.5 * std::log(theta0 + 1.0);
      h2 = 1.0;
      return;
    }
    const double mean = sum / static_cast<double>(k);
    const double var = sumsq / static_cast<double>(k) - mean * mean;
    h1 = mean;
    h2 = clamp(var > 0.0 ? std::sqrt(var) : 0.1, 0.1, 10.0);
  } else {
    h1 = 1.0;  // shape
    h2 = k > 0 ? clamp(sum / static_cast<double>(k), 0.3, 1e6)
               : std::max(theta0 / 2.0, 0.5);
  }
}

struct RunOutcome {
  NelderMeadResult nm;
  bool feasible = false;
};

FitResult finalize_composite(Family family, const CompositeTransform& tf,
                             const NelderMeadResult& final_run, int runs) {
  FitResult out;
  out.spec = model_spec(family);
  out.params = tf.to_natural(final_run.x);
  out.loglik = -final_run.fmin;
  out.aic = aic(out.loglik, out.spec.k);
  out.converged = final_run.converged;
  out.n_restarts_used = runs;
  return out;
}

}  // namespace

FitResult fit_composite(Family family, const CountSample& sample,
                        const FitConfig& config,
                        const CompositeFitOptions& options) {
  if (!is_composite_family(family))
    throw std::invalid_argument("fit_composite: not a composite family");
  if (sample.max() == 0)
    throw DegenerateDataError("fit_composite: all-zero sample has no tail");
  if (sample.n() < 5)
    throw DegenerateDataError("fit_composite: need at least 5 observations");
  if (options.constraint != TailConstraint::None && !(options.alpha_bound > 0.0))
    throw std::invalid_argument("fit_composite: constraint needs a positive bound");

  const CompositeTransform tf{family, options.constraint, options.alpha_bound};

  const auto objective = [&](const std::vector<double>& t) -> double {
    try {
      const auto nat = tf.to_natural(t);
      return -loglik_composite(composite_from_params(family, nat), sample);
    } catch (const std::exception&) {
      return kInf;  // degenerate head / invalid parameter region
    }
  };

  // Splice-point starts at sample quantiles, deduplicated.
  static constexpr double kThetaQuantiles[] = {0.5, 0.7, 0.8, 0.9, 0.95};
  std::vector<double> theta_starts;
  const int want = std::min<int>(config.restarts, 5);
  for (int i = 0; i < want; ++i) {
    const double th =
        std::max(0.5, static_cast<double>(sample.quantile(kThetaQuantiles[i])));
    if (std::find(theta_starts.begin(), theta_starts.end(), th) ==
        theta_starts.end())
      theta_starts.push_back(th);
  }

  NelderMeadOptions nm;
  nm.ftol = config.ftol;
  nm.xtol = config.xtol;
  nm.max_iters = config.max_iters;

  NelderMeadResult best;
  best.fmin = kInf;
  int runs = 0;
  for (const double theta0 : theta_starts) {
    double h1 = 0.0, h2 = 1.0;
    head_start(family, sample, theta0, h1, h2);
    double alpha0 = hill_alpha(sample, theta0);
    if (options.constraint == TailConstraint::UpperBound)
      alpha0 = std::min(alpha0, 0.95 * options.alpha_bound);
    const auto t0 = tf.to_unconstrained({h1, h2, alpha0, theta0});

    const NelderMeadResult r = nelder_mead(objective, t0, nm);
    ++runs;
    if (r.fmin < best.fmin || runs == 1) best = r;
  }

  if (!std::isfinite(best.fmin))
    throw DegenerateDataError("fit_composite: no feasible starting point");

  // Polish from the winner with a tight simplex; doubles as the
  // local-optimality witness (restarting here must not improve).
  NelderMeadOptions polish_opts = nm;
  polish_opts.initial_step = 0.01;
  const NelderMeadResult polished = nelder_mead(objective, best.x, polish_opts);
  ++runs;
  const NelderMeadResult& final_run = polished.fmin <= best.fmin ? polished : best;

  return finalize_composite(family, tf, final_run, runs);
}

// ---------------------------------------------------------------------------
// Baseline fitting

namespace {

FitResult run_baseline_optimizer(
    Family family, const CountSample& sample, const FitConfig& config,
    const std::vector<double>& t0,
    const std::function<std::vector<double>(const std::vector<double>&)>& to_nat) {
  const auto objective = [&](const std::vector<double>& t) -> double {
    return -loglik_baseline(family, to_nat(t), sample);
  };

  NelderMeadOptions nm;
  nm.ftol = config.ftol;
  nm.xtol = config.xtol;
  nm.max_iters = config.max_iters;
  const NelderMeadResult first = nelder_mead(objective, t0, nm);

  NelderMeadOptions polish_opts = nm;
  polish_opts.initial_step = 0.01;
  const NelderMeadResult polished = nelder_mead(objective, first.x, polish_opts);
  const NelderMeadResult& final_run =
      polished.fmin <= first.fmin ? polished : first;

  FitResult out;
  out.spec = model_spec(family);
  out.params = to_nat(final_run.x);
  out.loglik = -final_run.fmin;
  out.aic = aic(out.loglik, out.spec.k);
  out.converged = final_run.converged;
  out.n_restarts_used = 2;
  return out;
}

}  // namespace

FitResult fit_baseline(Family family, const CountSample& sample,
                       const FitConfig& config) {
  if (is_composite_family(family))
    throw std::invalid_argument("fit_baseline: not a baseline family");
  if (sample.max() == 0)
    throw DegenerateDataError("fit_baseline: all-zero sample is degenerate");

  const double mean = sample.mean();
  const double var = sample.variance();
  const double zero_frac =
      static_cast<double>(sample.zero_count()) / static_cast<double>(sample.n());

  switch (family) {
    case Family::Poisson: {
      FitResult out;
      out.spec = model_spec(family);
      out.params = {mean};
      out.loglik = poisson_loglik(mean, sample);
      out.aic = aic(out.loglik, out.spec.k);
      out.converged = true;
      out.n_restarts_used = 0;
      return out;
    }
    case Family::ZIP: {
      const double pi0 = clamp(zero_frac > 0.0 ? 0.5 * zero_frac : 0.01, 1e-3, 0.95);
      const double lambda0 = std::max(mean / (1.0 - pi0), 1e-3);
      const auto to_nat = [](const std::vector<double>& t) {
        return std::vector<double>{sigmoid(t[0]), std::exp(t[1])};
      };
      return run_baseline_optimizer(family, sample, config,
                                    {logit(pi0), std::log(lambda0)}, to_nat);
    }
    case Family::NB: {
      if (!(var > 0.0))
        throw DegenerateDataError("fit_baseline: zero variance, NB undefined");
      double r0, p0;
      if (var > mean) {
        r0 = clamp(mean * mean / (var - mean), 1e-3, 1e6);
        p0 = clamp(mean / var, 1e-6, 1.0 - 1e-6);
      } else {
        r0 = 100.0;
        p0 = clamp(r0 / (r0 + mean), 1e-6, 1.0 - 1e-6);
      }
      const auto to_nat = [](const std::vector<double>& t) {
        return std::vector<double>{std::exp(t[0]), sigmoid(t[1])};
      };
      return run_baseline_optimizer(family, sample, config,
                                    {std::log(r0), logit(p0)}, to_nat);
    }
    case Family::ZINB: {
      if (!(var > 0.0))
        throw DegenerateDataError("fit_baseline: zero variance, ZINB undefined");
      const double pi0 = clamp(zero_frac > 0.0 ? 0.5 * zero_frac : 0.01, 1e-3, 0.95);
      double r0, p0;
      if (var > mean) {
        r0 = clamp(mean * mean / (var - mean), 1e-3, 1e6);
        p0 = clamp(mean / var, 1e-6, 1.0 - 1e-6);
      } else {
        r0 = 100.0;
        p0 = clamp(r0 / (r0 + mean), 1e-6, 1.0 - 1e-6);
      }
      const auto to_nat = [](const std::vector<double>& t) {
        return std::vector<double>{sigmoid(t[0]), std::exp(t[1]), sigmoid(t[2])};
      };
      return run_baseline_optimizer(
          family, sample, config, {logit(pi0), std::log(r0), logit(p0)}, to_nat);
    }
    default:
      throw std::invalid_argument("fit_baseline: unhandled family");
  }
}

FitResult fit_model(Family family, const CountSample& sample,
                    const FitConfig& config) {
  return is_composite_family(family) ? fit_composite(family, sample, config)
                                     : fit_baseline(family, sample, config);
}

std::vector<ComparisonEntry> compare_models(const CountSample& sample,
                                            const std::vector<Family>& families,
                                            const FitConfig& config) {
  if (families.empty())
    throw std::invalid_argument("compare_models: no families given");

  std::vector<ComparisonEntry> entries;
  entries.reserve(families.size());
  for (const Family f : families) {
    ComparisonEntry e;
    e.spec = model_spec(f);
    try {
      e.result = fit_model(f, sample, config);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    entries.push_back(std::move(e));
  }

  const auto sort_aic = [](const ComparisonEntry& e) {
    const double v = e.result->aic;
    return std::isnan(v) ? kInf : v;
  };
  std::stable_sort(entries.begin(), entries.end(),
                   [&](const ComparisonEntry& a, const ComparisonEntry& b) {
                     const bool fa = a.result.has_value();
                     const bool fb = b.result.has_value();
                     if (fa != fb) return fa;  // successes first
                     if (!fa) return false;    // failures keep input order
                     const double aa = sort_aic(a), ab = sort_aic(b);
                     if (aa != ab) return aa < ab;
                     if (a.spec.k != b.spec.k) return a.spec.k < b.spec.k;
                     return static_cast<int>(a.spec.family) <
                            static_cast<int>(b.spec.family);
                   });
  if (!entries.empty() && entries.front().result.has_value())
    entries.front().best = true;
  return entries;
}

}  // namespace dcp
