#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcp/composite.hpp"
#include "dcp/count_sample.hpp"

namespace dcp {

enum class Family { WDLNP, WDWP, Poisson, ZIP, NB, ZINB };

inline constexpr Family kAllFamilies[] = {Family::WDLNP, Family::WDWP,
                                          Family::Poisson, Family::ZIP,
                                          Family::NB, Family::ZINB};

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);
bool is_composite_family(Family f);
int family_param_count(Family f);  // 4, 4, 1, 2, 2, 3
std::vector<std::string> family_param_names(Family f);

struct ModelSpec {
  Family family;
  int k;  // free-parameter count, matches family
};

ModelSpec model_spec(Family f);

struct FitConfig {
  double ftol = 1e-10;
  double xtol = 1e-8;
  int max_iters = 5000;
  int restarts = 5;
  std::uint64_t seed = 0;

  // Parses `key=value` lines ('#' starts a comment; blank lines ignored).
  // Keys: ftol, xtol, max_iters, restarts, seed. Unknown keys are errors.
  static FitConfig from_kv_text(const std::string& text);
  static FitConfig from_file(const std::string& path);
};

// Parameter vector layouts:
//   WDLNP  {mu, sigma, alpha, theta}
//   WDWP   {shape, scale, alpha, theta}
//   Poisson{lambda}   ZIP {pi, lambda}   NB {r, p}   ZINB {pi, r, p}
struct FitResult {
  ModelSpec spec;
  std::vector<double> params;
  double loglik = 0.0;
  double aic = 0.0;
  bool converged = false;
  int n_restarts_used = 0;
};

class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sum of log pmf over the sample; -inf when any observation has zero
// probability, or when more than 1% of observations underflow the
// log-probability floor of -745.
double loglik_composite(const CompositeParams& params, const CountSample& sample);
double loglik_baseline(Family family, const std::vector<double>& params,
                       const CountSample& sample);

double aic(double loglik, int k);

// Optional tail-index constraint used by the inference module.
enum class TailConstraint { None, Pinned, UpperBound };

struct CompositeFitOptions {
  TailConstraint constraint = TailConstraint::None;
  double alpha_bound = 0.0;  // pin value / upper bound when constrained
};

FitResult fit_composite(Family family, const CountSample& sample,
                        const FitConfig& config,
                        const CompositeFitOptions& options = {});
FitResult fit_baseline(Family family, const CountSample& sample,
                       const FitConfig& config);
FitResult fit_model(Family family, const CountSample& sample,
                    const FitConfig& config);

// Rebuilds the distribution object from a composite-family parameter vector.
CompositeParams composite_from_params(Family family,
                                      const std::vector<double>& params);

struct ComparisonEntry {
  ModelSpec spec;
  std::optional<FitResult> result;  // empty when the fit failed
  std::string error;                // failure description when empty
  bool best = false;                // lowest AIC among the successes
};

// Fits every family, sorts by ascending AIC (ties: smaller k, then family
// order). Per-family failures become trailing entries instead of aborting.
std::vector<ComparisonEntry> compare_models(const CountSample& sample,
                                            const std::vector<Family>& families,
                                            const FitConfig& config);

}  // namespace dcp
