#include "dcp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const std::function<double(const std::vector<double>&)>& f,
               const std::vector<double>& x) {
  const double v = f(x);
  return std::isnan(v) ? kInf : v;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opts) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<std::vector<double>> verts(dim + 1, x0);
  for (std::size_t j = 0; j < dim; ++j)
    verts[j + 1][j] += opts.initial_step * (1.0 + std::abs(x0[j]));

  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = guarded(f, verts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto sort_order = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };
  sort_order();

  NelderMeadResult res;
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const std::size_t best = order[0];
    const std::size_t worst = order[dim];
    const std::size_t second_worst = order[dim - 1];

    // Convergence: function spread and simplex extent both small.
    bool f_ok = fv[worst] - fv[best] <=
                opts.ftol * (std::abs(fv[best]) + opts.ftol);
    if (std::isinf(fv[worst]) || std::isinf(fv[best])) f_ok = false;
    bool x_ok = true;
    for (std::size_t i = 0; i <= dim && x_ok; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (std::abs(verts[i][j] - verts[best][j]) >
            opts.xtol * (1.0 + std::abs(verts[best][j]))) {
          x_ok = false;
          break;
        }
    if (f_ok && x_ok) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += verts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t j = 0; j < dim; ++j)
      trial[j] = centroid[j] + (centroid[j] - verts[worst][j]);
    const double fr = guarded(f, trial);

    if (fr < fv[best]) {
      for (std::size_t j = 0; j < dim; ++j)
        trial2[j] = centroid[j] + 2.0 * (centroid[j] - verts[worst][j]);
      const double fe = guarded(f, trial2);
      if (fe < fr) {
        verts[worst] = trial2;
        fv[worst] = fe;
      } else {
        verts[worst] = trial;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      verts[worst] = trial;
      fv[worst] = fr;
    } else {
      bool shrink = false;
      if (fr < fv[worst]) {
        // Outside contraction.
        for (std::size_t j = 0; j < dim; ++j)
          trial2[j] = centroid[j] + 0.5 * (centroid[j] - verts[worst][j]);
        const double fc = guarded(f, trial2);
        if (fc <= fr) {
          verts[worst] = trial2;
          fv[worst] = fc;
        } else {
          shrink = true;
        }
      } else {
        // Inside contraction.
        for (std::size_t j = 0; j < dim; ++j)
          trial2[j] = centroid[j] - 0.5 * (centroid[j] - verts[worst][j]);
        const double fc = guarded(f, trial2);
        if (fc < fv[worst]) {
          verts[worst] = trial2;
          fv[worst] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 1; i <= dim; ++i) {
          const std::size_t v = order[i];
          for (std::size_t j = 0; j < dim; ++j)
            verts[v][j] = verts[best][j] + 0.5 * (verts[v][j] - verts[best][j]);
          fv[v] = guarded(f, verts[v]);
        }
      }
    }
    sort_order();
  }

  res.x = verts[order[0]];
  res.fmin = fv[order[0]];
  res.iterations = iter;
  return res;
}

}  // namespace dcp
