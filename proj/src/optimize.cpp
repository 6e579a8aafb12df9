#include "ybe/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace ybe {

namespace {

struct SimplexPoint {
  std::vector<double> x;
  double f;
};

OptResult nelder_mead_once(const ObjectiveFn& f, const std::vector<double>& x0,
                           double step, int max_evals, double xtol, double ftol) {
  const int n = static_cast<int>(x0.size());
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : 1e300;
  };

  std::vector<SimplexPoint> simplex;
  simplex.push_back({x0, eval(x0)});
  for (int i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += step;
    simplex.push_back({x, eval(x)});
  }
  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.f < b.f; });
  };
  order();

  // Adaptive coefficients (Gao-Han).
  const double nd = static_cast<double>(n);
  const double alpha = 1.0, gamma = 1.0 + 2.0 / nd, rho = 0.75 - 0.5 / nd,
               sigma = 1.0 - 1.0 / nd;

  while (evals < max_evals) {
    order();
    double spread = 0.0;
    for (int i = 0; i < n; ++i)
      spread = std::max(spread, std::abs(simplex[n].x[i] - simplex[0].x[i]));
    if (spread < xtol && std::abs(simplex[n].f - simplex[0].f) < ftol) break;

    std::vector<double> centroid(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / nd;

    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = centroid[i] + t * (centroid[i] - simplex[n].x[i]);
      return x;
    };

    const std::vector<double> xr = blend(alpha);
    const double fr = eval(xr);
    if (fr < simplex[0].f) {
      const std::vector<double> xe = blend(gamma);
      const double fe = eval(xe);
      simplex[n] = fe < fr ? SimplexPoint{xe, fe} : SimplexPoint{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      simplex[n] = {xr, fr};
    } else {
      const std::vector<double> xc = blend(fr < simplex[n].f ? rho : -rho);
      const double fc = eval(xc);
      if (fc < std::min(fr, simplex[n].f)) {
        simplex[n] = {xc, fc};
      } else {
        for (int k = 1; k <= n; ++k) {
          for (int i = 0; i < n; ++i)
            simplex[k].x[i] = simplex[0].x[i] + sigma * (simplex[k].x[i] - simplex[0].x[i]);
          simplex[k].f = eval(simplex[k].x);
        }
      }
    }
  }
  order();
  return {simplex[0].x, simplex[0].f, evals};
}

}  // namespace

OptResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                      const NelderMeadOptions& opt) {
  OptResult best = nelder_mead_once(f, x0, opt.initial_step, opt.max_evals,
                                    opt.xtol, opt.ftol);
  double step = opt.initial_step;
  for (int r = 0; r < opt.restarts; ++r) {
    if (best.value <= 0.0) break;
    step *= 0.12;
    OptResult next = nelder_mead_once(f, best.x, step, opt.max_evals, opt.xtol,
                                      opt.ftol);
    next.evals += best.evals;
    if (next.value < best.value) best = next;
    else best.evals = next.evals;
  }
  return best;
}

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("YBE_FORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

MultistartResult multistart_minimize(const ObjectiveFn& f,
                                     const std::vector<std::vector<double>>& starts,
                                     const MultistartOptions& opt) {
  const int n = static_cast<int>(starts.size());
  std::vector<OptResult> results(n);
  std::atomic<int> next{0};
  std::atomic<bool> done{false};

  auto worker = [&] {
    while (!done.load()) {
      const int k = next.fetch_add(1);
      if (k >= n) break;
      results[k] = nelder_mead(f, starts[k], opt.local);
      if (opt.stop_below > 0.0 && results[k].value < opt.stop_below)
        done.store(true);
    }
  };

  const int threads = std::min(thread_budget(opt.threads), std::max(1, n));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  MultistartResult out;
  out.start_values.resize(n, std::numeric_limits<double>::infinity());
  for (int k = 0; k < n; ++k) {
    if (results[k].x.empty()) continue;  // start skipped by early stop
    out.start_values[k] = results[k].value;
    if (out.best_start < 0 || results[k].value < out.best.value) {
      out.best = results[k];
      out.best_start = k;
    }
  }
  return out;
}

}  // namespace ybe
