#ifndef YBE_OPTIMIZE_HPP
#define YBE_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace ybe {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct NelderMeadOptions {
  int max_evals = 400;
  double initial_step = 0.4;
  double xtol = 1e-12;
  double ftol = 1e-14;
  int restarts = 2;  // re-seed the simplex at the incumbent this many times
};

struct OptResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

OptResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                      const NelderMeadOptions& opt);

struct MultistartOptions {
  NelderMeadOptions local;
  int threads = 0;          // 0: use YBE_FORGE_THREADS or hardware default
  double stop_below = 0.0;  // finish the sweep early once a start beats this
};

struct MultistartResult {
  OptResult best;
  int best_start = -1;
  std::vector<double> start_values;  // optimized value per start, start order
};

// Runs Nelder-Mead from every start; ties broken by start index.
MultistartResult multistart_minimize(const ObjectiveFn& f,
                                     const std::vector<std::vector<double>>& starts,
                                     const MultistartOptions& opt);

int thread_budget(int requested = 0);

}  // namespace ybe

#endif
