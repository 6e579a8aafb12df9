#ifndef YBE_RECONSTRUCT_HPP
#define YBE_RECONSTRUCT_HPP

#include <string>
#include <vector>

#include "ybe/hamiltonians.hpp"
#include "ybe/types.hpp"

namespace ybe {

// --------------------------------------------------------------------------
// Univariate (multiplicative) series
// --------------------------------------------------------------------------

// Taylor data of a multiplicative braided R-matrix around u = 1:
//   R(u) = sum_k coeffs[k] (u-1)^k,  coeffs[0] = I,  coeffs[1] = H.
// The diagonal entry (norm_index, norm_index) of every coefficient k >= 1 is
// pinned to zero; norm_shift records the identity shift absorbed to make
// that possible at k = 1.
struct UniSeries {
  std::vector<Mat> coeffs;
  int norm_index = 0;
  cplx norm_shift = 0.0;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// One solve of X12 - X23 = Q with the pinned normalization. The residual is
// the worst disagreement between redundant entry determinations plus the sup
// norm of the full 27-dim equation after substitution, both relative to scale.
struct SandwichSolution {
  Mat x;
  double residual;
};
SandwichSolution solve_sandwich(const Mat& q, int norm_index, double scale);

// Right-hand side Q^(k) of the order-(k+1) recursion, built from coefficients
// 0..k (coeffs[1] plays the role of H).
Mat idzumi_rhs(const std::vector<Mat>& coeffs, int k);

struct IdzumiStep {
  Mat next;
  double consistency_residual;
};
IdzumiStep idzumi_step(const UniSeries& series);

// Normalization index rule: 0 unless H annihilates |00>, then 2, then 1.
int pick_norm_index(const Mat& h);

struct UniReconstruction {
  UniSeries series;
  std::vector<double> residual_by_order;  // index k: residual of step to k+1
  int order_failed = -1;                  // first order whose residual > tol
  bool ok = false;
};

// Iterates the recursion to the requested order on apply_twist_H(h, twist).
UniReconstruction reconstruct_univariate(const Mat& h, int order,
                                         const TwistSpec& twist = {},
                                         double tol = 1e-6);

struct SeriesValue {
  Mat value;
  double tail_estimate;
  bool converged;
};
SeriesValue series_eval(const UniSeries& series, cplx u);

// 9x9 positions that can be nonzero in any multiplicative series built from
// h: the ice pattern minus every slot killed by the zero-propagation rules.
Eigen::Matrix<bool, 9, 9> sparsity_mask(const Mat& h, double tol = 1e-13);

// --------------------------------------------------------------------------
// Obstruction certification
// --------------------------------------------------------------------------

struct NoGoOptions {
  int order = 6;
  int search_order = 4;  // optimizer objective order; an obstruction here is
                         // an obstruction at any higher order
  int starts = 27;
  uint64_t seed = 1;
  double obstruction_tol = 1e-6;
  int max_evals = 300;
  int threads = 0;
  bool polish = true;  // Gauss-Newton after Nelder-Mead in the ambiguous band
};

struct ObstructionReport {
  std::string model;
  int order = 0;
  int search_order = 0;  // the cheaper truncation the multistart swept
  uint64_t seed = 0;
  std::string search_note;
  std::vector<double> residual_by_order;  // at the optimal twist
  int order_failed = -1;
  TwistSpec twist_at_optimum;
  double optimum = 0.0;
  std::vector<double> start_values;
  bool obstructed = false;
  std::string verdict;
};

// Minimizes the recursion inconsistency over S^z shift, diagonal telescope
// (two free entries) and grading, from a seeded multistart grid. The identity
// shift is exactly absorbed by the series normalization and is not searched.
ObstructionReport certify_no_go(const Mat& h, const NoGoOptions& opt);

// --------------------------------------------------------------------------
// Bivariate series
// --------------------------------------------------------------------------

struct BiSeries {
  // table[m][n] = R^(m,n); row 0 / column 0 hold the boundary data.
  std::vector<std::vector<Mat>> table;
  int order = 0;
  const Mat& at(int m, int n) const { return table[m][n]; }
};

struct BiReconstruction {
  BiSeries series;
  std::vector<double> residual_by_order;  // total order s = 2..N
  int order_failed = -1;
  bool ok = false;
};

// Fills R^(m,n) for m, n >= 1 from the boundary slice R(x,0) given as Taylor
// coefficients boundary[0..N] (boundary[0] = I). R(0,x) is the series inverse
// of the boundary, so the identity R(x,0) R(0,x) = I holds by construction;
// the diagonal sum identity sum_i R^(i,n-i) = 0 fixes the identity component
// at each total order and its traceless defect is the reported residual.
BiReconstruction reconstruct_bivariate(const std::vector<Mat>& boundary, int order,
                                       double tol = 1e-6);

// Finite-order bivariate feasibility probe for a Hamiltonian alone: boundary
// coefficients beyond H are unknowns, chosen order by order with affine least
// squares; the reported residual per total order is what no admissible choice
// of the new unknowns could remove. Evidence is restricted to the given
// truncation order and the S^z-shift family searched by the caller.
struct BivariateProbe {
  std::vector<double> residual_by_order;
  int order_failed = -1;
  bool obstructed = false;
};
BivariateProbe bivariate_probe(const Mat& h, int order, cplx sz_shift = 0.0,
                               double tol = 1e-6);

}  // namespace ybe

#endif
