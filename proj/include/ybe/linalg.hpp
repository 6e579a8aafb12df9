#ifndef YBE_LINALG_HPP
#define YBE_LINALG_HPP

#include <vector>

#include "ybe/types.hpp"

namespace ybe {

// Eigenvalues of a dense complex matrix (Schur-based).
Vec eigenvalues(const Mat& m);

struct SectorEig {
  Vec values;      // eigenvalues of the restricted block, with multiplicity
  double leakage;  // sup norm of the couplings out of the sector
};

// Eigenvalues of the block of m spanned by the given basis indices.
// Couplings between the block and its complement are reported as leakage;
// callers decide whether that makes the result meaningful.
SectorEig eig_in_subspace(const Mat& m, const std::vector<int>& indices);

// Eigenvalues of the S^z = sector block of a chain operator on 3^sites.
SectorEig eig_sym_sector(const Mat& m, int sites, int sector);

struct LinearSolve {
  Vec x;
  double residual;  // ||Ax - b|| / ||b||
  double rcond;     // reciprocal condition estimate (smallest/largest sv)
  bool ok;
};

LinearSolve solve_linear(const Mat& a, const Vec& b);

struct InverseResult {
  Mat inv;
  double rcond;
  bool ok;
};

InverseResult inverse(const Mat& a);

// Roots of c[0] + c[1] z + ... + c[n] z^n via the companion matrix of the
// monic reduction, Newton-polished. Leading coefficients below drop_tol
// (relative to the largest) are dropped.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs,
                             double drop_tol = 1e-13);

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);

// Characteristic polynomial coefficients (ascending, monic leading term) by
// the Faddeev-LeVerrier recurrence. Test oracle grade: fine up to dim ~ 30.
std::vector<cplx> charpoly(const Mat& m);

// Groups eigenvalues into clusters of radius gap; returns one representative
// (cluster mean) per cluster, with multiplicities.
struct EigenCluster {
  cplx value;
  int multiplicity;
};
std::vector<EigenCluster> cluster_eigenvalues(const Vec& values, double gap);

}  // namespace ybe

#endif
