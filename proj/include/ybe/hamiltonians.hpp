#ifndef YBE_HAMILTONIANS_HPP
#define YBE_HAMILTONIANS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ybe/types.hpp"

namespace ybe {

// The 19 couplings of a U(1)-invariant two-site Hamiltonian on C^3 (x) C^3:
//   p  E01(x)E10 + q  E10(x)E01 + t1 E21(x)E01 + s1 E12(x)E10
// + t2 E01(x)E21 + s2 E10(x)E12 + t3 E12(x)E21 + s3 E21(x)E12
// + tp E02(x)E20 + sp E20(x)E02 + sum_ij v_ij Eii(x)Ejj.
struct HamiltonianParams {
  cplx p{}, q{}, t1{}, t2{}, t3{}, s1{}, s2{}, s3{}, tp{}, sp{};
  Mat3 v = Mat3::Zero();
};

Mat build_two_site(const HamiltonianParams& params);

// Inverse of build_two_site; rejects matrices with entries outside the
// 19-vertex pattern.
HamiltonianParams params_from_matrix(const Mat& h, double tol = 1e-12);

// Periodic (or open) chain sum of a two-site density, 2 <= sites <= 6.
Mat build_chain(const Mat& h2, int sites, bool periodic = true);

// Charge conjugation: relabel every site index j -> 2-j on rows and columns.
Mat charge_conjugate(const Mat& h);
HamiltonianParams charge_conjugate(const HamiltonianParams& params);

// --------------------------------------------------------------------------
// Named two-site Hamiltonians
// --------------------------------------------------------------------------

// Default root of j^2 - j + 1 = 0 used by the special-branch family, and the
// cube root of unity J = -1/j tied to it.
cplx default_j();
cplx default_gb_J();

// Generalized Bariev Hamiltonian in the (phi, psi, xi) normal form. The
// diagonal constant upsilon solves -4 xi upsilon = phi^2 - phi psi + psi^2;
// J is the cube root of unity -1/j. Requires phi != 0 and xi != 0.
Mat gb_hamiltonian(cplx phi, cplx psi, cplx xi);

// Same matrix with upsilon supplied directly (used for the xi -> 0 limit,
// where the defining relation no longer determines upsilon).
Mat gb_hamiltonian_fixed_upsilon(cplx phi, cplx psi, cplx xi, cplx upsilon,
                                 cplx J);

// Main-branch Hamiltonian at the special curve point, parameters (alpha,
// beta, J0); rho = 4/(alpha^2 - alpha beta + beta^2), eta = -sqrt(alpha beta
// - 1)/J0 (principal branch).
Mat mb0_hamiltonian(cplx alpha, cplx beta, cplx J0);
cplx mb0_rho(cplx alpha, cplx beta);
cplx mb0_eta(cplx alpha, cplx beta, cplx J0);

// 17-vertex Hamiltonian related to the special branch at its distinguished
// point, parameters (Lambda, J).
Mat h17(cplx Lambda, cplx J);

// 14-vertex Hamiltonian, one parameter xi fixing the diagonal couplings
// v02 = v20 = 1/2, v11 = 1, v12 = 3/2, v21 = xi - 3/2, v22 = xi.
Mat h14(cplx xi);

// --------------------------------------------------------------------------
// Equivalence transformations
// --------------------------------------------------------------------------

// Composition of the equivalence moves on a two-site Hamiltonian, applied in
// the fixed order gauge -> grading -> telescope -> identity shift -> S^z
// shift:
//   H -> (g(x)g) H (g^-1(x)g^-1)
//   H -> (e^{a s^z}(x)e^{-a s^z}) H (e^{-a s^z}(x)e^{a s^z})
//   H -> H + A(x)I - I(x)A            (A diagonal)
//   H -> H + shift * I
//   H -> H + beta * (s^z(x)I + I(x)s^z)
struct TwistSpec {
  std::optional<Mat3> gauge_g;
  cplx grading_alpha{};
  Vec3 telescope_a = Vec3::Zero();
  cplx identity_shift{};
  cplx sz_shift{};
};

Mat apply_twist_H(const Mat& h, const TwistSpec& twist);

// --------------------------------------------------------------------------
// Diagonal-gauge matching
// --------------------------------------------------------------------------

// Searches for a diagonal gauge g = diag(1, g1, g2), a grading exponent, an
// identity shift and an S^z shift carrying h1 onto h2. Least squares on the
// log-ratios of matching nonzero entries, then Gauss-Newton on the entries.
struct GaugeFit {
  bool ok = false;
  TwistSpec twist;
  double residual = 0.0;
  std::string message;
};

GaugeFit find_diagonal_gauge(const Mat& h1, const Mat& h2, double tol = 1e-9);

// S^z (x) I + I (x) S^z as a 9x9 diagonal.
Mat two_site_spin();

}  // namespace ybe

#endif
