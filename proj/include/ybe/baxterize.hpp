#ifndef YBE_BAXTERIZE_HPP
#define YBE_BAXTERIZE_HPP

#include <map>
#include <string>

#include "ybe/types.hpp"

namespace ybe {

// Braid defect of a two-site operator on three legs:
// T12 T23 T12 - T23 T12 T23, relative sup norm.
double braid_relation_residual(const Mat& t);

struct AlgebraFit {
  enum class Family { Hecke, TL, BMW };
  Family family = Family::Hecke;
  // Affine normalization T = alpha_scale * H + beta_shift * I.
  cplx alpha_scale = 1.0;
  cplx beta_shift = 0.0;
  cplx xi{};  // Hecke / BMW constant: T - T^-1 = xi (on the Hecke part)
  cplx a{};   // TL / BMW constant
  Mat op;       // T (Hecke, BMW) or the TL generator t = T + 1
  Mat op_inv;   // T^-1 where meaningful
  Mat z_op;     // BMW: Z = T - T^-1 - xi
  std::map<std::string, double> relation_residuals;
  bool ok = false;
  std::string message;
};

// Affine Hecke fit: finds T = alpha H + beta with T - T^-1 = xi I and the
// braid relation, if the minimal polynomial of H has degree <= 2.
AlgebraFit hecke_fit(const Mat& h, double tol = 1e-10);

// R(z) = z T - z^-1 T^-1, multiplicative spectral parameter.
Mat hecke_baxterize(const AlgebraFit& fit, cplx z);

// Temperley-Lieb fit: t = c (H - lambda0 I) with t^2 = 2a t and the embedded
// triple relations.
AlgebraFit tl_fit(const Mat& h, double tol = 1e-10);

// R(z) = t - a + (z+1)/(z-1) sqrt(a^2-1); |z-1| < 1e-3 is rejected.
Mat tl_baxterize(const AlgebraFit& fit, cplx z);

// Birman-Murakami-Wenzl fit: T = alpha H + beta with eigenvalues (q, -1/q,
// -a), Z = T - T^-1 - xi supported on the third eigenspace, and the
// displayed neighbor relations Z2 T1^{+-1} Z2 = xi a^{-+1} Z2.
AlgebraFit bmw_fit(const Mat& h, double tol = 1e-10);

// R^(sign)(z) = T + a_s z^2/(1 - a_s z^2) Z + z (q - 1/q)/(z - 1/z) I with
// a_s = -sign * a q^sign.
Mat bmw_baxterize(const AlgebraFit& fit, cplx z, int sign);

// Minimal polynomial degree by eigenvalue clustering (gap 1e-7).
int minimal_polynomial_degree(const Mat& h, double gap = 1e-7);

}  // namespace ybe

#endif
