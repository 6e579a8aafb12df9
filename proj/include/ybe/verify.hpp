#ifndef YBE_VERIFY_HPP
#define YBE_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "ybe/rmatrices.hpp"
#include "ybe/types.hpp"

namespace ybe {

// --------------------------------------------------------------------------
// Pointwise residuals
// --------------------------------------------------------------------------

// Braided equation on three legs:
//   R12(y,z) R23(x,z) R12(x,y) - R23(x,y) R12(x,z) R23(y,z),
// relative sup norm against the two products.
double ybe_residual_braided(const RMatrixModel& model, const SpectralPoint& x,
                            const SpectralPoint& y, const SpectralPoint& z);

// Multiplicative form: R12(u) R23(uv) R12(v) - R23(v) R12(uv) R23(u).
double ybe_residual_multiplicative(const std::function<Mat(cplx)>& braided,
                                   cplx u, cplx v);

// RLL form on legs (1,2)=auxiliary pair, 3=quantum:
//   R12(x,y) L13(x) L23(y) - L23(y) L13(x) R12(x,y),
// with L(w) = R(w, z0) when no independent L is supplied.
double ybe_residual_rll(const RMatrixModel& model, const SpectralPoint& x,
                        const SpectralPoint& y, const SpectralPoint& z0);

struct UnitarityResult {
  cplx lambda;      // mean diagonal of R(x,y) R(y,x)
  double residual;  // || product - lambda I ||, relative
};

UnitarityResult unitarity_check(const RMatrixModel& model, const SpectralPoint& x,
                                const SpectralPoint& y);

double regularity_check(const RMatrixModel& model, const SpectralPoint& x);

// Commutator of two one-row transfer matrices t(x | y,...,y) at chain length
// sites; t = Tr_0 R_01 ... R_0L on the auxiliary leg 0.
double transfer_commutation(const RMatrixModel& model, const SpectralPoint& x1,
                            const SpectralPoint& x2, const SpectralPoint& y,
                            int sites);

Mat transfer_matrix(const RMatrixModel& model, const SpectralPoint& x,
                    const SpectralPoint& y, int sites);

// Defect of dx- vs dy-extracted Hamiltonians: || Hx + Hy - mu I || with mu
// the mean diagonal (exact regularity forces Hx + Hy onto the identity line).
double derivative_slot_consistency(const RMatrixModel& model,
                                   const SpectralPoint& base, double step = 1e-4);

// --------------------------------------------------------------------------
// Seeded check runner
// --------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  int sample_count = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_point;  // printable description of the worst sample
};

struct VerificationReport {
  std::string model;
  uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct VerifyOptions {
  int samples = 50;
  uint64_t seed = 1;
  int transfer_sites = 3;
  int transfer_samples = 2;
  double tol_structural = 1e-12;  // regularity
  double tol_algebraic = 1e-10;   // YBE, unitarity, commutation
  double tol_derivative = 1e-8;   // finite-difference based
};

VerificationReport verify_model(const RMatrixModel& model, const VerifyOptions& opt);

std::string describe(const SpectralPoint& p);

}  // namespace ybe

#endif
