#ifndef YBE_RMATRICES_HPP
#define YBE_RMATRICES_HPP

#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ybe/hamiltonians.hpp"
#include "ybe/types.hpp"

namespace ybe {

// --------------------------------------------------------------------------
// Spectral parameters
// --------------------------------------------------------------------------

// Point (a, b) on one of the spectral curves.
struct CurvePoint {
  cplx a, b;
};

// Multiplicative models take a scalar; curve models take a curve point.
using SpectralPoint = std::variant<cplx, CurvePoint>;

cplx scalar_of(const SpectralPoint& p);
CurvePoint point_of(const SpectralPoint& p);

// --------------------------------------------------------------------------
// Spectral curves (main branch / special branch)
// --------------------------------------------------------------------------

struct CurveSpec {
  enum class Branch { MB, SB };
  Branch branch = Branch::SB;
  cplx alpha{}, beta{};  // MB constants
  cplx lambda4{};        // SB constant
  cplx j = cplx(0.5, 0.86602540378443864676);  // root of j^2 - j + 1 = 0
};

// Value of the defining polynomial at (a, b); zero on the curve.
cplx curve_polynomial(const CurvePoint& pt, const CurveSpec& spec);
double curve_residual(const CurvePoint& pt, const CurveSpec& spec);

struct CurveSamples {
  std::vector<CurvePoint> points;
  int dropped = 0;  // roots that failed to polish below tolerance
};

// All curve points over a fixed a: roots in b of the branch polynomial via
// its companion matrix, Newton-polished.
CurveSamples sample_curve(const CurveSpec& spec, cplx a, double tol = 1e-10);

// Nearby curve point reached by moving the better-conditioned coordinate by
// dt and re-solving the other one (Newton from the implicit-slope prediction).
CurvePoint curve_shift(const CurvePoint& pt, cplx dt, const CurveSpec& spec);

// --------------------------------------------------------------------------
// Closed-form R-matrices (unbraided form, R(x,x) = P)
// --------------------------------------------------------------------------

// Zamolodchikov-Fateev R-matrix, multiplicative parameter u, coupling k.
Mat zf_R(cplx u, cplx k);

// Izergin-Korepin R-matrix, multiplicative parameter u, coupling k.
Mat ik_R(cplx u, cplx k);

// 17-vertex R-matrix of the Hecke family, raw display normalization.
Mat v17_2_R(cplx z, cplx theta0);

// Special-branch R-matrix between two curve points.
Mat sb_R(const CurvePoint& x, const CurvePoint& y, cplx j);

// Braiding: \check R = P R; the map is an involution up to P^2 = I.
Mat braid(const Mat& r);
Mat unbraid(const Mat& r_check);

// --------------------------------------------------------------------------
// Model handles
// --------------------------------------------------------------------------

struct RMatrixModel {
  std::string name;
  enum class Arity { Multiplicative, Curve } arity = Arity::Multiplicative;

  // Braided evaluator \check R(x, y).
  std::function<Mat(const SpectralPoint&, const SpectralPoint&)> braided;
  // Draw an admissible spectral point.
  std::function<SpectralPoint(std::mt19937_64&)> sample;
  // Move a point by dt in the local spectral coordinate.
  std::function<SpectralPoint(const SpectralPoint&, cplx)> shift;
  // Regular base point.
  SpectralPoint base;

  Mat braided_at(const SpectralPoint& x, const SpectralPoint& y) const {
    return braided(x, y);
  }
};

RMatrixModel make_zf_model(cplx k);
RMatrixModel make_ik_model(cplx k);
// normalized: divide the braided matrix by its (00,00) entry so that
// \check R(x,x) = I; raw keeps the display normalization.
RMatrixModel make_v17_2_model(cplx theta0, bool normalized = true);
RMatrixModel make_sb_model(const CurveSpec& spec);

// Drinfeld-twisted copy of a multiplicative model:
//   \check R -> exp(shift (x-y)) F(x,y) \check R F(y,x)^{-1},
//   F(x,y) = (g(x)g) (e^{a s}(x)e^{-a s}) (e^{(x-1)A}(x)e^{(y-1)A}).
// The S^z shift has no such form and must be zero.
RMatrixModel apply_twist_R(const RMatrixModel& model, const TwistSpec& twist);

// --------------------------------------------------------------------------
// Hamiltonian extraction
// --------------------------------------------------------------------------

struct DerivativeResult {
  Mat h;
  double error_estimate;
};

// d/dx \check R(x, y) at x = y = base, central differences over steps h,
// h/2, h/4, h/8 with Richardson elimination of the even error orders.
DerivativeResult derivative_hamiltonian(const RMatrixModel& model,
                                        const SpectralPoint& base,
                                        double step = 4e-3);

DerivativeResult derivative_hamiltonian(const RMatrixModel& model,
                                        double step = 4e-3);

// d/dy counterpart (second slot), same scheme.
DerivativeResult derivative_hamiltonian_second(const RMatrixModel& model,
                                               const SpectralPoint& base,
                                               double step = 4e-3);

}  // namespace ybe

#endif
