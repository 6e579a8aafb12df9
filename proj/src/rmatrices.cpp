#include "ybe/rmatrices.hpp"

#include <cmath>

#include "ybe/linalg.hpp"
#include "ybe/tensor.hpp"

namespace ybe {

cplx scalar_of(const SpectralPoint& p) {
  if (!std::holds_alternative<cplx>(p))
    throw std::invalid_argument("expected a scalar spectral parameter");
  return std::get<cplx>(p);
}

CurvePoint point_of(const SpectralPoint& p) {
  if (!std::holds_alternative<CurvePoint>(p))
    throw std::invalid_argument("expected a curve point");
  return std::get<CurvePoint>(p);
}

// --------------------------------------------------------------------------
// Curves
// --------------------------------------------------------------------------

cplx curve_polynomial(const CurvePoint& pt, const CurveSpec& spec) {
  const cplx a = pt.a, b = pt.b;
  const cplx a2 = a * a, b2 = b * b;
  const cplx quartic = a2 * a2 + a2 * b2 + b2 * b2;
  if (spec.branch == CurveSpec::Branch::SB) {
    return (a2 + spec.j * b2) * (quartic + spec.lambda4 * a * b) + b2 - a2;
  }
  const cplx al = spec.alpha, be = spec.beta;
  const cplx ab = al * be;
  return (ab - 1.0) * quartic * quartic +
         (2.0 - ab + al * al + be * be) * (be * quartic + a * b) * a * b -
         (ab - 2.0) * a2 * a2 + be * be * a2 * b2 -
         (2.0 - ab + be * be) * b2 * b2 - 2.0 * be * a * b - 1.0;
}

double curve_residual(const CurvePoint& pt, const CurveSpec& spec) {
  return std::abs(curve_polynomial(pt, spec));
}

namespace {

// Coefficients of a univariate polynomial from samples on a circle (exact
// inverse DFT; f must be a polynomial of degree <= deg).
std::vector<cplx> poly_from_function(const std::function<cplx(cplx)>& f, int deg,
                                     double radius) {
  const int n = deg + 1;
  std::vector<cplx> vals(n);
  for (int m = 0; m < n; ++m) {
    const cplx z = std::polar(radius, 2.0 * pi * m / n);
    vals[m] = f(z);
  }
  std::vector<cplx> coeffs(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int m = 0; m < n; ++m)
      acc += vals[m] * std::polar(1.0, -2.0 * pi * k * m / n);
    coeffs[k] = acc / (static_cast<double>(n) * std::pow(radius, k));
  }
  return coeffs;
}

int curve_degree_in_b(const CurveSpec& spec) {
  return spec.branch == CurveSpec::Branch::SB ? 6 : 8;
}

// Partial derivatives of the curve polynomial (polynomial differentiation of
// the single-variable slices, no finite differences).
cplx curve_df_db(const CurvePoint& pt, const CurveSpec& spec) {
  auto slice = [&](cplx b) { return curve_polynomial({pt.a, b}, spec); };
  auto coeffs = poly_from_function(slice, curve_degree_in_b(spec),
                                   std::max(1.0, std::abs(pt.b)));
  cplx acc = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
    acc = acc * pt.b + static_cast<double>(k) * coeffs[k];
  return acc;
}

cplx curve_df_da(const CurvePoint& pt, const CurveSpec& spec) {
  auto slice = [&](cplx a) { return curve_polynomial({a, pt.b}, spec); };
  auto coeffs = poly_from_function(slice, 8, std::max(1.0, std::abs(pt.a)));
  cplx acc = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
    acc = acc * pt.a + static_cast<double>(k) * coeffs[k];
  return acc;
}

CurvePoint newton_polish(CurvePoint pt, const CurveSpec& spec, bool move_b) {
  for (int it = 0; it < 40; ++it) {
    const cplx f = curve_polynomial(pt, spec);
    if (std::abs(f) < 1e-15) break;
    const cplx df = move_b ? curve_df_db(pt, spec) : curve_df_da(pt, spec);
    if (std::abs(df) < 1e-300) break;
    if (move_b)
      pt.b -= f / df;
    else
      pt.a -= f / df;
  }
  return pt;
}

}  // namespace

CurveSamples sample_curve(const CurveSpec& spec, cplx a, double tol) {
  auto slice = [&](cplx b) { return curve_polynomial({a, b}, spec); };
  auto coeffs = poly_from_function(slice, curve_degree_in_b(spec), 1.0);
  CurveSamples out;
  std::vector<cplx> raw;
  try {
    raw = poly_roots(coeffs);
  } catch (const std::runtime_error&) {
    out.dropped = curve_degree_in_b(spec);  // caller treats this a as bad
    return out;
  }
  for (const cplx& b : raw) {
    CurvePoint pt = newton_polish({a, b}, spec, /*move_b=*/true);
    if (curve_residual(pt, spec) <= tol)
      out.points.push_back(pt);
    else
      out.dropped += 1;
  }
  return out;
}

CurvePoint curve_shift(const CurvePoint& pt, cplx dt, const CurveSpec& spec) {
  const cplx fa = curve_df_da(pt, spec);
  const cplx fb = curve_df_db(pt, spec);
  CurvePoint next = pt;
  if (std::abs(fb) >= std::abs(fa)) {
    // a is the local coordinate; predict b from the implicit slope.
    next.a += dt;
    next.b += (std::abs(fb) > 0 ? -fa / fb * dt : cplx(0.0));
    return newton_polish(next, spec, /*move_b=*/true);
  }
  next.b += dt;
  next.a += (std::abs(fa) > 0 ? -fb / fa * dt : cplx(0.0));
  return newton_polish(next, spec, /*move_b=*/false);
}

// --------------------------------------------------------------------------
// Closed-form entries
// --------------------------------------------------------------------------

namespace {

// Common 19-vertex shape: corners 1, two c-doublets, d-crosses, h-corners.
Mat nineteen_vertex(cplx b, cplx cm, cplx cp, cplx f, cplx dm, cplx dp, cplx hm,
                    cplx hp, cplx g) {
  Mat r = Mat::Zero(9, 9);
  r(0, 0) = 1.0;
  r(8, 8) = 1.0;
  r(1, 1) = b;
  r(3, 3) = b;
  r(5, 5) = b;
  r(7, 7) = b;
  r(1, 3) = cm;
  r(5, 7) = cm;
  r(3, 1) = cp;
  r(7, 5) = cp;
  r(2, 2) = f;
  r(6, 6) = f;
  r(2, 4) = dm;
  r(4, 6) = dm;
  r(4, 2) = dp;
  r(6, 4) = dp;
  r(2, 6) = hm;
  r(6, 2) = hp;
  r(4, 4) = g;
  return r;
}

}  // namespace

Mat zf_R(cplx u, cplx k) {
  const cplx k2 = k * k, k4 = k2 * k2, u2 = u * u;
  const cplx da = k4 * u2 - 1.0;
  const cplx db = k2 * u2 - 1.0;
  if (std::abs(da) < 1e-8 || std::abs(db) < 1e-8)
    throw PoleError("zf_R: spectral parameter too close to a pole");
  const cplx b = -(u2 - 1.0) * k2 / da;
  const cplx cm = (k4 - 1.0) / da;
  const cplx cp = u2 * (k4 - 1.0) / da;
  const cplx f = (u2 - k2) * (u2 - 1.0) * k2 / (da * db);
  const cplx dm = -k * (k4 - 1.0) * (u2 - 1.0) / (da * db);
  const cplx dp = -u2 * k * (k4 - 1.0) * (u2 - 1.0) / (da * db);
  const cplx hm = (k4 - 1.0) * (k2 - 1.0) / (da * db);
  const cplx hp = u2 * u2 * (k4 - 1.0) * (k2 - 1.0) / (da * db);
  const cplx g = (k4 * u2 * u2 +
                  u2 * (k2 + 1.0) * (k2 + k - 1.0) * (k2 - k - 1.0) + k2) /
                 (da * db);
  return nineteen_vertex(b, cm, cp, f, dm, dp, hm, hp, g);
}

Mat ik_R(cplx u, cplx k) {
  const cplx k2 = k * k, k3 = k2 * k;
  const cplx da = u + k3;
  const cplx db = u - k2;
  if (std::abs(da) < 1e-8 || std::abs(db) < 1e-8)
    throw PoleError("ik_R: spectral parameter too close to a pole");
  const cplx b = k * (u - 1.0) / db;
  const cplx d = std::sqrt(k) * (1.0 - k2) * (u - 1.0) / (da * db);
  const cplx dm = k2 * d;
  const cplx dp = -u * d;
  const cplx cm = (1.0 - k2) / db;
  const cplx cp = u * cm;
  const cplx f = k2 * (u + k) * (u - 1.0) / (da * db);
  const cplx g = (k * da * (u - 1.0) + u * (k3 + 1.0) * (1.0 - k2)) / (da * db);
  const cplx hm = (u + k3 + k2 * (u - 1.0)) * (1.0 - k2) / (da * db);
  // The u prefactor is forced by unitarity against the other entries (the
  // printed table omits it); h+(1) = 1 is unchanged.
  const cplx hp = u * (u + k3 - k * (u - 1.0)) * (1.0 - k2) / (da * db);
  return nineteen_vertex(b, cm, cp, f, dm, dp, hm, hp, g);
}

Mat v17_2_R(cplx z, cplx theta0) {
  if (std::abs(z) < 1e-8) throw PoleError("v17_2_R: z too close to 0");
  const cplx zi = 1.0 / z;
  const cplx corner = z - theta0 * zi;
  const cplx diag = (z - zi) * theta0;
  const cplx up = (1.0 - theta0) * zi;
  const cplx down = z * (1.0 - theta0);
  const cplx w = z - zi;
  Mat r = Mat::Zero(9, 9);
  r(0, 0) = corner;
  r(4, 4) = corner;
  r(8, 8) = corner;
  r(1, 1) = diag;
  r(1, 3) = up;
  r(2, 2) = diag;
  r(2, 4) = zi - z;
  r(2, 6) = up;
  r(3, 1) = down;
  r(3, 3) = w;
  r(5, 5) = diag;
  r(5, 7) = up;
  r(6, 2) = down;
  r(6, 4) = w;
  r(6, 6) = w;
  r(7, 5) = down;
  r(7, 7) = w;
  return r;
}

Mat sb_R(const CurvePoint& x, const CurvePoint& y, cplx j) {
  const cplx ax = x.a, bx = x.b, ay = y.a, by = y.b;
  const cplx sx = ax * ax + j * bx * bx;
  const cplx sy = ay * ay + j * by * by;
  if (std::abs(sx) < 1e-10 || std::abs(sy) < 1e-10)
    throw PoleError("sb_R: a^2 + j b^2 too close to 0");
  const cplx d_den = j * ax * ay + bx * by * sx * sy;
  if (std::abs(d_den) < 1e-10)
    throw PoleError("sb_R: denominator of the d entry too close to 0");

  const cplx ra = ax * ay / sy + j * bx * by / sx;
  const cplx rb = bx * ay / sy - ax * by / sx;
  const cplx rbb = j * bx * ay / sx - j * ax * by / sy;
  const cplx rd = j * (bx * ay * sy - ax * by * sx) / d_den;
  const cplx rf = rd * (bx * ay * sx * sy - j * j * ax * by) / (sx * sy);
  const cplx rdb = j * rd;
  // The quotient -r_d(x,y) (r_f + r_a)(y,x) / r_d(y,x) collapses: the d
  // numerator is antisymmetric and its denominator symmetric.
  const cplx ra_yx = ay * ax / sx + j * by * bx / sy;
  const cplx rd_yx_num_scaled = (by * ax * sx - ay * bx * sy);
  const cplx rf_yx = j * rd_yx_num_scaled / d_den * (by * ax * sy * sx - j * j * ay * bx) / (sy * sx);
  const cplx rg = ra_yx + rf_yx;
  const cplx rh = ra + rf / j;
  const cplx rhb = ra + j * rf;

  Mat r = Mat::Zero(9, 9);
  r(0, 0) = ra;
  r(8, 8) = ra;
  r(1, 1) = rb;
  r(7, 7) = rb;
  r(3, 3) = rbb;
  r(5, 5) = rbb;
  r(2, 2) = rf;
  r(6, 6) = rf;
  r(4, 4) = rg;
  r(1, 3) = 1.0;
  r(3, 1) = 1.0;
  r(5, 7) = 1.0;
  r(7, 5) = 1.0;
  r(2, 6) = rh;
  r(6, 2) = rhb;
  r(2, 4) = rd;
  r(4, 6) = rd;
  r(4, 2) = rdb;
  r(6, 4) = rdb;
  return r;
}

Mat braid(const Mat& r) {
  if (r.rows() != 9 || r.cols() != 9) throw DimensionError("braid: operator must be 9x9");
  return permutation_operator() * r;
}

Mat unbraid(const Mat& r_check) { return braid(r_check); }

// --------------------------------------------------------------------------
// Model handles
// --------------------------------------------------------------------------

namespace {

// Admissible multiplicative arguments live in an annulus away from poles.
cplx sample_annulus(std::mt19937_64& rng, double rmin = 0.5, double rmax = 2.0) {
  std::uniform_real_distribution<double> ur(rmin, rmax);
  std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
  return std::polar(ur(rng), ua(rng));
}

RMatrixModel make_multiplicative(std::string name,
                                 std::function<Mat(cplx)> braided_of_u,
                                 std::function<bool(cplx)> admissible) {
  RMatrixModel m;
  m.name = std::move(name);
  m.arity = RMatrixModel::Arity::Multiplicative;
  m.base = cplx(1.0);
  m.braided = [braided_of_u](const SpectralPoint& x, const SpectralPoint& y) {
    return braided_of_u(scalar_of(x) / scalar_of(y));
  };
  m.sample = [admissible](std::mt19937_64& rng) -> SpectralPoint {
    for (int tries = 0; tries < 1000; ++tries) {
      const cplx u = sample_annulus(rng);
      // The evaluator sees ratios; demand the point and its inverse are safe.
      if (admissible(u) && admissible(1.0 / u)) return u;
    }
    throw PoleError("sample: no admissible point found");
  };
  m.shift = [](const SpectralPoint& p, cplx dt) -> SpectralPoint {
    return scalar_of(p) + dt;
  };
  return m;
}

}  // namespace

RMatrixModel make_zf_model(cplx k) {
  auto admissible = [k](cplx u) {
    const cplx k2 = k * k, k4 = k2 * k2, u2 = u * u;
    return std::abs(k4 * u2 - 1.0) > 1e-3 && std::abs(k2 * u2 - 1.0) > 1e-3;
  };
  return make_multiplicative("zf", [k](cplx u) { return braid(zf_R(u, k)); },
                             admissible);
}

RMatrixModel make_ik_model(cplx k) {
  auto admissible = [k](cplx u) {
    const cplx k2 = k * k, k3 = k2 * k;
    return std::abs(u + k3) > 1e-3 && std::abs(u - k2) > 1e-3;
  };
  return make_multiplicative("ik", [k](cplx u) { return braid(ik_R(u, k)); },
                             admissible);
}

RMatrixModel make_v17_2_model(cplx theta0, bool normalized) {
  if (normalized && std::abs(theta0 - 1.0) < 1e-8)
    throw PoleError("v17_2: theta0 = 1 degenerates the normalized form");
  auto admissible = [theta0, normalized](cplx u) {
    if (std::abs(u) < 1e-3) return false;
    if (!normalized) return true;
    return std::abs(u - theta0 / u) > 1e-3;
  };
  auto eval = [theta0, normalized](cplx u) {
    Mat rc = braid(v17_2_R(u, theta0));
    if (!normalized) return rc;
    const cplx pin = rc(0, 0);
    if (std::abs(pin) < 1e-10)
      throw PoleError("v17_2 normalized: (00,00) entry vanishes");
    return Mat(rc / pin);
  };
  return make_multiplicative(normalized ? "v17_2" : "v17_2-raw", eval, admissible);
}

RMatrixModel make_sb_model(const CurveSpec& spec) {
  RMatrixModel m;
  m.name = "sb";
  m.arity = RMatrixModel::Arity::Curve;
  m.base = CurvePoint{1.0, 0.0};
  const cplx j = spec.j;
  m.braided = [j](const SpectralPoint& x, const SpectralPoint& y) {
    return braid(sb_R(point_of(x), point_of(y), j));
  };
  m.sample = [spec](std::mt19937_64& rng) -> SpectralPoint {
    for (int tries = 0; tries < 1000; ++tries) {
      const cplx a = sample_annulus(rng);
      CurveSamples roots = sample_curve(spec, a);
      if (roots.points.empty()) continue;
      std::uniform_int_distribution<size_t> pick(0, roots.points.size() - 1);
      const CurvePoint pt = roots.points[pick(rng)];
      const cplx s = pt.a * pt.a + spec.j * pt.b * pt.b;
      if (std::abs(s) < 1e-4) continue;
      if (std::abs(pt.a) > 4.0 || std::abs(pt.b) > 4.0) continue;
      return pt;
    }
    throw PoleError("sample: no admissible curve point found");
  };
  m.shift = [spec](const SpectralPoint& p, cplx dt) -> SpectralPoint {
    return curve_shift(point_of(p), dt, spec);
  };
  return m;
}

RMatrixModel apply_twist_R(const RMatrixModel& model, const TwistSpec& twist) {
  if (model.arity != RMatrixModel::Arity::Multiplicative)
    throw std::invalid_argument("apply_twist_R: multiplicative models only");
  if (twist.sz_shift != 0.0)
    throw std::invalid_argument(
        "apply_twist_R: the S^z shift has no Yang-Baxter-preserving form");
  // The grading twist needs [g (x) g, R] = 0, which the gauge destroys
  // unless it is diagonal; same for the diagonal telescope family.
  if (twist.gauge_g) {
    Mat3 off = *twist.gauge_g;
    off.diagonal().setZero();
    const bool diagonal_gauge = off.cwiseAbs().maxCoeff() <= 1e-14;
    if (!diagonal_gauge &&
        (twist.grading_alpha != 0.0 || twist.telescope_a != Vec3::Zero()))
      throw std::invalid_argument(
          "apply_twist_R: non-diagonal gauges combine with grading or "
          "telescope twists only at the Hamiltonian level");
  }
  // exp((x-1)A) factors untangle through the ice pattern only when A is
  // affine in the spin operator: a0 + a2 = 2 a1. Generic diagonal telescopes
  // change the two-site Hamiltonian outside the R-matrix class.
  {
    const cplx defect =
        twist.telescope_a(0) + twist.telescope_a(2) - 2.0 * twist.telescope_a(1);
    const double scale = std::max(1.0, twist.telescope_a.cwiseAbs().maxCoeff());
    if (std::abs(defect) > 1e-12 * scale)
      throw std::invalid_argument(
          "apply_twist_R: telescope must be affine in the spin operator "
          "(a0 + a2 = 2 a1) to stay Yang-Baxter-preserving");
  }

  Mat3 g = twist.gauge_g ? *twist.gauge_g : Mat3::Identity();
  InverseResult gi = inverse(g);
  if (!gi.ok) throw std::invalid_argument("apply_twist_R: singular gauge");
  const Mat3 ginv = gi.inv;
  const cplx gamma = twist.grading_alpha;
  const Vec3 a = twist.telescope_a;
  const cplx shift = twist.identity_shift;

  // Diagonal prefix carrying the grading and telescope exponents. It sits
  // left of the gauge so the extracted Hamiltonian picks up the telescope
  // term unconjugated, matching apply_twist_H.
  auto dfac = [=](cplx x, double grading_sign) {
    Mat3 f = Mat3::Zero();
    for (int kdx = 0; kdx < 3; ++kdx)
      f(kdx, kdx) = std::exp(grading_sign * gamma * static_cast<double>(kdx) +
                             (x - 1.0) * a(kdx));
    return f;
  };

  RMatrixModel out = model;
  out.name = model.name + "+twist";
  auto inner = model.braided;
  out.braided = [=](const SpectralPoint& xp, const SpectralPoint& yp) {
    const cplx x = scalar_of(xp), y = scalar_of(yp);
    const Mat3 fx = dfac(x, +1.0) * g;
    const Mat3 fy = dfac(y, -1.0) * g;
    const Mat3 gx_inv = ginv * Mat3(dfac(y, +1.0).inverse());
    const Mat3 gy_inv = ginv * Mat3(dfac(x, -1.0).inverse());
    return Mat(std::exp(shift * (x - y)) * kron(fx, fy) * inner(xp, yp) *
               kron(gx_inv, gy_inv));
  };
  return out;
}

// --------------------------------------------------------------------------
// Hamiltonian extraction
// --------------------------------------------------------------------------

namespace {

// Central differences over step, step/2, ..., Richardson-eliminated through
// the even orders. Four levels put the truncation floor far below the
// round-off of O(1) entries while the stencil stays within pole margins.
DerivativeResult richardson_derivative(const std::function<Mat(double)>& central,
                                       double step, int levels = 4) {
  std::vector<Mat> tableau;
  tableau.reserve(levels);
  for (int l = 0; l < levels; ++l)
    tableau.push_back(central(step / std::pow(2.0, l)));
  Mat previous = tableau[0];
  for (int k = 1; k < levels; ++k) {
    previous = tableau[levels - 1];
    const double f = std::pow(4.0, k);
    for (int l = levels - 1; l >= k; --l)
      tableau[l] = (f * tableau[l] - tableau[l - 1]) / (f - 1.0);
  }
  DerivativeResult out;
  out.h = tableau[levels - 1];
  out.error_estimate = sup_norm(tableau[levels - 1] - previous);
  return out;
}

}  // namespace

DerivativeResult derivative_hamiltonian(const RMatrixModel& model,
                                        const SpectralPoint& base, double step) {
  auto central = [&](double h) {
    const Mat plus = model.braided(model.shift(base, cplx(h)), base);
    const Mat minus = model.braided(model.shift(base, cplx(-h)), base);
    return Mat((plus - minus) / (2.0 * h));
  };
  return richardson_derivative(central, step);
}

DerivativeResult derivative_hamiltonian(const RMatrixModel& model, double step) {
  return derivative_hamiltonian(model, model.base, step);
}

DerivativeResult derivative_hamiltonian_second(const RMatrixModel& model,
                                               const SpectralPoint& base,
                                               double step) {
  auto central = [&](double h) {
    const Mat plus = model.braided(base, model.shift(base, cplx(h)));
    const Mat minus = model.braided(base, model.shift(base, cplx(-h)));
    return Mat((plus - minus) / (2.0 * h));
  };
  return richardson_derivative(central, step);
}

}  // namespace ybe
