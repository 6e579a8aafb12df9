#include "ybe/baxterize.hpp"

#include <algorithm>

#include "ybe/linalg.hpp"
#include "ybe/optimize.hpp"
#include "ybe/tensor.hpp"

namespace ybe {

namespace {

Mat embed12(const Mat& m) { return kron(m, Mat::Identity(3, 3)); }
Mat embed23(const Mat& m) { return kron(Mat::Identity(3, 3), m); }

double rel_diff(const Mat& a, const Mat& b) {
  return sup_norm(a - b) / std::max({1.0, sup_norm(a), sup_norm(b)});
}

// || M - mu N || minimized over the scalar mu, relative; reports mu.
std::pair<cplx, double> proportionality(const Mat& m, const Mat& n) {
  const cplx num = (n.adjoint() * m).trace();
  const cplx den = (n.adjoint() * n).trace();
  const cplx mu = std::abs(den) > 0 ? num / den : cplx(0.0);
  return {mu, sup_norm(m - mu * n) / std::max(1.0, sup_norm(m))};
}

}  // namespace

double braid_relation_residual(const Mat& t) {
  const Mat t12 = embed12(t), t23 = embed23(t);
  const Mat lhs = t12 * t23 * t12;
  const Mat rhs = t23 * t12 * t23;
  return rel_diff(lhs, rhs);
}

int minimal_polynomial_degree(const Mat& h, double gap) {
  return static_cast<int>(cluster_eigenvalues(eigenvalues(h), gap).size());
}

// --------------------------------------------------------------------------
// Hecke
// --------------------------------------------------------------------------

AlgebraFit hecke_fit(const Mat& h, double tol) {
  AlgebraFit fit;
  fit.family = AlgebraFit::Family::Hecke;

  auto clusters = cluster_eigenvalues(eigenvalues(h), 1e-7);
  if (clusters.size() != 2) {
    fit.message = "minimal polynomial degree " + std::to_string(clusters.size()) +
                  ", need 2";
    return fit;
  }

  // Braid defect of H + sI is quadratic in the shift s; drive it to zero.
  const Mat h12 = embed12(h), h23 = embed23(h);
  const Mat c0 = h12 * h23 * h12 - h23 * h12 * h23;
  const Mat c1 = h12 * h12 - h23 * h23;
  const Mat c2 = h12 - h23;
  auto f_of_s = [&](cplx s) { return Mat(c0 + s * c1 + s * s * c2); };

  // Two-column least squares for the initial shift, then Newton.
  cplx s;
  {
    Mat a(27 * 27, 2);
    Vec b(27 * 27);
    for (int i = 0; i < 27 * 27; ++i) {
      a(i, 0) = c1(i / 27, i % 27);
      a(i, 1) = c2(i / 27, i % 27);
      b(i) = -c0(i / 27, i % 27);
    }
    Vec sol = a.colPivHouseholderQr().solve(b);
    s = sol(0);
  }
  for (int it = 0; it < 60; ++it) {
    const Mat f = f_of_s(s);
    const Mat df = c1 + 2.0 * s * c2;
    const cplx num = (df.conjugate().cwiseProduct(f)).sum();
    const cplx den = (df.conjugate().cwiseProduct(df)).sum();
    if (std::abs(den) < 1e-300) break;
    const cplx step = num / den;
    s -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(s))) break;
  }

  const Mat t0 = h + s * identity(9);
  const double braid_res = braid_relation_residual(t0);
  if (braid_res > tol) {
    fit.message = "no braid-compatible shift";
    fit.relation_residuals["braid"] = braid_res;
    return fit;
  }

  // Scale so the two eigenvalues multiply to -1.
  const cplx t1 = clusters[0].value + s;
  const cplx t2 = clusters[1].value + s;
  if (std::abs(t1 * t2) < 1e-14) {
    fit.message = "degenerate eigenvalue pair";
    return fit;
  }
  const cplx c = std::sqrt(-1.0 / (t1 * t2));
  fit.alpha_scale = c;
  fit.beta_shift = c * s;
  fit.op = c * t0;
  InverseResult inv = inverse(fit.op);
  if (!inv.ok) {
    fit.message = "T not invertible";
    return fit;
  }
  fit.op_inv = inv.inv;
  fit.xi = c * t1 - 1.0 / (c * t1);

  fit.relation_residuals["braid"] = braid_relation_residual(fit.op);
  fit.relation_residuals["hecke_quadratic"] =
      sup_norm(fit.op - fit.op_inv - fit.xi * identity(9)) /
      std::max(1.0, sup_norm(fit.op));
  fit.ok = fit.relation_residuals["braid"] <= tol &&
           fit.relation_residuals["hecke_quadratic"] <= tol;
  if (!fit.ok) fit.message = "relation residuals above tolerance";
  return fit;
}

Mat hecke_baxterize(const AlgebraFit& fit, cplx z) {
  if (std::abs(z) < 1e-12) throw PoleError("hecke_baxterize: z = 0");
  return z * fit.op - (1.0 / z) * fit.op_inv;
}

// --------------------------------------------------------------------------
// Temperley-Lieb
// --------------------------------------------------------------------------

AlgebraFit tl_fit(const Mat& h, double tol) {
  AlgebraFit best;
  best.family = AlgebraFit::Family::TL;

  auto clusters = cluster_eigenvalues(eigenvalues(h), 1e-7);
  if (clusters.size() != 2) {
    best.message = "minimal polynomial degree " + std::to_string(clusters.size()) +
                   ", need 2";
    return best;
  }

  double best_score = std::numeric_limits<double>::infinity();
  for (int pick = 0; pick < 2; ++pick) {
    const cplx lam0 = clusters[pick].value;
    const cplx lam1 = clusters[1 - pick].value;
    const Mat t0 = h - lam0 * identity(9);
    const Mat t012 = embed12(t0), t023 = embed23(t0);
    auto [kappa, kres] = proportionality(t012 * t023 * t012, t012);
    if (std::abs(kappa) < 1e-12 || kres > 1e-8) continue;
    const cplx c = 1.0 / std::sqrt(kappa);

    AlgebraFit fit;
    fit.family = AlgebraFit::Family::TL;
    fit.op = c * t0;  // the TL generator t
    fit.alpha_scale = c;
    fit.beta_shift = -c * lam0;
    fit.a = c * (lam1 - lam0) / 2.0;

    const Mat e12 = embed12(fit.op), e23 = embed23(fit.op);
    fit.relation_residuals["tl_triple_121"] = rel_diff(e12 * e23 * e12, e12);
    fit.relation_residuals["tl_triple_212"] = rel_diff(e23 * e12 * e23, e23);
    fit.relation_residuals["tl_square"] =
        sup_norm(fit.op * fit.op - 2.0 * fit.a * fit.op) /
        std::max(1.0, sup_norm(fit.op * fit.op));
    double score = 0.0;
    for (const auto& [k, v] : fit.relation_residuals) score = std::max(score, v);
    fit.ok = score <= tol;
    if (score < best_score) {
      best_score = score;
      best = fit;
    }
  }
  if (!best.ok && best.message.empty())
    best.message = "triple or square relation failed";
  return best;
}

Mat tl_baxterize(const AlgebraFit& fit, cplx z) {
  if (std::abs(z - 1.0) < 1e-3)
    throw PoleError("tl_baxterize: z too close to the z = 1 pole");
  const cplx a2 = fit.a * fit.a - 1.0;
  if (std::abs(a2) < 1e-12) throw PoleError("tl_baxterize: a^2 = 1 degenerate");
  const cplx scal = -fit.a + (z + 1.0) / (z - 1.0) * std::sqrt(a2);
  return fit.op + scal * identity(9);
}

// --------------------------------------------------------------------------
// Birman-Murakami-Wenzl
// --------------------------------------------------------------------------

namespace {

struct BmwCandidate {
  AlgebraFit fit;
  double score = std::numeric_limits<double>::infinity();
};

BmwCandidate bmw_try(const Mat& h, cplx h1, cplx h2, cplx h3, cplx alpha,
                     cplx beta) {
  BmwCandidate cand;
  AlgebraFit& fit = cand.fit;
  fit.family = AlgebraFit::Family::BMW;
  if (!std::isfinite(std::abs(alpha)) || !std::isfinite(std::abs(beta)) ||
      std::abs(alpha * h3 + beta) < 1e-10)
    return cand;
  fit.alpha_scale = alpha;
  fit.beta_shift = beta;
  fit.op = alpha * h + beta * identity(9);
  InverseResult inv = inverse(fit.op);
  if (!inv.ok) return cand;
  fit.op_inv = inv.inv;

  const cplx t1 = alpha * h1 + beta;
  const cplx t2 = alpha * h2 + beta;
  const cplx t3 = alpha * h3 + beta;
  fit.xi = t1 - 1.0 / t1;
  fit.a = -t3;
  fit.z_op = fit.op - fit.op_inv - fit.xi * identity(9);

  const Mat z23 = embed23(fit.z_op);
  const Mat t12 = embed12(fit.op);
  const Mat t12i = embed12(fit.op_inv);
  const double opn = std::max(1.0, sup_norm(fit.z_op));

  fit.relation_residuals["braid"] = braid_relation_residual(fit.op);
  fit.relation_residuals["zt"] =
      sup_norm(fit.z_op * fit.op + fit.a * fit.z_op) / opn;
  fit.relation_residuals["tz"] =
      sup_norm(fit.op * fit.z_op + fit.a * fit.z_op) / opn;
  fit.relation_residuals["wenzl_plus"] =
      sup_norm(z23 * t12 * z23 - fit.xi / fit.a * z23) / opn;
  fit.relation_residuals["wenzl_minus"] =
      sup_norm(z23 * t12i * z23 - fit.xi * fit.a * z23) / opn;
  // Hecke pair consistency: the two non-a eigenvalues multiply to -1.
  fit.relation_residuals["pair"] = std::abs(t1 * t2 + 1.0);

  cand.score = 0.0;
  for (const auto& [k, v] : fit.relation_residuals)
    cand.score = std::max(cand.score, v);
  (void)t2;
  return cand;
}

}  // namespace

AlgebraFit bmw_fit(const Mat& h, double tol) {
  AlgebraFit best;
  best.family = AlgebraFit::Family::BMW;

  auto clusters = cluster_eigenvalues(eigenvalues(h), 1e-7);
  if (clusters.size() != 3) {
    best.message = "minimal polynomial degree " + std::to_string(clusters.size()) +
                   ", need 3";
    return best;
  }

  double best_score = std::numeric_limits<double>::infinity();
  // Choose which eigenvalue plays -a, then search the affine map over the
  // one-parameter family left by the pair condition t1 t2 = -1.
  for (int pick = 0; pick < 3; ++pick) {
    const cplx h3 = clusters[pick].value;
    const cplx h1 = clusters[(pick + 1) % 3].value;
    const cplx h2 = clusters[(pick + 2) % 3].value;

    auto objective = [&](const std::vector<double>& p) {
      const cplx alpha(p[0], p[1]);
      if (std::abs(alpha) < 1e-6) return 1e3;
      // beta from (alpha h1 + beta)(alpha h2 + beta) = -1, both branches.
      const cplx b = alpha * (h1 + h2);
      const cplx cc = alpha * alpha * h1 * h2 + 1.0;
      const cplx disc = std::sqrt(b * b - 4.0 * cc);
      double bestv = 1e3;
      for (int br = 0; br < 2; ++br) {
        const cplx beta = (-b + (br == 0 ? disc : -disc)) / 2.0;
        BmwCandidate cand = bmw_try(h, h1, h2, h3, alpha, beta);
        bestv = std::min(bestv, cand.score);
      }
      return bestv;
    };

    MultistartOptions mopt;
    mopt.local.max_evals = 250;
    mopt.local.restarts = 2;
    mopt.local.initial_step = 0.3;
    mopt.threads = 1;
    std::vector<std::vector<double>> starts = {
        {1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {2.0, 0.0}, {0.3, -0.7}};
    MultistartResult ms = multistart_minimize(objective, starts, mopt);
    if (ms.best_start < 0) continue;

    // Gauss-Newton on the stacked relation defects sharpens the Nelder-Mead
    // floor; the affine pair (alpha, beta) enters every relation smoothly.
    auto stacked = [&](cplx alpha, cplx beta) {
      BmwCandidate cand = bmw_try(h, h1, h2, h3, alpha, beta);
      std::vector<cplx> f;
      if (!std::isfinite(cand.score)) return f;
      const Mat t12 = embed12(cand.fit.op), t23 = embed23(cand.fit.op);
      const Mat braid_defect = t12 * t23 * t12 - t23 * t12 * t23;
      const Mat z23 = embed23(cand.fit.z_op);
      const Mat w_p = z23 * t12 * z23 - cand.fit.xi / cand.fit.a * z23;
      const Mat w_m =
          z23 * embed12(cand.fit.op_inv) * z23 - cand.fit.xi * cand.fit.a * z23;
      for (const Mat* m : {&braid_defect, &w_p, &w_m})
        for (int r = 0; r < 27; ++r)
          for (int c = 0; c < 27; ++c) f.push_back((*m)(r, c));
      // The Hecke-pair condition is one scalar among thousands of entries;
      // weight it so the least squares cannot trade it away.
      const cplx t1 = alpha * h1 + beta, t2 = alpha * h2 + beta;
      f.push_back(27.0 * (t1 * t2 + 1.0));
      return f;
    };

    const cplx alpha0(ms.best.x[0], ms.best.x[1]);
    const cplx b0 = alpha0 * (h1 + h2);
    const cplx cc0 = alpha0 * alpha0 * h1 * h2 + 1.0;
    const cplx disc0 = std::sqrt(b0 * b0 - 4.0 * cc0);
    for (int br = 0; br < 2; ++br) {
      cplx alpha = alpha0;
      cplx beta = (-b0 + (br == 0 ? disc0 : -disc0)) / 2.0;
      std::vector<cplx> f0 = stacked(alpha, beta);
      for (int it = 0; it < 10 && !f0.empty(); ++it) {
        const int m = static_cast<int>(f0.size());
        Eigen::MatrixXd jac(2 * m, 4);
        Eigen::VectorXd rhs(2 * m);
        for (int i = 0; i < m; ++i) {
          rhs(2 * i) = f0[i].real();
          rhs(2 * i + 1) = f0[i].imag();
        }
        const double fd = 1e-7;
        const cplx probes[4] = {cplx(fd, 0), cplx(0, fd), cplx(0, 0), cplx(0, 0)};
        for (int c = 0; c < 4; ++c) {
          const cplx da = c < 2 ? probes[c] : cplx(0, 0);
          const cplx db = c >= 2 ? (c == 2 ? cplx(fd, 0) : cplx(0, fd)) : cplx(0, 0);
          std::vector<cplx> fc = stacked(alpha + da, beta + db);
          if (fc.size() != f0.size()) {
            jac.col(c).setZero();
            continue;
          }
          for (int i = 0; i < m; ++i) {
            jac(2 * i, c) = (fc[i].real() - f0[i].real()) / fd;
            jac(2 * i + 1, c) = (fc[i].imag() - f0[i].imag()) / fd;
          }
        }
        Eigen::VectorXd step = jac.colPivHouseholderQr().solve(rhs);
        const cplx na = alpha - cplx(step(0), step(1));
        const cplx nb = beta - cplx(step(2), step(3));
        std::vector<cplx> fn = stacked(na, nb);
        double old_norm = 0, new_norm = 0;
        for (const cplx& v : f0) old_norm += std::norm(v);
        for (const cplx& v : fn) new_norm += std::norm(v);
        if (new_norm < old_norm) {
          alpha = na;
          beta = nb;
          f0 = fn;
        } else {
          break;
        }
      }
      BmwCandidate cand = bmw_try(h, h1, h2, h3, alpha, beta);
      if (cand.score < best_score) {
        best_score = cand.score;
        best = cand.fit;
      }
    }
  }
  best.ok = best_score <= tol;
  if (!best.ok && best.message.empty())
    best.message = "no affine map satisfies the BMW relations";
  return best;
}

Mat bmw_baxterize(const AlgebraFit& fit, cplx z, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("bmw_baxterize: sign must be +-1");
  const cplx q = (fit.xi + std::sqrt(fit.xi * fit.xi + 4.0)) / 2.0;
  const cplx a_s = (sign > 0 ? -1.0 : 1.0) * fit.a *
                   (sign > 0 ? q : 1.0 / q);
  const cplx den1 = 1.0 - a_s * z * z;
  const cplx den2 = z - 1.0 / z;
  if (std::abs(den1) < 1e-6 || std::abs(den2) < 1e-6)
    throw PoleError("bmw_baxterize: z too close to a pole");
  return fit.op + (a_s * z * z / den1) * fit.z_op +
         (z * (q - 1.0 / q) / den2) * identity(9);
}

}  // namespace ybe
