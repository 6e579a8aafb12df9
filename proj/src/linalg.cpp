#include "ybe/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>

#include "ybe/tensor.hpp"

namespace ybe {

Vec eigenvalues(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues: square input required");
  require_finite(m, "eigenvalues");
  Eigen::ComplexSchur<Mat> schur;
  schur.setMaxIterations(120 * static_cast<Eigen::Index>(m.rows()));
  schur.compute(m, /*computeU=*/false);
  if (schur.info() == Eigen::Success) return schur.matrixT().diagonal();
  // Highly defective inputs can stall the shifted QR iteration; a diagonal
  // ramp far below every tolerance in this library separates the stuck
  // eigenvalues without moving them at reporting precision.
  const double eps = 1e-13 * std::max(1.0, sup_norm(m));
  Mat jittered = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    jittered(i, i) += eps * static_cast<double>(i + 1);
  schur.compute(jittered, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues: QR iteration failed to converge");
  return schur.matrixT().diagonal();
}

SectorEig eig_in_subspace(const Mat& m, const std::vector<int>& indices) {
  const int n = static_cast<int>(indices.size());
  Mat block(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) block(i, j) = m(indices[i], indices[j]);

  std::vector<char> inside(m.rows(), 0);
  for (int i : indices) inside[i] = 1;
  double leak = 0.0;
  for (int i : indices)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (!inside[c]) leak = std::max({leak, std::abs(m(i, c)), std::abs(m(c, i))});

  SectorEig out;
  out.values = n > 0 ? eigenvalues(block) : Vec(0);
  out.leakage = leak;
  return out;
}

SectorEig eig_sym_sector(const Mat& m, int sites, int sector) {
  if (m.rows() != pow3(sites)) throw DimensionError("eig_sym_sector: dim mismatch");
  return eig_in_subspace(m, sector_indices(sites, sector));
}

LinearSolve solve_linear(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw DimensionError("solve_linear: shape mismatch");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double rcond = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  LinearSolve out;
  out.x = svd.solve(b);
  const double bn = b.norm();
  out.residual = bn > 0 ? (a * out.x - b).norm() / bn : (a * out.x - b).norm();
  out.rcond = rcond;
  out.ok = rcond > 1e-14;
  return out;
}

InverseResult inverse(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse: square input required");
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  InverseResult out;
  out.rcond = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  out.ok = out.rcond > 1e-14;
  out.inv = a.fullPivLu().inverse();
  return out;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

static cplx poly_deriv_eval(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
    acc = acc * z + static_cast<double>(k) * coeffs[k];
  return acc;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs, double drop_tol) {
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < drop_tol * scale) --deg;
  if (deg < 1) return {};

  // Balance the companion matrix: rescale the variable so the monic
  // coefficients are O(1); wildly scaled columns stall the QR iteration.
  double scale_z = 0.0;
  for (int i = 0; i < deg; ++i) {
    const double mag = std::abs(coeffs[i] / coeffs[deg]);
    if (mag > 0.0) scale_z = std::max(scale_z, std::pow(mag, 1.0 / (deg - i)));
  }
  if (!(scale_z > 0.0) || !std::isfinite(scale_z)) scale_z = 1.0;

  Mat comp = Mat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) = -coeffs[i] / coeffs[deg] / std::pow(scale_z, deg - i);
  Vec raw = eigenvalues(comp);

  std::vector<cplx> roots(raw.data(), raw.data() + raw.size());
  for (auto& r : roots) r *= scale_z;
  for (auto& r : roots) {
    for (int it = 0; it < 8; ++it) {
      const cplx f = poly_eval(coeffs, r);
      const cplx df = poly_deriv_eval(coeffs, r);
      if (std::abs(df) < 1e-300) break;
      const cplx step = f / df;
      r -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(r))) break;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<cplx> charpoly(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<cplx> c(n + 1, 0.0);
  c[n] = 1.0;
  Mat mk = Mat::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = m * mk;
    const cplx ck = -mk.trace() / static_cast<double>(k);
    c[n - k] = ck;
    mk += ck * Mat::Identity(n, n);
  }
  return c;
}

std::vector<EigenCluster> cluster_eigenvalues(const Vec& values, double gap) {
  std::vector<cplx> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<EigenCluster> clusters;
  for (const auto& v : sorted) {
    bool placed = false;
    for (auto& cl : clusters) {
      if (std::abs(v - cl.value) <= gap) {
        cl.value = (cl.value * static_cast<double>(cl.multiplicity) + v) /
                   static_cast<double>(cl.multiplicity + 1);
        cl.multiplicity += 1;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({v, 1});
  }
  return clusters;
}

}  // namespace ybe
