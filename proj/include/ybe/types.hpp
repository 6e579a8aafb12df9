#ifndef YBE_TYPES_HPP
#define YBE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ybe {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr double pi = 3.14159265358979323846;

// Local Hilbert space is C^3 throughout; chain spaces are C^(3^L).
inline constexpr int site_dim = 3;

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Entrywise sup norm.
inline double sup_norm(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Relative residual convention used by every check in this library:
// ||X||_inf / max(1, scale), where scale is the sup norm of the inputs.
inline double rel_residual(const Mat& x, double scale) {
  return sup_norm(x) / std::max(1.0, scale);
}

inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

inline Mat identity(int n) { return Mat::Identity(n, n); }

}  // namespace ybe

#endif
