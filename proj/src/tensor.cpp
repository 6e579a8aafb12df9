#include "ybe/tensor.hpp"

namespace ybe {

int pow3(int n) {
  int r = 1;
  while (n-- > 0) r *= 3;
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  require_finite(a, "kron lhs");
  require_finite(b, "kron rhs");
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Mat out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Mat3 elem(int i, int j) {
  Mat3 e = Mat3::Zero();
  e(i, j) = 1.0;
  return e;
}

Mat embed(const Mat& m, const LegEmbedding& e) {
  if (m.rows() != 9 || m.cols() != 9)
    throw DimensionError("embed: operator must be 9x9");
  const int left = e.first_site - 1;
  const int right = e.total_sites - e.first_site - 1;
  Mat out = m;
  if (left > 0) out = kron(identity(pow3(left)), out);
  if (right > 0) out = kron(out, identity(pow3(right)));
  return out;
}

Mat embed_pair(const Mat& m, int leg_a, int leg_b, int total_sites) {
  if (m.rows() != 9 || m.cols() != 9)
    throw DimensionError("embed_pair: operator must be 9x9");
  if (leg_a == leg_b || leg_a < 1 || leg_b < 1 || leg_a > total_sites ||
      leg_b > total_sites)
    throw DimensionError("embed_pair: bad legs");
  const int dim = pow3(total_sites);
  // Strides of each leg in the big-endian digit encoding.
  std::vector<int> stride(total_sites + 1);
  for (int s = 1; s <= total_sites; ++s) stride[s] = pow3(total_sites - s);

  Mat out = Mat::Zero(dim, dim);
  const int rest = pow3(total_sites - 2);
  // Enumerate the spectator digits, then the four active digits.
  std::vector<int> spectators;
  for (int s = 1; s <= total_sites; ++s)
    if (s != leg_a && s != leg_b) spectators.push_back(s);
  for (int base = 0; base < rest; ++base) {
    int offset = 0;
    int tmp = base;
    for (int k = static_cast<int>(spectators.size()) - 1; k >= 0; --k) {
      offset += (tmp % 3) * stride[spectators[k]];
      tmp /= 3;
    }
    for (int ra = 0; ra < 3; ++ra)
      for (int rb = 0; rb < 3; ++rb)
        for (int ca = 0; ca < 3; ++ca)
          for (int cb = 0; cb < 3; ++cb) {
            const cplx v = m(3 * ra + rb, 3 * ca + cb);
            if (v == 0.0) continue;
            const int r = offset + ra * stride[leg_a] + rb * stride[leg_b];
            const int c = offset + ca * stride[leg_a] + cb * stride[leg_b];
            out(r, c) = v;
          }
  }
  return out;
}

Mat permutation_operator() {
  Mat p = Mat::Zero(9, 9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) p(3 * b + a, 3 * a + b) = 1.0;
  return p;
}

int state_spin(int index, int sites) {
  int s = 0;
  for (int k = 0; k < sites; ++k) {
    s += index % 3;
    index /= 3;
  }
  return s;
}

Mat spin_z(int sites) {
  if (sites < 1) throw DimensionError("spin_z: need at least one site");
  const int dim = pow3(sites);
  Mat sz = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) sz(i, i) = static_cast<double>(state_spin(i, sites));
  return sz;
}

std::vector<int> sector_indices(int sites, int m) {
  std::vector<int> idx;
  const int dim = pow3(sites);
  for (int i = 0; i < dim; ++i)
    if (state_spin(i, sites) == m) idx.push_back(i);
  return idx;
}

bool ice_position(int row, int col) {
  return (row / 3 + row % 3) == (col / 3 + col % 3);
}

double ice_rule_residual(const Mat& m) {
  if (m.rows() != 9 || m.cols() != 9)
    throw DimensionError("ice_rule_residual: operator must be 9x9");
  double worst = 0.0;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      if (!ice_position(r, c)) worst = std::max(worst, std::abs(m(r, c)));
  return worst;
}

}  // namespace ybe
