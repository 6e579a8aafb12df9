#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ybe/linalg.hpp"
#include "ybe/rmatrices.hpp"
#include "ybe/tensor.hpp"

using namespace ybe;

TEST_CASE("eigenvalues of small known matrices") {
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  Vec v = eigenvalues(d);
  std::vector<double> re;
  for (int i = 0; i < 3; ++i) re.push_back(v(i).real());
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1.0));
  CHECK(re[2] == doctest::Approx(3.0));

  Mat fl(2, 2);
  fl << 0.0, 1.0, 1.0, 0.0;
  Vec w = eigenvalues(fl);
  CHECK(std::abs(std::abs(w(0)) - 1.0) < 1e-14);
  CHECK(std::abs(w(0) + w(1)) < 1e-14);
}

TEST_CASE("eigenvalues match the characteristic-polynomial route") {
  auto key = [](double gap) {
    return [gap](const cplx& x, const cplx& y) {
      if (std::abs(x.real() - y.real()) > gap) return x.real() < y.real();
      return x.imag() < y.imag();
    };
  };

  // Well-separated spectrum: the two routes agree tightly.
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat g(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g(i, j) = cplx(u(rng), u(rng));
  Vec gd = eigenvalues(g);
  std::vector<cplx> ga(gd.data(), gd.data() + 6);
  std::vector<cplx> gb = oracle::roots_via_charpoly(g);
  REQUIRE(gb.size() == 6);
  std::sort(ga.begin(), ga.end(), key(1e-7));
  std::sort(gb.begin(), gb.end(), key(1e-7));
  for (int i = 0; i < 6; ++i) CHECK(std::abs(ga[i] - gb[i]) < 1e-9);

  // Two-site operator of the k = 2 Zamolodchikov-Fateev chain: its spectrum
  // carries multiplicity 3, and a defect eps in the polynomial coefficients
  // moves such roots by eps^(1/3); the multiset still matches at that scale.
  auto zf = make_zf_model(2.0);
  const Mat h = derivative_hamiltonian(zf).h;
  Vec direct = eigenvalues(h);
  std::vector<cplx> via_charpoly = oracle::roots_via_charpoly(h);
  REQUIRE(via_charpoly.size() == 9);
  std::vector<cplx> a(direct.data(), direct.data() + 9);
  std::sort(a.begin(), a.end(), key(1e-2));
  std::sort(via_charpoly.begin(), via_charpoly.end(), key(1e-2));
  for (int i = 0; i < 9; ++i) CHECK(std::abs(a[i] - via_charpoly[i]) < 5e-3);
}

TEST_CASE("sector reduction reports leakage") {
  Mat d = Mat::Zero(9, 9);
  for (int i = 0; i < 9; ++i) d(i, i) = static_cast<double>(i);
  SectorEig s = eig_sym_sector(d, 2, 2);  // sector {|02>,|11>,|20>}
  CHECK(s.leakage == 0.0);
  REQUIRE(s.values.size() == 3);

  Mat off = d;
  off(2, 0) = 0.5;  // couples sector 2 to sector 0
  SectorEig bad = eig_sym_sector(off, 2, 2);
  CHECK(bad.leakage == doctest::Approx(0.5));
}

TEST_CASE("linear solves and inverses") {
  Vec b(3);
  b << 1.0, 2.0, 3.0;
  LinearSolve s = solve_linear(identity(3), b);
  CHECK(s.ok);
  CHECK((s.x - b).norm() < 1e-14);

  Mat a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  InverseResult inv = inverse(a);
  Mat expected(2, 2);
  expected << -2.0, 1.0, 1.5, -0.5;
  CHECK(inv.ok);
  CHECK(sup_norm(inv.inv - expected) < 1e-14);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat r(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) r(i, j) = cplx(u(rng), u(rng));
  InverseResult ri = inverse(r);
  REQUIRE(ri.ok);
  CHECK(sup_norm(r * ri.inv - identity(9)) < 1e-10);

  Mat sing = Mat::Zero(2, 2);
  sing(0, 0) = 1.0;
  CHECK_FALSE(inverse(sing).ok);
  LinearSolve ss = solve_linear(sing, Vec::Ones(2));
  CHECK_FALSE(ss.ok);
  CHECK(ss.rcond < 1e-14);
}

TEST_CASE("polynomial roots via companion matrix") {
  // (z-1)(z-2)(z-3) = -6 + 11 z - 6 z^2 + z^3
  std::vector<cplx> roots = poly_roots({-6.0, 11.0, -6.0, 1.0});
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0] - 1.0) < 1e-12);
  CHECK(std::abs(roots[1] - 2.0) < 1e-12);
  CHECK(std::abs(roots[2] - 3.0) < 1e-12);

  roots = poly_roots({1.0, 0.0, 1.0});  // z^2 + 1
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] + cplx(0, 1)) < 1e-14);
  CHECK(std::abs(roots[1] - cplx(0, 1)) < 1e-14);

  // Tiny leading coefficient is dropped rather than amplified.
  roots = poly_roots({-1.0, 1.0, 1e-16});
  CHECK(roots.size() == 1);
  CHECK(std::abs(roots[0] - 1.0) < 1e-12);

  CHECK(poly_roots({0.0, 0.0}).empty());
}

TEST_CASE("eigenvalue clustering counts multiplicities") {
  Vec v(4);
  v << cplx(1.0, 0.0), cplx(1.0 + 1e-9, 0.0), cplx(2.0, 0.0), cplx(3.0, 0.0);
  auto clusters = cluster_eigenvalues(v, 1e-7);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[0].multiplicity == 2);
}
