#include <doctest.h>

#include <random>

#include "ybe/hamiltonians.hpp"
#include "ybe/linalg.hpp"
#include "ybe/rmatrices.hpp"
#include "ybe/tensor.hpp"

using namespace ybe;

namespace {

HamiltonianParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto c = [&] { return cplx(u(rng), u(rng)); };
  HamiltonianParams p;
  p.p = c();
  p.q = c();
  p.t1 = c();
  p.t2 = c();
  p.t3 = c();
  p.s1 = c();
  p.s2 = c();
  p.s3 = c();
  p.tp = c();
  p.sp = c();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p.v(i, j) = c();
  return p;
}

}  // namespace

TEST_CASE("build_two_site places the 19 couplings") {
  CHECK(sup_norm(build_two_site({})) == 0.0);

  HamiltonianParams only_p;
  only_p.p = 1.0;
  Mat h = build_two_site(only_p);
  CHECK(h(1, 3) == cplx(1.0));
  CHECK(h.cwiseAbs().sum() == 1.0);

  std::mt19937_64 rng(23);
  Mat full = build_two_site(random_params(rng));
  CHECK(ice_rule_residual(full) == 0.0);
  CHECK(sup_norm(full * two_site_spin() - two_site_spin() * full) == 0.0);
}

TEST_CASE("params_from_matrix inverts build_two_site and rejects leaks") {
  std::mt19937_64 rng(29);
  HamiltonianParams p = random_params(rng);
  Mat h = build_two_site(p);
  HamiltonianParams q = params_from_matrix(h);
  CHECK(sup_norm(build_two_site(q) - h) == 0.0);

  h(0, 5) = 1e-3;  // outside the pattern
  CHECK_THROWS_AS(params_from_matrix(h), std::invalid_argument);
}

TEST_CASE("build_chain sums embedded bonds") {
  CHECK(sup_norm(build_chain(identity(9), 3, true) - 3.0 * identity(27)) == 0.0);

  std::mt19937_64 rng(31);
  Mat h2 = build_two_site(random_params(rng));
  const Mat p = permutation_operator();
  Mat expected = embed(h2, LegEmbedding(2, 1)) + p * h2 * p;
  CHECK(sup_norm(build_chain(h2, 2, true) - expected) < 1e-15);

  Mat chain = build_chain(h2, 3, true);
  Mat sz = spin_z(3);
  CHECK(sup_norm(chain * sz - sz * chain) < 1e-13);

  CHECK_THROWS_AS(build_chain(h2, 1, true), DimensionError);
  CHECK_THROWS_AS(build_chain(h2, 7, true), DimensionError);
}

TEST_CASE("charge conjugation is an involution with the stated parameter map") {
  std::mt19937_64 rng(37);
  HamiltonianParams p = random_params(rng);
  Mat h = build_two_site(p);
  CHECK(sup_norm(charge_conjugate(charge_conjugate(h)) - h) == 0.0);

  HamiltonianParams c = charge_conjugate(p);
  CHECK(c.p == p.s3);
  CHECK(c.s3 == p.p);
  CHECK(c.q == p.t3);
  CHECK(c.t1 == p.t2);
  CHECK(c.s1 == p.s2);
  CHECK(c.tp == p.sp);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(c.v(i, j) == p.v(2 - i, 2 - j));

  // Similarity by X (x) X preserves the spectrum.
  Vec a = eigenvalues(h), b = eigenvalues(charge_conjugate(h));
  std::vector<cplx> av(a.data(), a.data() + 9), bv(b.data(), b.data() + 9);
  auto key = [](const cplx& x, const cplx& y) {
    if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(av.begin(), av.end(), key);
  std::sort(bv.begin(), bv.end(), key);
  for (int i = 0; i < 9; ++i) CHECK(std::abs(av[i] - bv[i]) < 1e-10);
}

TEST_CASE("generalized Bariev matrix entries") {
  const cplx phi(1.1, 0.2), psi(0.4, -0.3), xi(0.8, 0.1);
  Mat h = gb_hamiltonian(phi, psi, xi);
  const cplx ups = -(phi * phi - phi * psi + psi * psi) / (4.0 * xi);
  const cplx J = default_gb_J();
  CHECK(std::abs(h(0, 0) + ups) < 1e-15);
  CHECK(std::abs(h(2, 2) - (-ups - J * J * xi)) < 1e-15);
  CHECK(std::abs(h(4, 4) - (ups - xi)) < 1e-15);
  CHECK(std::abs(h(6, 4) + J * phi) < 1e-15);
  CHECK(ice_rule_residual(h) == 0.0);

  // phi = psi specializes upsilon to -phi^2 / (4 xi).
  Mat heq = gb_hamiltonian(phi, phi, xi);
  CHECK(std::abs(heq(0, 0) - phi * phi / (4.0 * xi)) < 1e-15);

  CHECK_THROWS_AS(gb_hamiltonian(phi, psi, cplx(0.0)), PoleError);
  CHECK_THROWS_AS(gb_hamiltonian_fixed_upsilon(cplx(0.0), psi, xi, 1.0, J), PoleError);
}

TEST_CASE("main-branch special-point Hamiltonian") {
  const cplx alpha(1.3, 0.2), beta(0.7, -0.1);
  const cplx j0 = std::polar(1.0, pi / 6.0);
  Mat h = mb0_hamiltonian(alpha, beta, j0);
  CHECK(h(0, 0) == cplx(1.0));
  CHECK(h(8, 8) == cplx(1.0));
  const cplx eta = mb0_eta(alpha, beta, j0);
  CHECK(std::abs(eta * eta * j0 * j0 - (alpha * beta - 1.0)) < 1e-15);
  CHECK(ice_rule_residual(h) == 0.0);
}

TEST_CASE("mb0 pole guard on the rho denominator") {
  // alpha^2 - alpha beta + beta^2 = 0 at beta = alpha * exp(+-i pi/3)
  const cplx alpha(1.0, 0.0);
  const cplx beta = std::polar(1.0, pi / 3.0);
  CHECK_THROWS_AS(mb0_hamiltonian(alpha, beta, cplx(1.0)), PoleError);
}

TEST_CASE("17-vertex and 14-vertex tables") {
  const cplx lam(0.8, 0.3), J(1.4, -0.2);
  Mat h = h17(lam, J);
  CHECK(h(4, 4) == lam);       // + Lambda on E11 (x) E11
  CHECK(h(0, 0) == -lam);
  CHECK(h(1, 3) == -J);
  CHECK(h(3, 1) == cplx(1.0));
  CHECK(ice_rule_residual(h) == 0.0);

  Mat h14m = h14(2.0);
  CHECK(h14m(7, 7) == cplx(0.5));   // v21 = xi - 3/2
  CHECK(h14m(2, 6) == cplx(1.0));   // E02 (x) E20
  CHECK(h14m(8, 8) == cplx(2.0));
  CHECK(ice_rule_residual(h14m) == 0.0);
}

TEST_CASE("gb xi -> 0 limit reproduces h17 with J -> J^2") {
  const cplx J = default_gb_J();
  const cplx lam(0.8, 0.3);
  Mat lhs = gb_hamiltonian_fixed_upsilon(-J * J, 1.0, 0.0, lam, J);
  Mat rhs = h17(lam, J * J);
  CHECK(sup_norm(lhs - rhs) < 1e-13);
  // The substituted values satisfy the defining relation at xi = 0:
  // phi^2 - phi psi + psi^2 = J^4 + J^2 + 1 vanishes for the cube root J.
  CHECK(std::abs((-J * J) * (-J * J) - (-J * J) * 1.0 + 1.0) < 1e-14);
}

TEST_CASE("twists compose in the fixed order") {
  std::mt19937_64 rng(41);
  Mat h = build_two_site(random_params(rng));
  CHECK(sup_norm(apply_twist_H(h, {}) - h) == 0.0);

  // Telescope terms cancel around a periodic ring.
  TwistSpec tele;
  tele.telescope_a = Vec3(cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.7, 0.0));
  Mat twisted = apply_twist_H(h, tele);
  CHECK(sup_norm(build_chain(twisted, 3, true) - build_chain(h, 3, true)) < 1e-13);

  // Identity shift moves the two-site spectrum rigidly.
  TwistSpec shift;
  shift.identity_shift = cplx(0.25, -0.5);
  Mat hs = apply_twist_H(h, shift);
  CHECK(sup_norm(hs - h - shift.identity_shift * identity(9)) == 0.0);

  TwistSpec bad;
  bad.gauge_g = Mat3::Zero();
  CHECK_THROWS_AS(apply_twist_H(h, bad), std::invalid_argument);
}

TEST_CASE("find_diagonal_gauge recovers twists") {
  auto zf = make_zf_model(2.0);
  Mat h = derivative_hamiltonian(zf).h;

  GaugeFit self = find_diagonal_gauge(h, h);
  CHECK(self.ok);
  CHECK(self.residual < 1e-12);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  TwistSpec t;
  Mat3 g = Mat3::Identity();
  g(1, 1) = std::exp(cplx(u(rng), u(rng)));
  g(2, 2) = std::exp(cplx(u(rng), u(rng)));
  t.gauge_g = g;
  t.grading_alpha = cplx(u(rng), u(rng));
  t.identity_shift = cplx(u(rng), u(rng));
  t.sz_shift = cplx(u(rng), u(rng));
  Mat h2 = apply_twist_H(h, t);
  GaugeFit fit = find_diagonal_gauge(h, h2);
  REQUIRE(fit.ok);
  CHECK(fit.residual < 1e-10);
  CHECK(sup_norm(apply_twist_H(h, fit.twist) - h2) < 1e-10);

  GaugeFit mismatch = find_diagonal_gauge(h, h14(1.0));
  CHECK_FALSE(mismatch.ok);
  CHECK(mismatch.message.find("zero patterns") != std::string::npos);
}

TEST_CASE("mb0 relates to gb by the diagonal twist") {
  const cplx alpha(1.3, 0.2), beta(0.7, -0.1);
  const cplx j0 = std::polar(1.0, pi / 6.0);  // j0^2 = j
  const cplx rho = mb0_rho(alpha, beta);
  const cplx xi = rho, phi = beta * xi, psi = alpha * xi;
  Mat hmb = mb0_hamiltonian(alpha, beta, j0);
  Mat hgb = gb_hamiltonian(phi, psi, xi);

  // The explicit twist: F = diag(1, sqrt(j0^2 eta / beta), 1) with a
  // half-turn grading.
  const cplx zeta = j0 * j0 * mb0_eta(alpha, beta, j0) / beta;
  TwistSpec t;
  Mat3 f = Mat3::Identity();
  f(1, 1) = std::sqrt(zeta);
  t.gauge_g = f;
  t.grading_alpha = cplx(0.0, pi / 2.0);
  CHECK(sup_norm(apply_twist_H(hmb, t) - hgb) < 1e-13);

  GaugeFit fit = find_diagonal_gauge(hmb, hgb);
  REQUIRE(fit.ok);
  CHECK(fit.residual < 1e-10);
}

TEST_CASE("catalogued Hamiltonians are exactly ice and spin-commuting") {
  std::vector<Mat> catalogue = {
      gb_hamiltonian(cplx(1.1, 0.2), cplx(0.6, -0.1), cplx(0.9, 0.0)),
      mb0_hamiltonian(cplx(1.3, 0.2), cplx(0.7, -0.1), std::polar(1.0, pi / 6.0)),
      h17(cplx(0.8, 0.3), cplx(1.4, -0.2)), h14(1.0)};
  const Mat sz = two_site_spin();
  for (const Mat& h : catalogue) {
    CHECK(ice_rule_residual(h) == 0.0);
    CHECK(sup_norm(h * sz - sz * h) == 0.0);
  }
}

TEST_CASE("gauge-only twists preserve chain spectra") {
  Mat h2 = gb_hamiltonian(cplx(1.1, 0.2), cplx(0.6, -0.1), cplx(0.9, 0.0));
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Mat3 g;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g(r, c) = (r == c ? 1.0 : 0.0) + 0.3 * cplx(u(rng), u(rng));
  TwistSpec t;
  t.gauge_g = g;
  Mat twisted = apply_twist_H(h2, t);
  const int sites = 3;
  Vec a = eigenvalues(build_chain(h2, sites, true));
  Vec b = eigenvalues(build_chain(twisted, sites, true));
  std::vector<cplx> av(a.data(), a.data() + a.size());
  std::vector<cplx> bv(b.data(), b.data() + b.size());
  auto key = [](const cplx& x, const cplx& y) {
    if (std::abs(x.real() - y.real()) > 1e-7) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(av.begin(), av.end(), key);
  std::sort(bv.begin(), bv.end(), key);
  for (size_t i = 0; i < av.size(); ++i) CHECK(std::abs(av[i] - bv[i]) < 1e-9);
}
