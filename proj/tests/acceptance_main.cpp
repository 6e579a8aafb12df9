// Acceptance suite: one criterion per section, each printed as a PASS/FAIL
// line with its runtime. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <vector>

#include "oracles.hpp"
#include "ybe/baxterize.hpp"
#include "ybe/bethe.hpp"
#include "ybe/linalg.hpp"
#include "ybe/reconstruct.hpp"
#include "ybe/registry.hpp"
#include "ybe/tensor.hpp"
#include "ybe/verify.hpp"

using namespace ybe;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
  std::string label;
  clock_type::time_point start = clock_type::now();
  bool ok = true;
  std::string detail;

  explicit Criterion(std::string l) : label(std::move(l)) {}

  void require(bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = what;
    ok = ok && cond;
  }

  void finish(double budget_seconds = 0.0) {
    const double secs =
        std::chrono::duration<double>(clock_type::now() - start).count();
    if (budget_seconds > 0.0 && secs > budget_seconds) {
      ok = false;
      if (detail.empty()) detail = "runtime budget exceeded";
    }
    std::printf("[%s] %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", label.c_str(), secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
  }
};

std::vector<RMatrixModel> catalogue_models() {
  std::vector<RMatrixModel> models;
  for (cplx k : {cplx(2.0, 0.0), cplx(1.7, 0.3), cplx(0.6, 0.2), cplx(1.3, -0.4),
                 cplx(2.5, 0.1)})
    models.push_back(make_zf_model(k));
  for (cplx k : {cplx(2.0, 0.0), cplx(1.7, 0.3), cplx(0.6, 0.2), cplx(1.3, -0.4),
                 cplx(2.5, 0.1)})
    models.push_back(make_ik_model(k));
  for (cplx t : {cplx(0.35, 0.0), cplx(0.2, 0.1), cplx(1.7, 0.0), cplx(-0.4, 0.0),
                 cplx(0.8, 0.5)})
    models.push_back(make_v17_2_model(t));
  for (cplx l4 : {cplx(0.35, 0.05), cplx(0.4, 0.1), cplx(-0.3, 0.0), cplx(1.1, 0.2),
                  cplx(0.15, -0.25)}) {
    CurveSpec spec;
    spec.lambda4 = l4;
    models.push_back(make_sb_model(spec));
  }
  return models;
}

template <typename F>
void for_samples(const RMatrixModel& model, std::mt19937_64& rng, int count, F&& f) {
  int done = 0, guard = 0;
  while (done < count && guard < 100 * count + 1000) {
    ++guard;
    try {
      f();
      ++done;
    } catch (const PoleError&) {
    }
  }
  if (done < count) throw std::runtime_error(model.name + ": sampling starved");
}

}  // namespace

// --------------------------------------------------------------------------

static void criterion_1_ybe() {
  Criterion c("criterion 1: Yang-Baxter certification (zf, ik, v17_2, sb)");
  std::mt19937_64 rng(101);
  for (const RMatrixModel& model : catalogue_models()) {
    double worst = 0.0;
    for_samples(model, rng, 25, [&] {
      const SpectralPoint x = model.sample(rng);
      const SpectralPoint y = model.sample(rng);
      const SpectralPoint z = model.sample(rng);
      worst = std::max(worst, ybe_residual_braided(model, x, y, z));
    });
    c.require(worst <= 1e-10, model.name + " worst " + std::to_string(worst));
  }
  c.finish(30.0);
}

static void criterion_2_unitarity() {
  Criterion c("criterion 2: unitarity, lambda symmetry, regularity");
  std::mt19937_64 rng(202);
  for (const RMatrixModel& model : catalogue_models()) {
    double worst_unit = 0.0, worst_sym = 0.0, worst_reg = 0.0;
    for_samples(model, rng, 25, [&] {
      const SpectralPoint x = model.sample(rng);
      const SpectralPoint y = model.sample(rng);
      const UnitarityResult u = unitarity_check(model, x, y);
      const UnitarityResult v = unitarity_check(model, y, x);
      worst_unit = std::max({worst_unit, u.residual, v.residual});
      worst_sym = std::max(worst_sym, std::abs(u.lambda - v.lambda) /
                                          std::max(1.0, std::abs(u.lambda)));
    });
    for_samples(model, rng, 50, [&] {
      worst_reg = std::max(worst_reg, regularity_check(model, model.sample(rng)));
    });
    c.require(worst_unit <= 1e-10, model.name + " unitarity " + std::to_string(worst_unit));
    c.require(worst_sym <= 1e-10, model.name + " lambda symmetry");
    c.require(worst_reg <= 1e-12, model.name + " regularity");
  }
  c.finish();
}

static void criterion_3_roundtrip() {
  Criterion c("criterion 3: series round trip to order 8 (zf, ik)");
  for (int which = 0; which < 2; ++which) {
    const RMatrixModel model = which == 0 ? make_zf_model(2.0) : make_ik_model(2.0);
    // Radius trades alias error against the 1/r^k noise amplification; the
    // nearest poles sit at |u - 1| = 0.5 for both models.
    auto reference = oracle::taylor_from_samples(
        [&](cplx u) { return model.braided(u, cplx(1.0)); }, 1.0, 0.35, 8, 128);
    const Mat h = derivative_hamiltonian(model).h;
    UniReconstruction rec = reconstruct_univariate(h, 8);
    c.require(rec.ok, model.name + " reconstruction obstructed");
    for (int k = 0; k <= 8 && rec.ok; ++k) {
      const double diff = sup_norm(rec.series.coeffs[k] - reference[k]);
      c.require(diff <= 1e-8,
                model.name + " coefficient " + std::to_string(k) + " off by " +
                    std::to_string(diff));
    }
  }
  c.finish(10.0);
}

static void criterion_4_no_go() {
  Criterion c("criterion 4: 14-vertex no-go and the xi = 2 exception");
  NoGoOptions opt;
  opt.order = 6;
  opt.seed = 404;
  for (double xi : {0.0, 1.0, 3.0}) {
    ObstructionReport rep = certify_no_go(h14(xi), opt);
    c.require(rep.obstructed, "xi = " + std::to_string(xi) + " not obstructed");
    c.require(rep.optimum > 1e-6, "xi = " + std::to_string(xi) + " optimum too small");
    c.require(rep.order_failed >= 2 && rep.order_failed <= 6,
              "xi = " + std::to_string(xi) + " failure order out of range");
  }
  ObstructionReport exists = certify_no_go(h14(2.0), opt);
  c.require(!exists.obstructed, "xi = 2 reported obstructed");
  c.require(exists.optimum <= 1e-6, "xi = 2 optimum " + std::to_string(exists.optimum));

  // At xi = 2 the series is the theta0 = 0 17-vertex matrix in disguise:
  // reconstruct under the explicit carrying twist and compare with the
  // normalized closed form at the square-root argument.
  TwistSpec t;
  t.sz_shift = -0.5;
  t.telescope_a = Vec3(0.0, -0.5, -0.5);
  t.identity_shift = 0.5;
  UniReconstruction rec = reconstruct_univariate(h14(2.0), 8, t);
  c.require(rec.ok, "xi = 2 twisted reconstruction obstructed");
  auto v17 = make_v17_2_model(0.0);
  auto reference = oracle::taylor_from_samples(
      [&](cplx u) { return v17.braided(std::sqrt(u), cplx(1.0)); }, 1.0, 0.5, 8);
  for (int k = 0; k <= 8 && rec.ok; ++k) {
    const double diff = sup_norm(rec.series.coeffs[k] - reference[k]);
    c.require(diff <= 1e-8, "series vs v17_2(theta0=0) coefficient " +
                                std::to_string(k) + " off by " + std::to_string(diff));
  }
  c.finish(60.0);
}

static void criterion_5_hecke() {
  Criterion c("criterion 5: Hecke fit and Baxterization of the 17-vertex model");
  const cplx theta0(0.35, 0.1);
  auto v17 = make_v17_2_model(theta0);
  const Mat h = derivative_hamiltonian(v17).h;
  AlgebraFit fit = hecke_fit(h);
  c.require(fit.ok, "hecke_fit failed: " + fit.message);
  if (fit.ok) {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> rad(0.7, 1.6), ang(0.0, 2.0 * pi);
    int tested = 0, guard = 0;
    double worst = 0.0;
    while (tested < 20 && guard < 200) {
      ++guard;
      const cplx z = std::polar(rad(rng), ang(rng));
      const Mat a = hecke_baxterize(fit, z);
      // Match against the raw display through the w(z) bridge read off the
      // (1,1)/(3,3) entries; both square roots are admissible.
      if (std::abs(a(3, 3)) < 1e-6 || std::abs(a(1, 1)) < 1e-6) continue;
      const cplx w2 = a(1, 1) / a(3, 3);
      double best = 1e300;
      for (double sign : {1.0, -1.0}) {
        const cplx w = sign * std::sqrt(w2);
        if (std::abs(w) < 1e-8) continue;
        try {
          const Mat b = braid(v17_2_R(w, theta0));
          const cplx lam = (b.adjoint() * a).trace() / (b.adjoint() * b).trace();
          best = std::min(best, sup_norm(a - lam * b) / std::max(1.0, sup_norm(a)));
        } catch (const PoleError&) {
        }
      }
      worst = std::max(worst, best);
      ++tested;
    }
    c.require(tested == 20, "could not draw 20 sample points");
    c.require(worst <= 1e-10, "display match " + std::to_string(worst));
  }
  c.finish();
}

static void criterion_6_gauge_relations() {
  Criterion c("criterion 6: gauge relations gb <-> mb0 <-> sb, h17 limit");

  // gb <-> mb0 with the matched parameter correspondence.
  const cplx alpha(1.3, 0.2), beta(0.7, -0.1);
  const cplx j0 = std::polar(1.0, pi / 6.0);
  const cplx xi = mb0_rho(alpha, beta);
  Mat hgb = gb_hamiltonian(beta * xi, alpha * xi, xi);
  GaugeFit mb_fit = find_diagonal_gauge(mb0_hamiltonian(alpha, beta, j0), hgb, 1e-8);
  c.require(mb_fit.ok && mb_fit.residual <= 1e-8,
            "mb0 <-> gb residual " + std::to_string(mb_fit.residual));

  // sb derivative <-> gb on sampled curve points.
  CurveSpec spec;
  spec.lambda4 = cplx(0.4, 0.1);
  auto sb = make_sb_model(spec);
  std::mt19937_64 rng(606);
  int matched = 0, tried = 0;
  double worst = 0.0;
  while (matched < 10 && tried < 60) {
    ++tried;
    try {
      const SpectralPoint p = sb.sample(rng);
      const Mat hsb = derivative_hamiltonian(sb, p).h;
      const cplx hf = hsb(2, 6), hb = hsb(3, 1), hbb = hsb(1, 3);
      if (std::abs(hf) < 1e-6 || std::abs(hbb) < 1e-6) continue;
      GaugeFit fit = find_diagonal_gauge(hsb, gb_hamiltonian(hbb, hb, hf), 1e-8);
      if (!fit.ok) continue;
      worst = std::max(worst, fit.residual);
      ++matched;
    } catch (const PoleError&) {
    }
  }
  c.require(matched >= 10, "only matched " + std::to_string(matched) + " curve points");
  c.require(worst <= 1e-8, "sb <-> gb residual " + std::to_string(worst));

  // Exact xi -> 0 limit.
  const cplx J = default_gb_J();
  const cplx lam(0.8, 0.3);
  const double limit_diff =
      sup_norm(gb_hamiltonian_fixed_upsilon(-J * J, 1.0, 0.0, lam, J) - h17(lam, J * J));
  c.require(limit_diff <= 1e-13, "h17 limit off by " + std::to_string(limit_diff));
  c.finish();
}

static void criterion_7_cba() {
  Criterion c("criterion 7: coordinate-Bethe cross-validation");
  std::vector<std::pair<std::string, json>> catalogue = {
      {"zf", json{{"k", 2.0}}},
      {"ik", json{{"k", 2.0}}},
      {"v17_2", json{{"theta0", 0.35}}},
      {"sb", json{{"lambda4", json::array({0.4, 0.1})}}},
      {"gb", json{{"phi", 1.1}, {"psi", 0.6}, {"xi", 0.9}}},
      {"mb0",
       json{{"alpha", 1.3},
            {"beta", 0.7},
            {"j0", json::array({std::cos(pi / 6.0), std::sin(pi / 6.0)})}}},
      {"h17", json{{"Lambda", 0.8}, {"J", 1.4}}},
      {"v14", json{{"xi", 1.0}}}};

  for (const auto& [name, params] : catalogue) {
    ResolvedModel model = resolve_model(name, params);
    const HamiltonianParams par = params_from_matrix(model.h2);
    for (int sites : {2, 3, 4}) {
      const Mat chain = build_chain(model.h2, sites, true);
      auto sector = [&](int m) {
        SectorEig eig = eig_sym_sector(chain, sites, m);
        return std::vector<cplx>(eig.values.data(),
                                 eig.values.data() + eig.values.size());
      };
      // Vacuum side, zero and one excitation.
      SetCompareReport m0 = spectral_set_compare(
          sector(0), {energy_vacuum(par, sites, BetheRoots{{}, Reference::Vacuum})},
          1e-10);
      std::vector<cplx> cba1;
      for (const BetheRoots& r : solve_free_momenta(sites))
        cba1.push_back(energy_vacuum(par, sites, r));
      SetCompareReport m1 = spectral_set_compare(sector(1), cba1, 1e-10);
      // Plump side mirrors onto the top sectors.
      SetCompareReport n0 = spectral_set_compare(
          sector(2 * sites),
          {energy_plump(par, sites, BetheRoots{{}, Reference::Plump})}, 1e-10);
      std::vector<cplx> cbap;
      for (const BetheRoots& r : solve_free_momenta(sites, Reference::Plump))
        cbap.push_back(energy_plump(par, sites, r));
      SetCompareReport n1 = spectral_set_compare(sector(2 * sites - 1), cbap, 1e-10);

      const std::string tag = name + " L=" + std::to_string(sites);
      c.require(m0.ok, tag + " vacuum sector");
      c.require(m1.ok, tag + " one-excitation sector (" + m1.message + ")");
      c.require(n0.ok, tag + " plump sector");
      c.require(n1.ok, tag + " one-hole sector (" + n1.message + ")");
    }
  }

  CompletenessReport rep = completeness_probe(h14(1.0), 2);
  c.require(rep.total_unreached > 0, "14-vertex completeness probe flagged nothing");
  c.finish(60.0);
}

static void criterion_8_twist_covariance() {
  Criterion c("criterion 8: twist covariance of the zf model");
  auto zf = make_zf_model(2.0);
  const Mat h = derivative_hamiltonian(zf).h;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(-0.35, 0.35);

  for (int trial = 0; trial < 20; ++trial) {
    TwistSpec t;
    if (trial % 4 == 3) {
      // General gauge alone: the factorized-twist rule holds for any
      // invertible g.
      Mat3 g;
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col)
          g(r, col) = (r == col ? 1.0 : 0.0) + 0.3 * cplx(u(rng), u(rng));
      t.gauge_g = g;
    } else {
      // Diagonal gauge composes freely with grading and the spin-affine
      // telescope family (the one that stays in the R-matrix class).
      Mat3 g = Mat3::Identity();
      g(1, 1) = std::exp(cplx(u(rng), u(rng)));
      g(2, 2) = std::exp(cplx(u(rng), u(rng)));
      t.gauge_g = g;
      t.grading_alpha = cplx(u(rng), u(rng));
      const cplx tele_base(u(rng), u(rng)), tele_slope(u(rng), u(rng));
      t.telescope_a =
          Vec3(tele_base, tele_base + tele_slope, tele_base + 2.0 * tele_slope);
    }
    t.identity_shift = cplx(u(rng), u(rng));
    // The spin shift has no Yang-Baxter-preserving form and stays zero.

    RMatrixModel twisted = apply_twist_R(zf, t);
    double worst_ybe = 0.0, worst_unit = 0.0;
    for_samples(twisted, rng, 3, [&] {
      const SpectralPoint x = twisted.sample(rng);
      const SpectralPoint y = twisted.sample(rng);
      const SpectralPoint z = twisted.sample(rng);
      worst_ybe = std::max(worst_ybe, ybe_residual_braided(twisted, x, y, z));
      worst_unit = std::max(worst_unit, unitarity_check(twisted, x, y).residual);
    });
    c.require(worst_ybe <= 1e-10, "twisted YBE " + std::to_string(worst_ybe));
    c.require(worst_unit <= 1e-10, "twisted unitarity " + std::to_string(worst_unit));

    const Mat extracted = derivative_hamiltonian(twisted).h;
    const Mat expected = apply_twist_H(h, t);
    const double diff = sup_norm(extracted - expected) /
                        std::max(1.0, sup_norm(expected));
    c.require(diff <= 1e-9, "extracted Hamiltonian off by " + std::to_string(diff));
  }
  c.finish();
}

static void criterion_9_sparsity() {
  Criterion c("criterion 9: 14-vertex sparsity corollary");
  TwistSpec t;
  t.sz_shift = -0.5;
  t.telescope_a = Vec3(0.0, -0.5, -0.5);
  t.identity_shift = 0.5;
  const Mat h = apply_twist_H(h14(2.0), t);
  auto mask = sparsity_mask(h);
  c.require(mask.cast<int>().sum() <= 15,
            "mask has " + std::to_string(mask.cast<int>().sum()) + " positions");
  UniReconstruction rec = reconstruct_univariate(h, 8);
  c.require(rec.ok, "series obstructed");
  for (const Mat& coeff : rec.series.coeffs)
    for (int r = 0; r < 9; ++r)
      for (int col = 0; col < 9; ++col)
        if (!mask(r, col))
          c.require(coeff(r, col) == cplx(0.0), "nonzero entry outside the mask");
  c.finish();
}

static void criterion_10_spr() {
  Criterion c("criterion 10: SpR no-go (conditional on external entries)");
  const char* path = std::getenv("YBE_SPR_SPEC");
  if (path == nullptr) {
    std::printf("[SKIP] %s -- set YBE_SPR_SPEC to a model-spec file with the "
                "9x9 entry table\n",
                c.label.c_str());
    return;
  }
  try {
    ResolvedModel spr = load_model_spec(path);
    const cplx tau3 = complex_from_json(spr.params_echo.value("tau3", json(1.0)));
    const cplx theta0 = complex_from_json(spr.params_echo.value("theta0", json(1.0)));
    const bool special = std::abs(tau3 * tau3 - 1.0) <= 1e-9 &&
                         std::abs(theta0 - (tau3 * tau3 - tau3 + 1.0)) <= 1e-9;
    NoGoOptions opt;
    opt.order = 6;
    opt.seed = 1010;
    ObstructionReport rep = certify_no_go(spr.h2, opt);
    c.require(rep.obstructed != special,
              std::string("expected ") + (special ? "series" : "obstruction"));
  } catch (const std::exception& e) {
    c.require(false, e.what());
  }
  c.finish();
}

int main() {
  criterion_1_ybe();
  criterion_2_unitarity();
  criterion_3_roundtrip();
  criterion_4_no_go();
  criterion_5_hecke();
  criterion_6_gauge_relations();
  criterion_7_cba();
  criterion_8_twist_covariance();
  criterion_9_sparsity();
  criterion_10_spr();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
