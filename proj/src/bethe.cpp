#include "ybe/bethe.hpp"

#include <algorithm>
#include <cmath>

#include "ybe/linalg.hpp"
#include "ybe/tensor.hpp"

namespace ybe {

namespace {

// Site occupation of a sector state: label = excitation count (vacuum) or
// 2 - hole count (plump).
int basis_index_of(const std::vector<int>& site_labels) {
  int idx = 0;
  for (int v : site_labels) idx = 3 * idx + v;
  return idx;
}

void enumerate_states(int sites, int excess, Reference ref, SectorBasis& out) {
  // occupancy per site in {0,1,2}, total = excess; recursion over sites.
  std::vector<int> occ(sites, 0);
  std::function<void(int, int)> rec = [&](int site, int left) {
    if (site == sites) {
      if (left != 0) return;
      SectorState st;
      std::vector<int> labels(sites);
      for (int s = 0; s < sites; ++s) {
        labels[s] = ref == Reference::Vacuum ? occ[s] : 2 - occ[s];
        for (int rep = 0; rep < occ[s]; ++rep) st.positions.push_back(s + 1);
      }
      // doubling pattern: group equal adjacent positions that share a site.
      for (size_t i = 0; i < st.positions.size();) {
        if (i + 1 < st.positions.size() && st.positions[i + 1] == st.positions[i]) {
          st.doubling.push_back(2);
          i += 2;
        } else {
          st.doubling.push_back(1);
          i += 1;
        }
      }
      st.basis_index = basis_index_of(labels);
      out.states.push_back(st);
      return;
    }
    for (int v = 0; v <= std::min(2, left); ++v) {
      occ[site] = v;
      rec(site + 1, left - v);
    }
    occ[site] = 0;
  };
  rec(0, excess);
}

}  // namespace

SectorBasis sector_basis(int sites, int excitations, Reference ref) {
  if (sites < 1 || excitations < 0 || excitations > 2 * sites)
    throw DimensionError("sector_basis: 0 <= excitations <= 2 sites");
  SectorBasis out;
  out.sites = sites;
  out.excitations = excitations;
  out.reference = ref;
  enumerate_states(sites, excitations, ref, out);
  std::sort(out.states.begin(), out.states.end(),
            [](const SectorState& a, const SectorState& b) {
              return a.basis_index < b.basis_index;
            });
  return out;
}

cplx energy_vacuum(const HamiltonianParams& par, int sites, const BetheRoots& roots) {
  if (roots.reference != Reference::Vacuum)
    throw std::invalid_argument("energy_vacuum: roots carry the plump reference");
  const double L = static_cast<double>(sites);
  const double m = static_cast<double>(roots.k.size());
  cplx e = L * par.v(0, 0) + m * (par.v(0, 1) + par.v(1, 0) - 2.0 * par.v(0, 0));
  const cplx i(0.0, 1.0);
  for (const cplx& k : roots.k)
    e += par.q * std::exp(i * k) + par.p * std::exp(-i * k);
  return e;
}

cplx energy_plump(const HamiltonianParams& par, int sites, const BetheRoots& roots) {
  if (roots.reference != Reference::Plump)
    throw std::invalid_argument("energy_plump: roots carry the vacuum reference");
  const double L = static_cast<double>(sites);
  const double n = static_cast<double>(roots.k.size());
  cplx e = L * par.v(2, 2) + n * (par.v(2, 1) + par.v(1, 2) - 2.0 * par.v(2, 2));
  const cplx i(0.0, 1.0);
  for (const cplx& k : roots.k)
    e += par.t3 * std::exp(i * k) + par.s3 * std::exp(-i * k);
  return e;
}

ScatteringFn scattering_trivial() {
  return [](cplx, cplx) { return cplx(1.0); };
}

ScatteringFn scattering_constant(cplx c) {
  return [c](cplx, cplx) { return c; };
}

ScatteringFn scattering_from_table(const std::vector<std::array<double, 6>>& rows,
                                   double match_tol) {
  return [rows, match_tol](cplx kn, cplx kj) -> cplx {
    for (const auto& r : rows) {
      if (std::abs(kn - cplx(r[0], r[1])) <= match_tol &&
          std::abs(kj - cplx(r[2], r[3])) <= match_tol)
        return cplx(r[4], r[5]);
    }
    throw std::runtime_error("scattering table has no entry for the root pair");
  };
}

std::vector<double> bethe_residual(const BetheRoots& roots, const ScatteringFn& s,
                                   int sites) {
  const cplx i(0.0, 1.0);
  std::vector<double> out;
  for (size_t j = 0; j < roots.k.size(); ++j) {
    cplx rhs = 1.0;
    for (size_t n = 0; n < roots.k.size(); ++n) {
      if (n == j) continue;
      const cplx amp = s(roots.k[n], roots.k[j]);
      if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
        throw std::runtime_error("bethe_residual: scattering singular at a root pair");
      rhs *= amp;
    }
    out.push_back(std::abs(std::exp(i * roots.k[j] * static_cast<double>(sites)) - rhs));
  }
  return out;
}

std::vector<BetheRoots> solve_free_momenta(int sites, Reference ref) {
  std::vector<BetheRoots> out;
  for (int m = 0; m < sites; ++m) {
    BetheRoots r;
    r.reference = ref;
    r.k.push_back(2.0 * pi * static_cast<double>(m) / static_cast<double>(sites));
    out.push_back(r);
  }
  return out;
}

SetCompareReport spectral_set_compare(std::vector<cplx> a, std::vector<cplx> b,
                                      double tol) {
  SetCompareReport rep;
  if (a.size() != b.size()) {
    rep.message = "size mismatch: " + std::to_string(a.size()) + " vs " +
                  std::to_string(b.size());
    return rep;
  }
  // Lexicographic (Re, Im) sort, but with the real comparison at tolerance:
  // rounding noise on equal real parts must not scramble the Im ordering.
  auto sort_toleranced = [tol](std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(),
              [](const cplx& x, const cplx& y) { return x.real() < y.real(); });
    size_t i = 0;
    while (i < v.size()) {
      size_t j = i + 1;
      while (j < v.size() && v[j].real() - v[j - 1].real() <= 10.0 * tol) ++j;
      std::sort(v.begin() + i, v.begin() + j,
                [](const cplx& x, const cplx& y) { return x.imag() < y.imag(); });
      i = j;
    }
  };
  sort_toleranced(a);
  sort_toleranced(b);

  // Sorted pairing is only safe when neighbours are separated; degenerate
  // clusters are compared by cardinality and their mean.
  double worst = 0.0;
  size_t i = 0;
  while (i < a.size()) {
    size_t ja = i + 1, jb = i + 1;
    while (ja < a.size() && std::abs(a[ja] - a[ja - 1]) <= 10.0 * tol) ++ja;
    while (jb < b.size() && std::abs(b[jb] - b[jb - 1]) <= 10.0 * tol) ++jb;
    if (ja != jb) {
      rep.message = "degenerate cluster cardinality mismatch";
      rep.max_distance = std::numeric_limits<double>::infinity();
      return rep;
    }
    cplx ma = 0.0, mb = 0.0;
    for (size_t t = i; t < ja; ++t) {
      ma += a[t];
      mb += b[t];
    }
    const double nd = static_cast<double>(ja - i);
    worst = std::max(worst, std::abs(ma / nd - mb / nd));
    i = ja;
  }
  rep.max_distance = worst;
  rep.ok = worst <= tol;
  return rep;
}

CompletenessReport completeness_probe(const Mat& h2, int sites, double tol) {
  const HamiltonianParams par = params_from_matrix(h2);
  const Mat chain = build_chain(h2, sites, /*periodic=*/true);

  // States built on a reference with zero or one excitation live in a
  // definite sector; the reachable set is kept per sector so an accidental
  // cross-sector energy coincidence cannot pass for a constructed state.
  std::vector<std::vector<cplx>> reachable(2 * sites + 1);
  reachable[0].push_back(energy_vacuum(par, sites, BetheRoots{{}, Reference::Vacuum}));
  reachable[2 * sites].push_back(
      energy_plump(par, sites, BetheRoots{{}, Reference::Plump}));
  for (const BetheRoots& r : solve_free_momenta(sites, Reference::Vacuum))
    reachable[1].push_back(energy_vacuum(par, sites, r));
  for (const BetheRoots& r : solve_free_momenta(sites, Reference::Plump))
    reachable[2 * sites - 1].push_back(energy_plump(par, sites, r));

  CompletenessReport rep;
  rep.sites = sites;
  for (int m = 0; m <= 2 * sites; ++m) {
    SectorEig eig = eig_sym_sector(chain, sites, m);
    SectorCoverage cov;
    cov.sector = m;
    cov.dimension = static_cast<int>(eig.values.size());
    std::vector<char> used(reachable[m].size(), 0);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      bool hit = false;
      for (size_t r = 0; r < reachable[m].size(); ++r) {
        if (used[r]) continue;
        if (std::abs(eig.values(i) - reachable[m][r]) <= tol) {
          used[r] = 1;
          hit = true;
          break;
        }
      }
      if (hit)
        cov.reached += 1;
      else
        cov.unreached.push_back(eig.values(i));
    }
    rep.total_unreached += static_cast<int>(cov.unreached.size());
    rep.sectors.push_back(cov);
  }
  return rep;
}

}  // namespace ybe
