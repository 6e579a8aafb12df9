#ifndef YBE_BETHE_HPP
#define YBE_BETHE_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ybe/hamiltonians.hpp"
#include "ybe/types.hpp"

namespace ybe {

enum class Reference { Vacuum, Plump };

// One basis state of the S^z = M (vacuum side) or hole-number N (plump side)
// sector: ordered positions with doubling pattern m_k in {1,2}.
struct SectorState {
  std::vector<int> positions;  // 1-based sites, nondecreasing
  std::vector<int> doubling;   // m_k per excitation group
  int basis_index;             // index into the 3^L chain basis
};

struct SectorBasis {
  int sites = 0;
  int excitations = 0;  // M (vacuum) or N (plump)
  Reference reference = Reference::Vacuum;
  std::vector<SectorState> states;
};

// Enumerates the excitation (vacuum) or hole (plump) states over L sites.
SectorBasis sector_basis(int sites, int excitations, Reference ref);

struct BetheRoots {
  std::vector<cplx> k;
  Reference reference = Reference::Vacuum;
};

// E_M = L v00 + M (v01 + v10 - 2 v00) + sum_n (q e^{ik} + p e^{-ik}).
cplx energy_vacuum(const HamiltonianParams& par, int sites, const BetheRoots& roots);

// E~_N = L v22 + N (v21 + v12 - 2 v22) + sum_n (t3 e^{ik} + s3 e^{-ik}).
cplx energy_plump(const HamiltonianParams& par, int sites, const BetheRoots& roots);

// Two-body scattering amplitude S(k_n, k_j), pluggable.
using ScatteringFn = std::function<cplx(cplx, cplx)>;

ScatteringFn scattering_trivial();
ScatteringFn scattering_constant(cplx c);

// Tabulated samples: rows [kn_re, kn_im, kj_re, kj_im, s_re, s_im]; lookups
// must land within match_tol of a tabulated pair.
ScatteringFn scattering_from_table(
    const std::vector<std::array<double, 6>>& rows, double match_tol = 1e-9);

// Per-root defect |e^{i k_j L} - prod_{n != j} S(k_n, k_j)|.
std::vector<double> bethe_residual(const BetheRoots& roots, const ScatteringFn& s,
                                   int sites);

// One-excitation momenta k = 2 pi m / L.
std::vector<BetheRoots> solve_free_momenta(int sites,
                                           Reference ref = Reference::Vacuum);

struct SetCompareReport {
  bool ok = false;
  double max_distance = 0.0;
  std::string message;
};

// Multiset match of two complex spectra: sort by (Re, Im), pair in order;
// clusters closer than 10 * tol are matched by cardinality.
SetCompareReport spectral_set_compare(std::vector<cplx> a, std::vector<cplx> b,
                                      double tol);

struct SectorCoverage {
  int sector = 0;  // S^z eigenvalue
  int dimension = 0;
  int reached = 0;
  std::vector<cplx> unreached;
};

struct CompletenessReport {
  int sites = 0;
  std::vector<SectorCoverage> sectors;
  int total_unreached = 0;
};

// Compares every sector spectrum of the periodic chain against the energies
// reachable from the two reference states with zero or one excitation (the
// desk-scale formulas); levels matched nowhere are flagged. No claim is made
// about multi-excitation coverage.
CompletenessReport completeness_probe(const Mat& h2, int sites, double tol = 1e-8);

}  // namespace ybe

#endif
