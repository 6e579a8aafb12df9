#ifndef YBE_TENSOR_HPP
#define YBE_TENSOR_HPP

#include <vector>

#include "ybe/types.hpp"

namespace ybe {

// Kronecker product, row-major leg order: (A (x) B)|i>|j> = A|i> (x) B|j>.
Mat kron(const Mat& a, const Mat& b);

// Elementary 3x3 matrix E_ij with a single 1 at (i, j).
Mat3 elem(int i, int j);

// Placement of a two-site (9x9) operator on adjacent sites of a chain.
// Sites are 1-based; slot (i, i+1) with 1 <= i < total_sites.
struct LegEmbedding {
  int total_sites;
  int first_site;
  LegEmbedding(int total, int first) : total_sites(total), first_site(first) {
    if (total < 2 || first < 1 || first + 1 > total)
      throw DimensionError("LegEmbedding: slot out of range");
  }
};

// Embed a 9x9 operator into 3^total_sites, identity on the other legs.
Mat embed(const Mat& m, const LegEmbedding& e);

// Embed a 9x9 operator on an arbitrary ordered pair of legs (1-based, legA != legB).
Mat embed_pair(const Mat& m, int leg_a, int leg_b, int total_sites);

// Leg-swap operator on C^3 (x) C^3: P|ab> = |ba>.
Mat permutation_operator();

// Diagonal total-spin operator on 3^L: eigenvalue of a basis state is the sum
// of its site labels (site labels 0,1,2).
Mat spin_z(int sites);

// Digit sum of a basis index of 3^L (its total-spin eigenvalue).
int state_spin(int index, int sites);

// Basis indices of the S^z = m sector of 3^L, ascending.
std::vector<int> sector_indices(int sites, int m);

// Largest |entry| at positions violating the ice rule (i1+i2 != j1+j2) of a
// 9x9 two-site operator.
double ice_rule_residual(const Mat& m);

// True at 9x9 ice-rule positions (the 19-vertex pattern).
bool ice_position(int row, int col);

int pow3(int n);

}  // namespace ybe

#endif
