#ifndef YBE_REGISTRY_HPP
#define YBE_REGISTRY_HPP

#include <optional>
#include <string>

#include "ybe/report.hpp"
#include "ybe/rmatrices.hpp"

namespace ybe {

// A catalogue entry resolved from a model name plus parameters. Models with
// a closed-form R-matrix carry an evaluator; every model carries a two-site
// Hamiltonian (extracted from the R-matrix when no direct table exists).
struct ResolvedModel {
  std::string name;
  bool has_rmatrix = false;
  RMatrixModel rmodel;
  Mat h2;
  json params_echo;
};

// Known names: zf, ik, v17_2, sb, gb, mb0, h17, v14, spr.
// Parameter keys (complex as number or [re, im]): k; theta0; lambda4; phi,
// psi, xi; alpha, beta, j0; Lambda, J; spr wants tau3, theta0 and an
// "entries" table [[row, col, re, im], ...].
ResolvedModel resolve_model(const std::string& name, const json& params);

// {"model": name, "params": {...}, "entries": [...]} from a file.
ResolvedModel load_model_spec(const std::string& path);

// Deterministic single-entry corruption of an R-matrix model (test hook).
RMatrixModel mutate_model(const RMatrixModel& model, uint64_t seed);

}  // namespace ybe

#endif
