#include "ybe/registry.hpp"

#include <fstream>

#include "ybe/tensor.hpp"

namespace ybe {

namespace {

cplx get_param(const json& params, const std::string& key) {
  if (!params.contains(key))
    throw std::invalid_argument("missing model parameter '" + key + "'");
  return complex_from_json(params.at(key));
}

cplx get_param_or(const json& params, const std::string& key, cplx fallback) {
  if (!params.contains(key)) return fallback;
  return complex_from_json(params.at(key));
}

Mat entries_table(const json& entries) {
  Mat h = Mat::Zero(9, 9);
  for (const auto& row : entries) {
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("entries rows must be [row, col, re, im]");
    const int r = row[0].get<int>();
    const int c = row[1].get<int>();
    if (r < 0 || r > 8 || c < 0 || c > 8)
      throw std::invalid_argument("entries indices must lie in 0..8");
    h(r, c) = cplx(row[2].get<double>(), row[3].get<double>());
  }
  return h;
}

}  // namespace

ResolvedModel resolve_model(const std::string& name, const json& params) {
  ResolvedModel out;
  out.name = name;
  out.params_echo = params;

  const double extract_step = 4e-3;
  if (name == "zf") {
    out.rmodel = make_zf_model(get_param(params, "k"));
    out.has_rmatrix = true;
  } else if (name == "ik") {
    out.rmodel = make_ik_model(get_param(params, "k"));
    out.has_rmatrix = true;
  } else if (name == "v17_2") {
    const bool normalized = !params.contains("normalized") ||
                            params.at("normalized").get<bool>();
    out.rmodel = make_v17_2_model(get_param(params, "theta0"), normalized);
    out.has_rmatrix = true;
  } else if (name == "sb") {
    CurveSpec spec;
    spec.branch = CurveSpec::Branch::SB;
    spec.lambda4 = get_param(params, "lambda4");
    if (params.contains("conjugate_j") && params.at("conjugate_j").get<bool>())
      spec.j = std::conj(spec.j);
    out.rmodel = make_sb_model(spec);
    out.has_rmatrix = true;
  } else if (name == "gb") {
    const cplx phi = get_param(params, "phi");
    const cplx psi = get_param(params, "psi");
    const cplx xi = get_param(params, "xi");
    if (params.contains("upsilon"))
      out.h2 = gb_hamiltonian_fixed_upsilon(phi, psi, xi,
                                            get_param(params, "upsilon"),
                                            get_param_or(params, "J", default_gb_J()));
    else
      out.h2 = gb_hamiltonian(phi, psi, xi);
    return out;
  } else if (name == "mb0") {
    out.h2 = mb0_hamiltonian(get_param(params, "alpha"), get_param(params, "beta"),
                             get_param(params, "j0"));
    return out;
  } else if (name == "h17") {
    out.h2 = h17(get_param(params, "Lambda"), get_param(params, "J"));
    return out;
  } else if (name == "v14") {
    out.h2 = h14(get_param(params, "xi"));
    return out;
  } else if (name == "spr") {
    if (!params.contains("entries"))
      throw std::invalid_argument(
          "spr: the 9x9 entry table is an external input; supply it via a "
          "model-spec file with an \"entries\" field");
    out.h2 = entries_table(params.at("entries"));
    if (ice_rule_residual(out.h2) > 0)
      throw std::invalid_argument("spr: entries violate the ice rule");
    return out;
  } else {
    throw std::invalid_argument("unknown model '" + name + "'");
  }

  out.h2 = derivative_hamiltonian(out.rmodel, extract_step).h;
  return out;
}

ResolvedModel load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model-spec file " + path);
  json spec = json::parse(in);
  if (!spec.contains("model"))
    throw std::invalid_argument("model-spec file needs a \"model\" field");
  json params = spec.value("params", json::object());
  if (spec.contains("entries")) params["entries"] = spec.at("entries");
  return resolve_model(spec.at("model").get<std::string>(), params);
}

RMatrixModel mutate_model(const RMatrixModel& model, uint64_t seed) {
  // Off-diagonal slots of the 19-vertex pattern.
  static const int slots[10][2] = {{1, 3}, {3, 1}, {2, 4}, {4, 2}, {2, 6},
                                   {6, 2}, {4, 6}, {6, 4}, {5, 7}, {7, 5}};
  std::mt19937_64 rng(seed);
  const int pick = static_cast<int>(rng() % 10);
  RMatrixModel out = model;
  out.name = model.name + "+mutated";
  auto inner = model.braided;
  const int r = slots[pick][0], c = slots[pick][1];
  out.braided = [inner, r, c](const SpectralPoint& x, const SpectralPoint& y) {
    Mat m = inner(x, y);
    m(r, c) += 0.01 * std::max(1.0, sup_norm(m));
    return m;
  };
  return out;
}

}  // namespace ybe
