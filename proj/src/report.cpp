#include "ybe/report.hpp"

namespace ybe {

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const CurvePoint& p) {
  return json{{"a", to_json(p.a)}, {"b", to_json(p.b)}};
}

json to_json(const TwistSpec& t) {
  json j;
  if (t.gauge_g) j["gauge_g"] = to_json(Mat(*t.gauge_g));
  j["grading_alpha"] = to_json(t.grading_alpha);
  j["telescope_a"] = json::array({to_json(t.telescope_a(0)), to_json(t.telescope_a(1)),
                                  to_json(t.telescope_a(2))});
  j["identity_shift"] = to_json(t.identity_shift);
  j["sz_shift"] = to_json(t.sz_shift);
  return j;
}

json to_json(const CheckResult& c) {
  return json{{"check", c.name},          {"samples", c.sample_count},
              {"max_residual", c.max_residual}, {"tolerance", c.tolerance},
              {"pass", c.pass},           {"worst_point", c.worst_point}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return json{{"model", r.model},
              {"seed", r.seed},
              {"checks", checks},
              {"pass", r.all_pass()}};
}

json to_json(const ObstructionReport& r) {
  return json{{"model", r.model},
              {"order", r.order},
              {"search_order", r.search_order},
              {"seed", r.seed},
              {"search", r.search_note},
              {"residual_by_order", r.residual_by_order},
              {"order_failed", r.order_failed},
              {"twist_at_optimum", to_json(r.twist_at_optimum)},
              {"optimum", r.optimum},
              {"start_values", r.start_values},
              {"verdict", r.verdict}};
}

json to_json(const UniReconstruction& r) {
  json norms = json::array();
  for (const Mat& c : r.series.coeffs) norms.push_back(sup_norm(c));
  return json{{"order", r.series.order()},
              {"norm_index", r.series.norm_index},
              {"norm_shift", to_json(r.series.norm_shift)},
              {"coefficient_max_norms", norms},
              {"residual_by_order", r.residual_by_order},
              {"order_failed", r.order_failed},
              {"ok", r.ok}};
}

json to_json(const AlgebraFit& f) {
  const char* family = f.family == AlgebraFit::Family::Hecke ? "hecke"
                       : f.family == AlgebraFit::Family::TL  ? "temperley-lieb"
                                                             : "bmw";
  json residuals;
  for (const auto& [k, v] : f.relation_residuals) residuals[k] = v;
  return json{{"family", family},
              {"ok", f.ok},
              {"alpha_scale", to_json(f.alpha_scale)},
              {"beta_shift", to_json(f.beta_shift)},
              {"xi", to_json(f.xi)},
              {"a", to_json(f.a)},
              {"relation_residuals", residuals},
              {"message", f.message}};
}

json to_json(const SetCompareReport& r) {
  return json{{"ok", r.ok}, {"max_distance", r.max_distance}, {"message", r.message}};
}

json to_json(const CompletenessReport& r) {
  json sectors = json::array();
  for (const auto& s : r.sectors) {
    json unreached = json::array();
    for (const cplx& e : s.unreached) unreached.push_back(to_json(e));
    sectors.push_back(json{{"sector", s.sector},
                           {"dimension", s.dimension},
                           {"reached", s.reached},
                           {"unreached", unreached}});
  }
  return json{{"sites", r.sites},
              {"sectors", sectors},
              {"total_unreached", r.total_unreached}};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

json report_envelope(const std::string& command, const json& config, uint64_t seed) {
  return json{{"schema", kSchema},
              {"version", kVersion},
              {"command", command},
              {"config", config},
              {"seed", seed}};
}

}  // namespace ybe
