#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ybe/registry.hpp"
#include "ybe/report.hpp"
#include "ybe/tensor.hpp"
#include "ybe/verify.hpp"

using namespace ybe;

TEST_CASE("complex values round-trip as [re, im]") {
  const cplx z(1.25, -0.75);
  CHECK(complex_from_json(to_json(z)) == z);
  CHECK(complex_from_json(json(2.5)) == cplx(2.5, 0.0));
  CHECK_THROWS_AS(complex_from_json(json::array({1.0})), std::invalid_argument);
}

TEST_CASE("report envelope carries schema, version and seed") {
  json env = report_envelope("verify", json{{"model", "zf"}}, 77);
  CHECK(env["schema"] == "ybe-forge/1");
  CHECK(env["version"] == kVersion);
  CHECK(env["command"] == "verify");
  CHECK(env["seed"] == 77);
  CHECK(env["config"]["model"] == "zf");
}

TEST_CASE("model registry resolves the catalogue") {
  for (const char* name : {"zf", "ik"}) {
    ResolvedModel m = resolve_model(name, json{{"k", 2.0}});
    CHECK(m.has_rmatrix);
    CHECK(ice_rule_residual(m.h2) == 0.0);
  }
  ResolvedModel gb = resolve_model(
      "gb", json{{"phi", 1.1}, {"psi", 0.6}, {"xi", 0.9}});
  CHECK_FALSE(gb.has_rmatrix);
  CHECK(sup_norm(gb.h2 - gb_hamiltonian(1.1, 0.6, 0.9)) == 0.0);

  CHECK_THROWS_AS(resolve_model("nope", json::object()), std::invalid_argument);
  CHECK_THROWS_AS(resolve_model("zf", json::object()), std::invalid_argument);
}

TEST_CASE("spr requires an external entry table") {
  CHECK_THROWS_WITH_AS(resolve_model("spr", json{{"tau3", 1.0}, {"theta0", 1.0}}),
                       doctest::Contains("external input"), std::invalid_argument);

  json params{{"tau3", 1.0}, {"theta0", 1.0}};
  params["entries"] = json::array({json::array({1, 3, 0.5, 0.0}),
                                   json::array({3, 1, 0.25, -0.1})});
  ResolvedModel spr = resolve_model("spr", params);
  CHECK(spr.h2(1, 3) == cplx(0.5, 0.0));
  CHECK(spr.h2(3, 1) == cplx(0.25, -0.1));

  json bad = params;
  bad["entries"].push_back(json::array({0, 5, 1.0, 0.0}));  // ice-violating
  CHECK_THROWS_AS(resolve_model("spr", bad), std::invalid_argument);
}

TEST_CASE("model-spec files load") {
  const char* path = "test_model_spec_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"model": "v14", "params": {"xi": [2.0, 0.0]}})";
  }
  ResolvedModel m = load_model_spec(path);
  CHECK(m.name == "v14");
  CHECK(sup_norm(m.h2 - h14(2.0)) == 0.0);
  std::remove(path);

  CHECK_THROWS_AS(load_model_spec("does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("mutation changes exactly one entry deterministically") {
  auto zf = make_zf_model(2.0);
  RMatrixModel bad = mutate_model(zf, 123);
  RMatrixModel bad2 = mutate_model(zf, 123);
  Mat a = zf.braided(cplx(1.3), cplx(1.0));
  Mat b = bad.braided(cplx(1.3), cplx(1.0));
  Mat c = bad2.braided(cplx(1.3), cplx(1.0));
  int changed = 0;
  for (int r = 0; r < 9; ++r)
    for (int col = 0; col < 9; ++col)
      if (a(r, col) != b(r, col)) ++changed;
  CHECK(changed == 1);
  CHECK(sup_norm(b - c) == 0.0);
}

TEST_CASE("reports serialize deterministically for a fixed seed") {
  auto v17 = make_v17_2_model(cplx(0.3, 0.05));
  VerifyOptions opt;
  opt.samples = 6;
  opt.seed = 7;
  opt.transfer_samples = 0;
  const std::string a = to_json(verify_model(v17, opt)).dump();
  const std::string b = to_json(verify_model(v17, opt)).dump();
  CHECK(a == b);
}
