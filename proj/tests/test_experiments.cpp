#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ethde/experiments.hpp"

using namespace ethde;

namespace {

ExperimentSpec chain_experiment(int L) {
  ExperimentSpec spec;
  spec.model.kind = ModelKind::ising_chain;
  spec.model.params = {{"L", double(L)}, {"J", 1.0}, {"h_x", 1.05}, {"h_z", 0.5}};
  // observable whose powers generate a non-degenerate series
  int c = L / 2;
  spec.model.observable.strings = {
      {{{c, PauliAxis::x}}, 1.0},
      {{{c, PauliAxis::z}}, 1.0},
      {{{c, PauliAxis::z}, {c + 1, PauliAxis::z}}, 1.0}};
  return spec;
}

}  // namespace

TEST_CASE("shortest round-trip float formatting") {
  for (double x : {0.1, 1.0 / 3.0, 12345.678, -2e-17, 0.0}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("single-spin kick study carries the closed-form column") {
  ExperimentSpec spec;
  spec.model.kind = ModelKind::single_spin;
  spec.model.params = {{"B", 1.0}};
  spec.state.mode = StateSelector::Mode::thermal;
  spec.state.beta = 1.0;
  spec.lambdas = {0.3, 1.0, 2.0};

  auto study = run_kick_study(spec);
  REQUIRE(study.rows.size() == 3);
  for (const auto& row : study.rows) {
    double closed =
        4 * row.lambda * std::sinh(1.0) * std::sin(2 * row.lambda);
    CHECK(row.de_operator_unnorm == doctest::Approx(closed).epsilon(1e-10));
    double exact = std::tanh(1.0) * (1 - std::cos(2 * row.lambda));
    CHECK(row.de_exact == doctest::Approx(exact).epsilon(1e-10));
  }
  // strong kick extracts energy in the operator-form convention
  CHECK(study.rows[2].de_operator_unnorm < 0);

  auto csv = kick_csv(study, spec.model.descriptor());
  CHECK(csv.find("de_operator_unnorm") != std::string::npos);
}

TEST_CASE("chaotic kick study emits sign statistics") {
  auto spec = chain_experiment(6);
  spec.state.count = 10;
  spec.lambdas = {0.2, 0.5};
  auto study = run_kick_study(spec);
  CHECK(study.rows.size() >= 10);
  CHECK(study.positive_fraction > 0.8);
  CHECK(study.mean > 0);
  CHECK(study.summary.at("samples").get<int>() ==
        static_cast<int>(study.rows.size()));
  for (const auto& row : study.rows) {
    CHECK(row.max_route_gap < 1e-8);
    CHECK(std::isfinite(row.r4));
  }
}

TEST_CASE("kick study is deterministic and cache coherent") {
  namespace fs = std::filesystem;
  auto spec = chain_experiment(6);
  spec.state.count = 6;
  spec.lambdas = {0.3};

  auto fresh = kick_csv(run_kick_study(spec), "tag");

  const std::string dir = "test_cache_dir";
  spec.cache_dir = dir;
  auto first = kick_csv(run_kick_study(spec), "tag");   // populates the cache
  auto cached = kick_csv(run_kick_study(spec), "tag");  // reads it back
  CHECK(first == fresh);
  CHECK(cached == fresh);  // bit-identical CSV
  CHECK(fs::exists(dir));
  fs::remove_all(dir);
}

TEST_CASE("response study ladder behaves linearly") {
  auto spec = chain_experiment(6);
  spec.state.mode = StateSelector::Mode::thermal;
  spec.state.beta = 0.5;
  spec.pulse = Pulse::hann(1.0, 1.0);
  spec.evolution.dt = 0.005;

  auto study = run_response_study(spec);
  REQUIRE(study.rungs.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(study.rungs[i].de_lr_lehmann > 0);
    CHECK(study.rungs[i].de_exact > 0);
    if (i > 0) {
      CHECK(study.rungs[i].amplitude ==
            doctest::Approx(0.5 * study.rungs[i - 1].amplitude));
      CHECK(study.rungs[i].rel_error_lehmann <=
            study.rungs[i - 1].rel_error_lehmann + 1e-12);
    }
  }
  CHECK(study.rungs[0].rel_error_lehmann < 0.15);

  auto csv = response_csv(study);
  CHECK(csv.find("rel_error_lehmann") != std::string::npos);

  // non-thermal selector is rejected
  spec.state.mode = StateSelector::Mode::index;
  CHECK_THROWS_AS(run_response_study(spec), std::invalid_argument);
}

TEST_CASE("scaling study arity and output shape") {
  CHECK_THROWS_AS(run_scaling_study({8}, ""), std::invalid_argument);
  CHECK_THROWS_AS(run_scaling_study({8, 10}, ""), std::invalid_argument);

  auto study = run_scaling_study({6, 7, 8}, "", 8);
  CHECK(study.chaotic.size() == 3);
  CHECK(study.integrable.size() == 3);
  for (const auto& p : study.chaotic) {
    CHECK(p.median_r4 > 0);
    CHECK(std::isfinite(p.median_r4));
  }
  CHECK(std::isfinite(study.chaotic_slope));
  auto csv = scaling_csv(study);
  CHECK(csv.find("chaotic,6,64") != std::string::npos);
}

TEST_CASE("experiment spec json round trip keeps the hash stable") {
  auto spec = chain_experiment(6);
  spec.state.mode = StateSelector::Mode::thermal;
  spec.state.beta = 0.25;
  spec.pulse = Pulse::hann(0.4, 2.0);
  spec.lambdas = {0.1, 0.7};
  auto back = ExperimentSpec::from_json(spec.to_json());
  CHECK(back.content_hash() == spec.content_hash());
  CHECK(back.state.beta == 0.25);
  CHECK(back.lambdas == spec.lambdas);
}

TEST_CASE("atomic text writes") {
  const std::string path = "test_atomic_out.csv";
  write_text_atomic(path, "a,b\n1,2\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "a,b\n1,2\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}
