#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ethde/evolve.hpp"
#include "ethde/models.hpp"

using namespace ethde;

namespace {

struct System {
  HermitianMatrix H, O;
  Eigensystem eig;
  EigenbasisObservable obs;
};

System build(ModelKind kind, int L = 0, double B = 1.0) {
  ModelSpec m;
  m.kind = kind;
  if (kind == ModelKind::single_spin)
    m.params = {{"B", B}};
  else
    m.params = {{"L", double(L)}, {"J", 1.0}, {"h_x", 1.05}, {"h_z", 0.5}};
  auto H = build_hamiltonian(m);
  auto O = build_observable(m, H);
  auto eig = diagonalize(H);
  auto obs = to_eigenbasis(O, eig, 1);
  return {std::move(H), std::move(O), std::move(eig), std::move(obs)};
}

}  // namespace

TEST_CASE("kick unitary closed form on the single spin") {
  auto sys = build(ModelKind::single_spin);
  auto U0 = kick_evolve(sys.H, sys.O, 0.0);
  CHECK((U0.mat() - MatrixC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  double lam = 0.6;
  auto U = kick_evolve(sys.H, sys.O, lam);
  MatrixC expect = std::cos(lam) * MatrixC::Identity(2, 2) -
                   Complex(0, 1) * std::sin(lam) * sys.O.mat();
  CHECK((U.mat() - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("exact kick energies on the single spin") {
  double B = 1.0, lam = 0.4;
  auto sys = build(ModelKind::single_spin, 0, B);
  KickOperator kick(sys.obs);

  // ground state: dE = 2 B sin^2(lambda), hand rotation of sigma_z about x
  auto de = delta_e_kick(kick, lam, {0});
  CHECK(de(0) == doctest::Approx(2 * B * std::sin(lam) * std::sin(lam))
                     .epsilon(1e-12));

  // normalized thermal mixture: B tanh(beta B)(1 - cos 2 lambda)
  double beta = 0.8;
  auto th = make_thermal(sys.eig, beta);
  CHECK(delta_e_kick_state(kick, lam, th) ==
        doctest::Approx(B * std::tanh(beta * B) * (1 - std::cos(2 * lam)))
            .epsilon(1e-12));

  // dense route agrees with the thin per-state route
  auto U = kick_evolve(sys.H, sys.O, lam);
  CHECK(delta_e_exact(U, make_eigenstate(sys.eig, 0), sys.H, sys.eig) ==
        doctest::Approx(de(0)).epsilon(1e-12));
  CHECK(delta_e_exact(U, th, sys.H, sys.eig) ==
        doctest::Approx(delta_e_kick_state(kick, lam, th)).epsilon(1e-12));
}

TEST_CASE("commutator-form kick response closed forms") {
  double B = 1.0, beta = 1.0;
  auto sys = build(ModelKind::single_spin, 0, B);
  VectorR raw(2);
  for (int n = 0; n < 2; ++n)
    raw(n) = std::exp(-beta * sys.eig.energies(n));  // unnormalized weights

  for (double lam : {0.2, 0.9, 1.6, 2.0}) {
    double closed = 4 * B * lam * std::sinh(beta * B) * std::sin(2 * lam);
    CHECK(kick_commutator_response(sys.obs, lam, raw) ==
          doctest::Approx(closed).epsilon(1e-12));
  }
  // zero of the closed form at lambda = pi/2
  CHECK(std::abs(kick_commutator_response(sys.obs, M_PI / 2, raw)) < 1e-12);
  // strong kick at beta > 0 can extract energy
  CHECK(kick_commutator_response(sys.obs, 2.0, raw) < 0);
}

TEST_CASE("maximally mixed state never changes energy") {
  auto sys = build(ModelKind::ising_chain, 6);
  auto mm = make_maximally_mixed(sys.eig);
  KickOperator kick(sys.obs);
  double scale = std::max(std::abs(sys.eig.energies(0)),
                          std::abs(sys.eig.energies(sys.eig.dim() - 1)));
  CHECK(std::abs(delta_e_kick_state(kick, 0.8, mm)) <= 1e-10 * scale);
  CHECK(std::abs(delta_e_pulse_state(sys.obs, Pulse::hann(0.3, 1.0), mm)) <=
        1e-10 * scale);
}

TEST_CASE("null pulse conserves energy and the propagator stays unitary") {
  auto sys = build(ModelKind::ising_chain, 6);
  std::vector<Eigen::Index> states = {0, 10, 30};
  auto ev = pulse_evolve(sys.obs, Pulse::hann(0.0, 5.0), states);
  for (Eigen::Index j = 0; j < ev.delta_e.size(); ++j)
    CHECK(std::abs(ev.delta_e(j)) < 1e-10);
  // norm drift over all the accumulated steps
  for (Eigen::Index j = 0; j < ev.columns.cols(); ++j)
    CHECK(std::abs(ev.columns.col(j).norm() - 1.0) < 1e-8);
}

TEST_CASE("strang splitting is second order in dt") {
  auto sys = build(ModelKind::ising_chain, 6);
  auto pulse = Pulse::hann(0.5, 1.0);
  std::vector<Eigen::Index> states = {12};

  EvolutionConfig ref_cfg{0.0005};
  double ref = pulse_evolve(sys.obs, pulse, states, ref_cfg).delta_e(0);
  double e_coarse =
      std::abs(pulse_evolve(sys.obs, pulse, states, {0.008}).delta_e(0) - ref);
  double e_half =
      std::abs(pulse_evolve(sys.obs, pulse, states, {0.004}).delta_e(0) - ref);
  CHECK(e_coarse / e_half >= 3.5);
}

TEST_CASE("narrow pulse approaches the kick limit") {
  auto sys = build(ModelKind::ising_chain, 8);
  double area = 0.2;
  KickOperator kick(sys.obs);
  double kick_de = delta_e_kick(kick, area, {40})(0);

  // hann of support s and amplitude 2 area / s has the same integral
  double s = 0.05;
  auto pulse = Pulse::hann(2 * area / s, s);
  double pulse_de =
      pulse_evolve(sys.obs, pulse, {40}, {0.0005}).delta_e(0);
  CHECK(std::abs(pulse_de - kick_de) / std::abs(kick_de) < 0.02);
}

TEST_CASE("stability gate rejects oversized steps") {
  auto sys = build(ModelKind::ising_chain, 6);
  EvolutionConfig cfg{1.0};  // dt ||H|| far above the bound
  CHECK_THROWS_AS(pulse_evolve(sys.obs, Pulse::hann(0.1, 2.0), {0}, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(EvolutionConfig{}.resolve_dt(10.0, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(delta_e_kick(KickOperator(sys.obs), 0.1, {9999}),
                  std::invalid_argument);
}
