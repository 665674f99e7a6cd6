#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ethde/models.hpp"
#include "ethde/response.hpp"

using namespace ethde;

namespace {

struct System {
  Eigensystem eig;
  EigenbasisObservable obs;
};

System make(ModelKind kind, int L = 0, double B = 1.0) {
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
  return {std::move(eig), std::move(obs)};
}

}  // namespace

TEST_CASE("two-level spectral function has the exact lehmann weights") {
  double B = 1.0, beta = 0.8;
  auto sys = make(ModelKind::single_spin, 0, B);
  auto th = make_thermal(sys.eig, beta);
  auto grid = make_symmetric_grid(4.0, 400);
  auto A = spectral_function(sys.obs, th, grid, 0.05);

  REQUIRE(A.lehmann_omegas.size() == 2);  // +-2B
  CHECK(A.lehmann_omegas[0] == doctest::Approx(-2 * B));
  CHECK(A.lehmann_omegas[1] == doctest::Approx(2 * B));
  // weight at +2B: 2 pi (p_ground - p_excited) |<0|sx|1>|^2 = 2 pi tanh(beta B)
  CHECK(A.lehmann_weights[1] ==
        doctest::Approx(2 * M_PI * std::tanh(beta * B)).epsilon(1e-12));
  CHECK(A.max_transition_frequency() == doctest::Approx(2 * B));
}

TEST_CASE("two-level linear response closed form") {
  // delta kick: dE_LR = 2 B lambda^2 tanh(beta B), the small-lambda limit of
  // the exact kick value B tanh(beta B)(1 - cos 2 lambda)
  double B = 1.0, beta = 0.8, lam = 0.05;
  auto sys = make(ModelKind::single_spin, 0, B);
  auto th = make_thermal(sys.eig, beta);
  auto A = spectral_function(sys.obs, th, make_symmetric_grid(4.0, 2000), 0.05);
  auto de = delta_e_linear(A, Pulse::delta_kick(lam));
  double closed = 2 * B * lam * lam * std::tanh(beta * B);
  CHECK(de.lehmann == doctest::Approx(closed).epsilon(1e-12));
  CHECK(de.broadened == doctest::Approx(closed).epsilon(1e-3));

  double exact = B * std::tanh(beta * B) * (1 - std::cos(2 * lam));
  CHECK(de.lehmann == doctest::Approx(exact).epsilon(2 * lam * lam));
}

TEST_CASE("spectral function symmetry and positivity on the chaotic chain") {
  auto sys = make(ModelKind::ising_chain, 8);
  auto th = make_thermal(sys.eig, 0.5);
  double w = sys.eig.spectral_width();
  auto grid = make_symmetric_grid(w + 1.0, 1024);
  auto A = spectral_function(sys.obs, th, grid, 0.02 * w);

  // exact antisymmetry on the symmetric grid
  size_t n = grid.size();
  for (size_t i = 0; i < n; ++i)
    CHECK(std::abs(A.values[i] + A.values[n - 1 - i]) <= 1e-10);

  // lehmann route: every positive-frequency weight positive at beta > 0
  for (size_t i = 0; i < A.lehmann_omegas.size(); ++i)
    if (A.lehmann_omegas[i] > 0) CHECK(A.lehmann_weights[i] > 0);

  // retarded green's function parity
  auto G = retarded_green_grid(A);
  for (size_t i = 0; i < n; ++i) {
    CHECK(std::abs(G[i].imag() + G[n - 1 - i].imag()) <= 1e-9);
    CHECK(std::abs(G[i].real() - G[n - 1 - i].real()) <= 1e-9);
  }
  // pointwise evaluator agrees with the grid evaluator
  Complex g = retarded_green(A, grid[700]);
  CHECK(std::abs(g - G[700]) < 1e-10);
}

TEST_CASE("infinite temperature kills the response") {
  auto sys = make(ModelKind::ising_chain, 6);
  auto mm = make_maximally_mixed(sys.eig);
  double w = sys.eig.spectral_width();
  auto A = spectral_function(sys.obs, mm, make_symmetric_grid(w + 1.0, 512),
                             0.02 * w);
  CHECK(A.lehmann_omegas.empty());  // all occupation differences vanish
  auto de = delta_e_linear(A, Pulse::delta_kick(0.3));
  CHECK(std::abs(de.lehmann) <= 1e-12);
  CHECK(std::abs(de.broadened) <= 1e-12);
}

TEST_CASE("negative temperature absorbs negative energy") {
  auto sys = make(ModelKind::ising_chain, 6);
  auto th = make_thermal(sys.eig, -0.5);
  double w = sys.eig.spectral_width();
  auto A = spectral_function(sys.obs, th, make_symmetric_grid(1.2 * w, 1024),
                             0.02 * w);
  auto de = delta_e_linear(A, Pulse::hann(0.1, 1.0));
  CHECK(de.lehmann < 0);
  CHECK(de.broadened < 0);
}

TEST_CASE("input validation") {
  auto sys = make(ModelKind::single_spin);
  auto th = make_thermal(sys.eig, 0.5);
  CHECK_THROWS_AS(
      spectral_function(sys.obs, make_eigenstate(sys.eig, 0),
                        make_symmetric_grid(4.0, 64), 0.05),
      std::invalid_argument);
  CHECK_THROWS_AS(
      spectral_function(sys.obs, th, make_symmetric_grid(4.0, 64), -1.0),
      std::invalid_argument);
  // grid too narrow for the spectral support
  auto A = spectral_function(sys.obs, th, make_symmetric_grid(1.0, 64), 0.05);
  CHECK_THROWS_AS(delta_e_linear(A, Pulse::delta_kick(0.1)),
                  std::invalid_argument);
}
