#include "qrm2/observables.hpp"

#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <random>

using namespace qrm2;

namespace {

StateVector basis_state(int q, int n, int fock_dim) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4 * fock_dim);
  amps[q * fock_dim + n] = 1.0;
  return StateVector(std::move(amps), 4, fock_dim);
}

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix2cd m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return Eigen::HouseholderQR<Eigen::Matrix2cd>(m).householderQ();
}

Eigen::Matrix4cd bell_density() {
  Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  return phi * phi.adjoint();
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("sector embedding slot layout") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(6);
  amps[0] = 0.6;   // s0, n=0
  amps[4] = 0.8;   // s1, n=1
  const StateVector sector(std::move(amps), 2, 3);
  const auto plus = embed_sector_state(sector, SectorLabel::Plus);
  CHECK(std::abs(plus.amplitudes[0 * 3 + 0] - 0.6) < 1e-15);   // uu
  CHECK(std::abs(plus.amplitudes[3 * 3 + 1] - 0.8) < 1e-15);   // dd
  CHECK(plus.amplitudes.segment(3, 6).norm() == 0.0);          // ud, du empty
  const auto minus = embed_sector_state(sector, SectorLabel::Minus);
  CHECK(std::abs(minus.amplitudes[1 * 3 + 0] - 0.6) < 1e-15);  // ud
  CHECK(std::abs(minus.amplitudes[2 * 3 + 1] - 0.8) < 1e-15);  // du
  CHECK(std::abs(minus.norm() - 1.0) < 1e-15);
  CHECK_THROWS_AS(embed_sector_state(plus, SectorLabel::Plus), std::invalid_argument);
}

TEST_CASE("partial trace of product and boson-entangled states") {
  const auto uu = basis_state(0, 0, 4);
  const auto rho_uu = partial_trace_boson(uu);
  CHECK((rho_uu.rho - Eigen::Matrix4cd{{1, 0, 0, 0},
                                       {0, 0, 0, 0},
                                       {0, 0, 0, 0},
                                       {0, 0, 0, 0}}).cwiseAbs().maxCoeff() < 1e-15);
  rho_uu.validate();

  // (|uu,0> + |dd,0>)/sqrt(2): boson factors identical, coherences survive
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(16);
  amps[0 * 4 + 0] = 1.0 / std::sqrt(2.0);
  amps[3 * 4 + 0] = 1.0 / std::sqrt(2.0);
  const auto coherent = partial_trace_boson(StateVector(std::move(amps), 4, 4));
  CHECK(std::abs(coherent.rho(0, 3) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(coherent.rho(0, 0) - Complex(0.5, 0.0)) < 1e-15);

  // (|uu,0> + |dd,1>)/sqrt(2): orthogonal boson factors erase the coherence
  Eigen::VectorXcd amps2 = Eigen::VectorXcd::Zero(16);
  amps2[0 * 4 + 0] = 1.0 / std::sqrt(2.0);
  amps2[3 * 4 + 1] = 1.0 / std::sqrt(2.0);
  const auto dephased = partial_trace_boson(StateVector(std::move(amps2), 4, 4));
  CHECK(std::abs(dephased.rho(0, 3)) < 1e-15);
  CHECK(std::abs(dephased.rho(0, 0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(dephased.rho(3, 3) - Complex(0.5, 0.0)) < 1e-15);

  // (|uu,0> + i|dd,0>)/sqrt(2): <uu|rho|dd> = c_uu conj(c_dd) = -i/2
  Eigen::VectorXcd amps3 = Eigen::VectorXcd::Zero(16);
  amps3[0 * 4 + 0] = 1.0 / std::sqrt(2.0);
  amps3[3 * 4 + 0] = Complex(0.0, 1.0 / std::sqrt(2.0));
  const auto phased = partial_trace_boson(StateVector(std::move(amps3), 4, 4));
  CHECK(std::abs(phased.rho(0, 3) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(phased.rho(3, 0) - Complex(0.0, 0.5)) < 1e-15);

  CHECK_THROWS_AS(partial_trace_boson(StateVector(Eigen::VectorXcd::Ones(6) / std::sqrt(6.0), 2, 3)),
                  std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  TwoQubitDensity bad;
  bad.rho = bell_density();
  bad.rho(0, 1) = Complex(0.2, 0.1);  // breaks hermiticity
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  TwoQubitDensity off_trace;
  off_trace.rho = 1.5 * bell_density();
  CHECK_THROWS_AS(off_trace.validate(), std::invalid_argument);

  TwoQubitDensity negative;
  negative.rho = Eigen::Vector4cd(1.5, -0.5, 0.0, 0.0).asDiagonal();
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("concurrence of bell, product and werner states") {
  TwoQubitDensity bell;
  bell.rho = bell_density();
  CHECK(concurrence(bell) == doctest::Approx(1.0).epsilon(1e-12));

  TwoQubitDensity product;
  product.rho = Eigen::Vector4cd(1.0, 0.0, 0.0, 0.0).asDiagonal();
  CHECK(concurrence(product) == doctest::Approx(0.0).epsilon(1e-12));

  // Werner state p|phi+><phi+| + (1-p) I/4: C = max(0, (3p-1)/2)
  for (double p : {0.9, 0.5, 1.0 / 3.0, 0.1}) {
    TwoQubitDensity werner;
    werner.rho = p * bell_density() +
                 (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity();
    const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
    CHECK(std::abs(concurrence(werner) - expected) < 1e-10);
  }
}

TEST_CASE("concurrence is invariant under local unitaries") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    // random rank-2 mixture of pure states
    Eigen::Vector4cd v1, v2;
    for (int i = 0; i < 4; ++i) {
      v1[i] = Complex(normal(rng), normal(rng));
      v2[i] = Complex(normal(rng), normal(rng));
    }
    v1.normalize();
    v2.normalize();
    const double w = 0.3;
    TwoQubitDensity rho;
    rho.rho = w * v1 * v1.adjoint() + (1.0 - w) * v2 * v2.adjoint();

    const Eigen::Matrix4cd u = Eigen::kroneckerProduct(random_unitary(rng), random_unitary(rng));
    TwoQubitDensity rotated;
    rotated.rho = u * rho.rho * u.adjoint();
    CHECK(std::abs(concurrence(rotated) - concurrence(rho)) < 1e-10);
  }
}

TEST_CASE("magnetization moments") {
  CHECK(magnetization(basis_state(0, 0, 3)).mean == doctest::Approx(1.0));
  CHECK(magnetization(basis_state(0, 0, 3)).mean_square == doctest::Approx(1.0));
  CHECK(magnetization(basis_state(1, 1, 3)).mean == doctest::Approx(0.0));
  CHECK(magnetization(basis_state(1, 1, 3)).mean_square == doctest::Approx(0.0));
  CHECK(magnetization(basis_state(3, 2, 3)).mean == doctest::Approx(-1.0));

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(12);
  amps[0] = std::sqrt(0.25);       // uu
  amps[3 * 3 + 0] = std::sqrt(0.75);  // dd
  const StateVector mix(std::move(amps), 4, 3);
  CHECK(magnetization(mix).mean == doctest::Approx(0.25 - 0.75).epsilon(1e-14));
  CHECK(magnetization(mix).mean_square == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("photon number and fidelities") {
  CHECK(mean_photon(basis_state(2, 3, 5)) == doctest::Approx(3.0).epsilon(1e-14));

  const auto a = basis_state(0, 0, 3);
  const auto b = basis_state(0, 1, 3);
  CHECK(state_fidelity(a, a) == doctest::Approx(1.0));
  CHECK(state_fidelity(a, b) == doctest::Approx(0.0));

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(12);
  amps[0] = std::sqrt(0.3);
  amps[1] = Complex(0.0, std::sqrt(0.7));
  const StateVector c(std::move(amps), 4, 3);
  CHECK(state_fidelity(a, c) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(subspace_fidelity({a, b}, c) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(subspace_fidelity({b}, c) == doctest::Approx(0.7).epsilon(1e-13));

  CHECK_THROWS_AS(state_fidelity(a, basis_state(0, 0, 4)), std::invalid_argument);
  CHECK_THROWS_AS(subspace_fidelity({}, a), std::invalid_argument);
}

}  // TEST_SUITE
