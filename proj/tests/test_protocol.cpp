#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "qdot/protocol.hpp"
#include "test_util.hpp"

using namespace qdot;
using namespace qdot::protocol;
using std::numbers::pi;

namespace {
constexpr std::array<int, 2> kQ01 = {0, 1};
constexpr std::array<int, 1> kQ0 = {0};
constexpr double kLambda1mT = 1157.6;
constexpr double kBathN = 1e6;
}  // namespace

TEST_CASE("recovery unitaries match their closed forms") {
  // Products of the pulse sequences, phases included.
  const Unitary u00 = recovery_unitary(0, 0);
  CHECK(std::abs(u00(0, 0) - cplx(0.0, -1.0)) < 1e-14);
  CHECK(std::abs(u00(1, 1) - 1.0) < 1e-14);
  CHECK(std::abs(u00(0, 1)) < 1e-14);
  const Unitary u01 = recovery_unitary(0, 1);
  CHECK(std::abs(u01(0, 1) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(u01(1, 0) + 1.0) < 1e-14);
  const Unitary u10 = recovery_unitary(1, 0);
  CHECK(std::abs(u10(0, 1) - 1.0) < 1e-14);
  CHECK(std::abs(u10(1, 0) - cplx(0.0, -1.0)) < 1e-14);
  const Unitary u11 = recovery_unitary(1, 1);
  CHECK(std::abs(u11(0, 0) + 1.0) < 1e-14);
  CHECK(std::abs(u11(1, 1) - cplx(0.0, 1.0)) < 1e-14);
}

TEST_CASE("recovery plans read right to left") {
  const RecoveryPlan p00 = recovery_plan(0, 0);
  CHECK(p00.pulses[0].axis == Axis::x);
  CHECK(p00.pulses[0].sign == Sign::minus);
  CHECK(p00.pulses[1].axis == Axis::y);
  CHECK(p00.pulses[1].sign == Sign::plus);
  CHECK(p00.pulses[2].axis == Axis::x);
  CHECK(p00.pulses[2].sign == Sign::plus);
  const RecoveryPlan p10 = recovery_plan(1, 0);
  CHECK(p10.pulses[1].sign == Sign::minus);
  const RecoveryPlan p11 = recovery_plan(1, 1);
  CHECK(p11.pulses[2].sign == Sign::minus);
}

TEST_CASE("ideal pipeline teleports exactly") {
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = test::uniform(0.0, pi);
    const double phi = test::uniform(0.0, 2 * pi);
    const IdealRun run = run_ideal(theta, phi);
    const PureState psi = bloch_state(theta, phi);
    CHECK(std::abs(run.record.total_probability() - 1.0) < 1e-12);
    for (const Outcome& o : run.record.outcomes) {
      CHECK(std::abs(o.p - 0.25) < 1e-12);
      const DensityMatrix recovered = apply_unitary(o.sigma, recovery_unitary(o.j, o.k), kQ0);
      CHECK(fidelity(psi, recovered) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("theta = 0 teleports |0> on every branch") {
  const IdealRun run = run_ideal(0.0, 0.0);
  for (const Outcome& o : run.record.outcomes) {
    const DensityMatrix recovered = apply_unitary(o.sigma, recovery_unitary(o.j, o.k), kQ0);
    CHECK(fidelity(bloch_state(0.0, 0.0), recovered) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("step-2 amplitudes match the published expansion") {
  const double theta = 1.9, phi = 0.6;
  const cplx a = std::cos(theta / 2);
  const cplx b = std::polar(std::sin(theta / 2), phi);
  const IdealRun run = run_ideal(theta, phi);
  const cplx pref = cplx(0.0, 0.5) * std::polar(1.0, pi / 8);
  const cplx one_mi(1.0, -1.0);
  const std::array<cplx, 8> expect = {pref * cplx(0, 1) * a, pref * b, -pref * one_mi * b, 0.0,
                                      0.0, pref * one_mi * a, -pref * a, pref * cplx(0, -1) * b};
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(run.gamma2.amplitude(i) - expect[static_cast<std::size_t>(i)]) < 1e-14);
  }
}

TEST_CASE("step-3 state is the branch decomposition of the recovery table") {
  const double theta = 2.2, phi = 4.0;
  const IdealRun run = run_ideal(theta, phi);
  const PureState psi = bloch_state(theta, phi);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Unitary udag = recovery_unitary(j, k).dagger();
      const PureState v = apply_unitary(psi, udag, kQ0);
      for (int m = 0; m < 2; ++m) {
        const cplx got = run.gamma3.amplitude(4 * j + 2 * k + m);
        const cplx want = cplx(0.0, 0.5) * v.amplitude(m);
        CHECK(std::abs(got - want) < 1e-13);
      }
    }
  }
}

TEST_CASE("noisy pipeline at t1 = 0 leaves step 1 untouched") {
  const NoisyRun run = run_noisy(1.2, 0.8, 0.0, kLambda1mT, kBathN);
  CHECK(test::max_abs_diff(run.gamma2, DensityMatrix::from_pure(run.gamma1)) < 1e-13);
  CHECK(std::abs(run.record.total_probability() - 1.0) < 1e-12);
}

TEST_CASE("probabilities stay normalised under noise") {
  const double lambda = 6945.6;
  const NoisyRun run = run_noisy(0.7, 5.1, pi / lambda, lambda, kBathN);
  CHECK(std::abs(run.record.total_probability() - 1.0) < 1e-12);
  for (const Outcome& o : run.record.outcomes) {
    CHECK(std::abs(o.sigma.trace() - 1.0) < 1e-12);
    CHECK(o.p >= -1e-12);
  }
}

TEST_CASE("ideal mode reproduces the pure pipeline") {
  const double theta = 0.9, phi = 2.8;
  const NoisyRun noisy = run_noisy(theta, phi, 1.0e-3, kLambda1mT, kBathN, StepMode::ideal);
  const IdealRun ideal = run_ideal(theta, phi);
  CHECK(test::max_abs_diff(noisy.gamma3, DensityMatrix::from_pure(ideal.gamma3)) < 1e-12);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(noisy.record.outcomes[static_cast<std::size_t>(i)].p -
                   ideal.record.outcomes[static_cast<std::size_t>(i)].p) < 1e-12);
  }
}

TEST_CASE("pipeline is linear in the input density matrix") {
  const double t1 = 1.5e-3;
  const std::array<std::array<double, 2>, 2> inputs = {{{0.9, 0.4}, {2.1, 3.7}}};
  const std::array<double, 2> weights = {0.3, 0.7};

  // weighted sum of unnormalised branch blocks from pure-state runs
  std::array<DensityMatrix, 4> mix_branches = {
      DensityMatrix::raw(1, {0.0, 0.0, 0.0, 0.0}), DensityMatrix::raw(1, {0.0, 0.0, 0.0, 0.0}),
      DensityMatrix::raw(1, {0.0, 0.0, 0.0, 0.0}), DensityMatrix::raw(1, {0.0, 0.0, 0.0, 0.0})};
  for (int s = 0; s < 2; ++s) {
    const NoisyRun run =
        run_noisy(inputs[static_cast<std::size_t>(s)][0], inputs[static_cast<std::size_t>(s)][1],
                  t1, kLambda1mT, kBathN);
    for (int i = 0; i < 4; ++i) {
      const Outcome& o = run.record.outcomes[static_cast<std::size_t>(i)];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          mix_branches[static_cast<std::size_t>(i)].at(r, c) +=
              weights[static_cast<std::size_t>(s)] * o.p * o.sigma(r, c);
    }
  }

  // the same mixture pushed through the maps by hand
  std::vector<cplx> mix0(64, 0.0);
  for (int s = 0; s < 2; ++s) {
    const PureState g0 = tensor(
        bloch_state(inputs[static_cast<std::size_t>(s)][0], inputs[static_cast<std::size_t>(s)][1]),
        bell_singlet());
    const DensityMatrix d0 = DensityMatrix::from_pure(g0);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c)
        mix0[static_cast<std::size_t>(r) * 8 + c] += weights[static_cast<std::size_t>(s)] * d0(r, c);
  }
  DensityMatrix rho = DensityMatrix::raw(3, std::move(mix0));
  rho = apply_unitary(rho, sqrt_swap(), kQ01);
  const decoherence::ChannelParams cp = decoherence::channel_params(t1, kLambda1mT, kBathN);
  const decoherence::ZeroFieldParams zp = decoherence::zero_field_params(t1, kBathN);
  rho = apply_channel(rho, decoherence::make_channel(Axis::x, cp, Sign::plus), 0);
  rho = apply_channel(rho, decoherence::make_channel(zp), 1);
  rho = apply_channel(rho, decoherence::make_channel(zp), 2);
  rho = apply_unitary(rho, sqrt_swap(), kQ01);
  const MeasurementRecord record = measure(rho);
  for (int i = 0; i < 4; ++i) {
    const Outcome& o = record.outcomes[static_cast<std::size_t>(i)];
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(o.p * o.sigma(r, c) - mix_branches[static_cast<std::size_t>(i)](r, c)) < 1e-12);
  }
}

TEST_CASE("branch states are positive while the maps are CP") {
  const double lambda = 2315.2;
  const decoherence::ChannelParams cp = decoherence::channel_params(1.1e-3, lambda, kBathN);
  REQUIRE(decoherence::cp_check(decoherence::make_channel(Axis::x, cp, Sign::plus)).is_cp);
  const NoisyRun run = run_noisy(1.3, 0.2, 1.1e-3, lambda, kBathN);
  for (const Outcome& o : run.record.outcomes) {
    std::vector<cplx> scaled(4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) scaled[static_cast<std::size_t>(2 * r + c)] = o.p * o.sigma(r, c);
    CHECK(DensityMatrix::raw(1, scaled).min_eigenvalue() >= -1e-9);
  }
}

TEST_CASE("recover") {
  const DensityMatrix sigma = test::random_density(1);
  SUBCASE("zero duration is the identity") {
    const DensityMatrix out = recover(sigma, 1, 0, 0.0, kLambda1mT, kBathN);
    CHECK(test::max_abs_diff(out, sigma) < 1e-13);
  }
  SUBCASE("ideal mode conjugates by the table unitary") {
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const DensityMatrix out = recover(sigma, j, k, 0.5, kLambda1mT, kBathN, StepMode::ideal);
        const DensityMatrix expect = apply_unitary(sigma, recovery_unitary(j, k), kQ0);
        CHECK(test::max_abs_diff(out, expect) < 1e-13);
      }
  }
  SUBCASE("ideal recover completes the ideal pipeline") {
    const IdealRun run = run_ideal(1.7, 2.9);
    const PureState psi = bloch_state(1.7, 2.9);
    for (const Outcome& o : run.record.outcomes) {
      const DensityMatrix out = recover(o.sigma, o.j, o.k, 1.0, kLambda1mT, kBathN, StepMode::ideal);
      CHECK(fidelity(psi, out) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate outcomes are flagged, not divided by") {
  std::vector<cplx> m(64, 0.0);
  m[0] = 1.0;  // |000><000|
  const MeasurementRecord record = measure(DensityMatrix::raw(3, std::move(m)));
  CHECK(record.outcomes[0].p == doctest::Approx(1.0));
  CHECK_FALSE(record.outcomes[0].degenerate);
  for (int i = 1; i < 4; ++i) {
    CHECK(record.outcomes[static_cast<std::size_t>(i)].degenerate);
    CHECK(test::max_abs_diff(record.outcomes[static_cast<std::size_t>(i)].sigma,
                             DensityMatrix::maximally_mixed(1)) < 1e-15);
  }
}

TEST_CASE("measurement projectors are complete") {
  // the four branch blocks partition the 8-dimensional space exactly
  const DensityMatrix rho = test::random_density(3);
  const MeasurementRecord record = measure(rho);
  cplx total = 0.0;
  for (const Outcome& o : record.outcomes) total += o.p;
  CHECK(std::abs(total - rho.trace()) < 1e-13);
}
