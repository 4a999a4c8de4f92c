#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qdot/bathsim.hpp"
#include "qdot/cerf.hpp"
#include "qdot/decoherence.hpp"
#include "test_util.hpp"

using namespace qdot;
using namespace qdot::decoherence;
using std::numbers::pi;

namespace {

struct ChannelParamsReference {
  double t, lambda, bath_n, r1, r2, w;
};
#include "data/channel_params_reference.inc"

// Raw composition of the published W expression through the complex error
// function; usable wherever the raw erf values stay representable. Dual
// route to the production path, which never forms the unscaled values.
std::complex<double> w_raw_complex(double t, double lambda, double n) {
  const double g = std::exp(-n * t * t / 8.0);
  const double denom = 2.0 * std::sqrt(2.0 * n);
  const std::complex<double> am((n * t) / denom, -4.0 * lambda / denom);
  const std::complex<double> ap((n * t) / denom, 4.0 * lambda / denom);
  const std::complex<double> a0(0.0, 4.0 * lambda / denom);
  const double pref = std::sqrt(pi * n * n * n / (512.0 * std::pow(lambda, 6.0)));
  const std::complex<double> bracket = cerf::erf(am) - cerf::erf(ap) + 2.0 * cerf::erf(a0);
  return n / (4.0 * lambda * lambda) * (1.0 - g * std::cos(lambda * t)) +
         std::complex<double>(0.0, 1.0) * pref * std::exp(-2.0 * lambda * lambda / n) * bracket;
}

ZeroFieldParams synthetic_zero_field(double gamma, double z) {
  ZeroFieldParams p;
  p.gamma = gamma;
  p.z = z;
  return p;
}

}  // namespace

TEST_CASE("parameters at t = 0") {
  const ChannelParams p = channel_params(0.0, 1157.6, 1e6);
  CHECK(std::abs(p.r1 - 2.0) < 1e-10);
  CHECK(std::abs(p.r2) < 1e-10);
  CHECK(std::abs(p.w) < 1e-10);
}

TEST_CASE("parameters match the high-precision references") {
  for (const ChannelParamsReference& ref : kChannelParamsReference) {
    const ChannelParams p = channel_params(ref.t, ref.lambda, ref.bath_n);
    CHECK(std::abs(p.r1 - ref.r1) <= 1e-11 * std::max(1.0, std::abs(ref.r1)));
    CHECK(std::abs(p.r2 - ref.r2) <= 1e-11 * std::max(1.0, std::abs(ref.r2)));
    CHECK(std::abs(p.w - ref.w) <= 1e-11 * std::max(1.0, std::abs(ref.w)));
  }
}

TEST_CASE("realness of the raw complex route, and agreement with it") {
  for (int i = 0; i < 200; ++i) {
    const double lambda = test::uniform(500.0, 1e4);
    const double t = test::uniform(0.0, 4.0 * pi / lambda);
    const std::complex<double> w_raw = w_raw_complex(t, lambda, 1e6);
    CHECK(std::abs(w_raw.imag()) <= 1e-9);
    const ChannelParams p = channel_params(t, lambda, 1e6);
    CHECK(std::abs(p.w - w_raw.real()) <= 1e-9);
  }
}

TEST_CASE("large-t plateau of W") {
  const double lambda = 1157.6;
  const double w_ref = channel_params(0.06, lambda, 1e6).w;  // lambda t = 69, N t^2/8 = 450
  for (double t : {0.07, 0.08, 0.1, 0.2}) {
    CHECK(std::abs(channel_params(t, lambda, 1e6).w - w_ref) < 1e-6);
  }
}

TEST_CASE("zero-field limits") {
  const ZeroFieldParams at0 = zero_field_params(0.0, 1e6);
  CHECK(std::abs(at0.gamma - 1.0) < 1e-12);
  CHECK(std::abs(at0.z) < 1e-12);
  // long-time limits
  const ZeroFieldParams late = zero_field_params(0.05, 1e6);  // a^2 = 312.5
  CHECK(late.gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(late.z == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("idle point check near the entangling-step duration") {
  // 0.18 ns with the adopted constants
  const double t = 0.18 / 6582.119569;
  const ZeroFieldParams p = zero_field_params(t, 1e6);
  CHECK((2.0 + p.gamma - p.z) / 3.0 == doctest::Approx(0.999907).epsilon(2e-6));
}

// The closed forms shipped by zero_field_params are gated on this oracle: a
// Richardson extrapolation of channel_params over lambda -> 0 (the errors
// scale as lambda^2, so two evaluations a decade apart cancel the leading
// term).
TEST_CASE("zero-field closed forms pass the limit oracle") {
  const double n = 1e6;
  for (double a2 : {0.01, 0.1, 0.5, 1.0, 1.5, 2.5, 5.0}) {
    const double t = std::sqrt(8.0 * a2 / n);
    const ChannelParams coarse = channel_params(t, 1e-2, n);
    const ChannelParams fine = channel_params(t, 1e-3, n);
    const double gamma_oracle = (100.0 * (fine.r1 / 2.0) - coarse.r1 / 2.0) / 99.0;
    const double z_oracle = (100.0 * fine.w - coarse.w) / 99.0;
    const ZeroFieldParams p = zero_field_params(t, n);
    CHECK(std::abs(p.gamma - gamma_oracle) <= 1e-8);
    CHECK(std::abs(p.z - z_oracle) <= 1e-8);
  }
}

TEST_CASE("small-field channel params agree with the zero-field forms") {
  const double n = 1e6;
  for (double a2 : {0.0, 0.2, 0.7, 1.3, 2.0, 3.5, 5.0}) {
    const double t = std::sqrt(8.0 * a2 / n);
    const ChannelParams p = channel_params(t, 1e-4, n);
    const ZeroFieldParams q = zero_field_params(t, n);
    CHECK(std::abs(p.r1 / 2.0 - q.gamma) <= 1e-6);
    CHECK(std::abs(p.w - q.z) <= 1e-6);
  }
}

TEST_CASE("identity channels at t = 0") {
  const ChannelParams p = channel_params(0.0, 2000.0, 1e6);
  const ZeroFieldParams q = zero_field_params(0.0, 1e6);
  for (const QubitChannel& ch :
       {make_channel(Axis::x, p, Sign::plus), make_channel(Axis::x, p, Sign::minus),
        make_channel(Axis::y, p, Sign::plus), make_channel(q)}) {
    CHECK(test::max_abs_diff(ch, QubitChannel::identity(ch.axis, ch.sign)) < 1e-12);
  }
}

TEST_CASE("zero-field map action") {
  const ZeroFieldParams p = zero_field_params(4e-4, 1e6);
  const QubitChannel ch = make_channel(p);
  const DensityMatrix e00 = DensityMatrix::raw(1, {1.0, 0.0, 0.0, 0.0});
  const DensityMatrix out = apply_channel(e00, ch, 0);
  CHECK(std::abs(out(0, 0) - (1.0 - p.z)) < 1e-14);
  CHECK(std::abs(out(1, 1) - p.z) < 1e-14);
  const DensityMatrix e01 = DensityMatrix::raw(1, {0.0, 1.0, 0.0, 0.0});
  const DensityMatrix out01 = apply_channel(e01, ch, 0);
  CHECK(std::abs(out01(0, 1) - p.gamma) < 1e-14);
  CHECK(std::abs(out01(0, 0)) < 1e-14);
}

TEST_CASE("pulsed x map columns") {
  const ChannelParams p = channel_params(1.6e-3, 1157.6, 1e6);
  const QubitChannel ch = make_channel(Axis::x, p, Sign::plus);
  CHECK(std::abs(ch.entry(0, 0, 0, 0) - (2.0 + p.r1) / 4.0) < 1e-15);
  CHECK(std::abs(ch.entry(0, 1, 0, 0) - cplx(0.0, -p.r2 / 4.0)) < 1e-15);
  CHECK(std::abs(ch.entry(1, 0, 0, 0) - cplx(0.0, p.r2 / 4.0)) < 1e-15);
  CHECK(std::abs(ch.entry(1, 1, 0, 0) - (2.0 - p.r1) / 4.0) < 1e-15);
  CHECK(std::abs(ch.entry(0, 1, 0, 1) - (2.0 + p.r1 - 4.0 * p.w) / 4.0) < 1e-15);
  CHECK(std::abs(ch.entry(1, 0, 0, 1) - (2.0 - p.r1 - 4.0 * p.w) / 4.0) < 1e-15);
}

TEST_CASE("trace and Hermiticity preservation") {
  for (int i = 0; i < 100; ++i) {
    const double lambda = test::uniform(500.0, 8000.0);
    const double t = test::uniform(0.0, 3.0 * pi / lambda);
    const ChannelParams p = channel_params(t, lambda, 1e6);
    for (const QubitChannel& ch :
         {make_channel(Axis::x, p, Sign::plus), make_channel(Axis::y, p, Sign::minus),
          make_channel(zero_field_params(t, 1e6))}) {
      CHECK(ch.trace_preservation_defect() < 1e-12);
      const DensityMatrix rho = test::random_density(1);
      const DensityMatrix out = apply_channel(rho, ch, 0);
      CHECK(out.hermiticity_defect() < 1e-12);
      CHECK(std::abs(out.trace() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("y map is the z-conjugated x map") {
  const ChannelParams p = channel_params(2.2e-3, 1157.6, 1e6);
  const QubitChannel x_plus = make_channel(Axis::x, p, Sign::plus);
  const QubitChannel y_plus = make_channel(Axis::y, p, Sign::plus);
  CHECK(test::max_abs_diff(y_plus, bathsim::z_conjugation(x_plus)) < 1e-12);

  // density-matrix level with V = Rz(pi/2) composed from equatorial rotations
  const Unitary v = rotation(pi / 2, 0.0) * rotation(pi / 2, pi / 2) * rotation(-pi / 2, 0.0);
  const std::array<int, 1> q0 = {0};
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = test::random_density(1);
    const DensityMatrix lhs = apply_channel(rho, y_plus, 0);
    const DensityMatrix rhs =
        apply_unitary(apply_channel(apply_unitary(rho, v.dagger(), q0), x_plus, 0), v, q0);
    CHECK(test::max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("sign variant flips R2 only") {
  ChannelParams p = channel_params(1.9e-3, 1157.6, 1e6);
  const QubitChannel minus = make_channel(Axis::x, p, Sign::minus);
  ChannelParams flipped = p;
  flipped.r2 = -p.r2;
  const QubitChannel plus_of_flipped = make_channel(Axis::x, flipped, Sign::plus);
  CHECK(test::max_abs_diff(minus, plus_of_flipped) == 0.0);
}

TEST_CASE("published y map differs in exactly one entry") {
  const ChannelParams p = channel_params(2.0e-3, 1157.6, 1e6);
  const QubitChannel corrected = make_channel(Axis::y, p, Sign::plus, YForm::conjugated);
  const QubitChannel printed = make_channel(Axis::y, p, Sign::plus, YForm::published);
  int diffs = 0;
  for (std::size_t i = 0; i < corrected.transfer.size(); ++i) {
    if (std::abs(corrected.transfer[i] - printed.transfer[i]) > 1e-15) ++diffs;
  }
  CHECK(diffs == 1);
  CHECK(std::abs(corrected.entry(1, 0, 1, 0) - printed.entry(1, 0, 1, 0) -
                 (p.r1 - p.r2) / 4.0) < 1e-15);
}

TEST_CASE("cp_check") {
  const CpReport id_report = cp_check(QubitChannel::identity());
  CHECK(id_report.is_tp);
  CHECK(id_report.is_cp);
  const std::array<double, 4> id_expect = {0.0, 0.0, 0.0, 2.0};
  for (int i = 0; i < 4; ++i)
    CHECK(id_report.choi_eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(id_expect[static_cast<std::size_t>(i)]).epsilon(1e-12));

  const CpReport third = cp_check(make_channel(synthetic_zero_field(1.0 / 3.0, 1.0 / 3.0)));
  CHECK(third.is_cp);
  const std::array<double, 4> third_expect = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0};
  for (int i = 0; i < 4; ++i)
    CHECK(third.choi_eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(third_expect[static_cast<std::size_t>(i)]).epsilon(1e-12));

  // population transfer below zero cannot be completely positive
  const CpReport bad = cp_check(make_channel(synthetic_zero_field(0.3, -0.05)));
  CHECK_FALSE(bad.is_cp);
  CHECK(bad.choi_eigenvalues[0] == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("zero-field map stays completely positive at all times") {
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.05 * i / 60.0;
    CHECK(cp_check(make_channel(zero_field_params(t, 1e6))).is_cp);
  }
}

TEST_CASE("parameter preconditions") {
  CHECK_THROWS_AS(channel_params(-1.0, 100.0, 1e6), std::invalid_argument);
  CHECK_THROWS_AS(channel_params(1.0, 0.0, 1e6), std::domain_error);
  CHECK_THROWS_AS(channel_params(1.0, -3.0, 1e6), std::domain_error);
  CHECK_THROWS_AS(channel_params(1.0, 100.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(zero_field_params(-1.0, 1e6), std::invalid_argument);
  const ChannelParams p = channel_params(1e-3, 1157.6, 1e6);
  CHECK_THROWS_AS(make_channel(Axis::z, p, Sign::plus), std::invalid_argument);
}
