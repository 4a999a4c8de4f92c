#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qdot/units.hpp"
#include "test_util.hpp"

using namespace qdot;
using units::PhysicalConfig;
using units::TimeDirection;

namespace {
PhysicalConfig reference_config(double b0_mT) {
  PhysicalConfig cfg;
  cfg.b0_mT = b0_mT;
  return cfg;
}
}  // namespace

TEST_CASE("lambda from field") {
  CHECK(units::lambda_from_field(reference_config(0.0)) == 0.0);
  CHECK(units::lambda_from_field(reference_config(1.0)) == doctest::Approx(1157.6).epsilon(1e-12));
  CHECK(units::lambda_from_field(reference_config(6.0)) == doctest::Approx(6945.6).epsilon(1e-12));
}

TEST_CASE("lambda is linear in the field") {
  for (int i = 0; i < 200; ++i) {
    const double b0 = test::uniform(1e-3, 20.0);
    const double k = test::uniform(0.1, 50.0);
    const double lhs = units::lambda_from_field(reference_config(k * b0));
    const double rhs = k * units::lambda_from_field(reference_config(b0));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("time conversion") {
  const PhysicalConfig cfg = reference_config(1.0);
  CHECK(units::time_convert(0.0, TimeDirection::to_ns, cfg) == 0.0);
  CHECK(units::time_convert(0.0, TimeDirection::to_dimensionless, cfg) == 0.0);
  CHECK(units::time_convert(1.0, TimeDirection::to_ns, cfg) ==
        doctest::Approx(6582.119569).epsilon(1e-9));
  CHECK(units::time_convert(0.18, TimeDirection::to_dimensionless, cfg) ==
        doctest::Approx(2.73468140639e-5).epsilon(1e-9));
}

TEST_CASE("round trip is the identity") {
  const PhysicalConfig cfg = reference_config(3.0);
  for (int i = 0; i <= 1000; ++i) {
    const double x = std::pow(10.0, -8.0 + 8.0 * i / 1000.0);  // [1e-8, 1]
    const double y = units::time_convert(units::time_convert(x, TimeDirection::to_ns, cfg),
                                         TimeDirection::to_dimensionless, cfg);
    CHECK(std::abs(y - x) <= 1e-14 * x);
  }
}

TEST_CASE("preconditions") {
  PhysicalConfig cfg = reference_config(1.0);
  cfg.bath_n = 0.0;
  CHECK_THROWS_AS(units::lambda_from_field(cfg), std::invalid_argument);
  cfg = reference_config(-1.0);
  CHECK_THROWS_AS(units::lambda_from_field(cfg), std::invalid_argument);
  cfg = reference_config(1.0);
  cfg.a_eV = 0.0;
  CHECK_THROWS_AS(units::lambda_from_field(cfg), std::invalid_argument);
  CHECK_THROWS_AS(units::time_convert(-1.0, TimeDirection::to_ns, reference_config(1.0)),
                  std::invalid_argument);
}
