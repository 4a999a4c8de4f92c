#ifndef QDOT_CERF_HPP_
#define QDOT_CERF_HPP_

#include <complex>
#include <cstddef>

namespace qdot::cerf {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//
// Supported domain is |Re z| <= 1e3 and |Im z| <= 1e3; below the real axis
// the reflection formula needs exp(-z^2), so arguments whose reflection
// overflows double are rejected with std::domain_error rather than returning
// an infinity. Relative accuracy on the supported domain is ~1e-13.
std::complex<double> faddeeva(std::complex<double> z);

// Error function of a complex argument, via w(z). Same domain policy as
// faddeeva; arguments whose value exceeds double range are rejected.
std::complex<double> erf(std::complex<double> z);

// Dawson integral D(x) = exp(-x^2) * int_0^x exp(u^2) du for real x.
double dawson(double x);

// The scaled erf bracket
//
//   exp(-b^2) * (-i) * [erf(a - ib) - erf(a + ib) + 2 erf(ib)]
//
// for a, b >= 0. The expression is real analytically; it is evaluated in a
// form whose intermediates stay bounded (no exp(+b^2) is ever formed), so it
// is usable far beyond the range where the raw erf composition overflows.
// Equals (4/sqrt(pi)) * int_0^a exp(-u^2) sin(2ub) du.
double bracket_scaled(double a, double b);

struct SelfTestResult {
  double max_rel_err = 0.0;
  std::size_t points = 0;
};

// Evaluates faddeeva against an embedded table of high-precision values.
SelfTestResult self_test();

}  // namespace qdot::cerf

#endif  // QDOT_CERF_HPP_
