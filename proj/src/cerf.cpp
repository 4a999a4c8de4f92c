#include "qdot/cerf.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdot::cerf {
namespace {

using std::numbers::pi;

constexpr double kDomainLimit = 1e3;
constexpr double kExpOverflow = 709.0;  // log of largest finite double

// ---------------------------------------------------------------------------
// Rational approximation on the upper half plane (Weideman, SIAM J. Numer.
// Anal. 31 (1994) 1497): sample f(theta) = exp(-t^2)(L^2 + t^2) with
// t = L tan(theta/2), take Fourier cosine coefficients, and evaluate the
// resulting polynomial in Z = (L + iz)/(L - iz).
// ---------------------------------------------------------------------------
constexpr int kWeidemanN = 64;

struct WeidemanTable {
  double L;
  std::array<double, kWeidemanN> coeff;  // c_1 .. c_N
};

WeidemanTable build_weideman() {
  WeidemanTable tbl{};
  const int n_terms = kWeidemanN;
  const int m = 2 * n_terms;
  const long double L = std::sqrt(static_cast<long double>(n_terms) / std::sqrt(2.0L));
  tbl.L = static_cast<double>(L);
  // Cosine sums over theta_j = j pi / m, j = 0..2m-1; f is even about pi and
  // vanishes there, so only j = 0..m-1 is sampled.
  std::array<long double, 2 * kWeidemanN> f{};
  for (int j = 0; j < m; ++j) {
    const long double theta = static_cast<long double>(j) * std::numbers::pi_v<long double> / m;
    const long double t = L * std::tan(theta / 2);
    f[static_cast<std::size_t>(j)] = std::exp(-t * t) * (L * L + t * t);
  }
  for (int n = 1; n <= n_terms; ++n) {
    long double acc = f[0];
    for (int j = 1; j < m; ++j) {
      const long double theta = static_cast<long double>(j) * std::numbers::pi_v<long double> / m;
      acc += 2.0L * f[static_cast<std::size_t>(j)] * std::cos(n * theta);
    }
    tbl.coeff[static_cast<std::size_t>(n - 1)] = static_cast<double>(acc / (2 * m));
  }
  return tbl;
}

const WeidemanTable& weideman() {
  static const WeidemanTable tbl = build_weideman();
  return tbl;
}

std::complex<double> w_weideman(std::complex<double> z) {
  const WeidemanTable& tbl = weideman();
  const std::complex<double> d = tbl.L - std::complex<double>(0, 1) * z;
  const std::complex<double> big_z = (tbl.L + std::complex<double>(0, 1) * z) / d;
  std::complex<double> p = 0.0;
  for (int n = kWeidemanN; n >= 1; --n) {
    p = p * big_z + tbl.coeff[static_cast<std::size_t>(n - 1)];
  }
  return 2.0 * p / (d * d) + (1.0 / std::sqrt(pi)) / d;
}

// Maclaurin series w(z) = sum_n (iz)^n / Gamma(n/2 + 1); cancellation stays
// below ~e^{|z|^2}, so it is restricted to |z|^2 < 7.
std::complex<double> w_series(std::complex<double> z) {
  const std::complex<double> iz = std::complex<double>(0, 1) * z;
  std::complex<double> power = 1.0;
  double gamma_even = 1.0;                  // Gamma(m + 1) for n = 2m
  double gamma_odd = std::sqrt(pi) / 2.0;   // Gamma(m + 3/2) for n = 2m + 1
  std::complex<double> sum = 0.0;
  for (int n = 0; n < 130; ++n) {
    const int m = n / 2;
    double g;
    if (n % 2 == 0) {
      if (m > 0) gamma_even *= m;
      g = gamma_even;
    } else {
      if (m > 0) gamma_odd *= (m + 0.5);
      g = gamma_odd;
    }
    const std::complex<double> term = power / g;
    sum += term;
    if (n > 8 && std::abs(term) < 1e-20 * std::abs(sum)) break;
    power *= iz;
  }
  return sum;
}

// Laplace continued fraction, accurate for large |z| in the upper half plane.
std::complex<double> w_contfrac(std::complex<double> z) {
  std::complex<double> f = 0.0;
  for (int n = 16; n >= 1; --n) {
    f = (n / 2.0) / (z - f);
  }
  return std::complex<double>(0, 1) / std::sqrt(pi) / (z - f);
}

// Dispatch for Im z >= 0 (no domain guard).
std::complex<double> w_uhp(std::complex<double> z) {
  const double r2 = std::norm(z);
  if (r2 < 7.0) return w_series(z);
  if (r2 > 140.0 * 140.0) return w_contfrac(z);
  return w_weideman(z);
}

std::complex<double> erf_series(std::complex<double> z) {
  const std::complex<double> z2 = z * z;
  std::complex<double> term = z;
  std::complex<double> sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    sum += term / static_cast<double>(2 * k + 1);
    term *= -z2 / static_cast<double>(k + 1);
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(pi) * sum;
}

void check_domain(std::complex<double> z) {
  if (!(std::abs(z.real()) <= kDomainLimit) || !(std::abs(z.imag()) <= kDomainLimit)) {
    throw std::domain_error("cerf: argument outside the supported |Re|,|Im| <= 1e3 box");
  }
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
  check_domain(z);
  if (z.imag() >= 0.0) return w_uhp(z);
  // w(z) = 2 exp(-z^2) - w(-z); exp(-z^2) grows like exp(y^2 - x^2) here.
  const double growth = z.imag() * z.imag() - z.real() * z.real();
  if (growth > kExpOverflow) {
    throw std::domain_error("cerf: faddeeva overflows below the real axis at this argument");
  }
  return 2.0 * std::exp(-z * z) - w_uhp(-z);
}

std::complex<double> erf(std::complex<double> z) {
  check_domain(z);
  if (z.real() < 0.0) return -erf(-z);
  if (std::norm(z) <= 1.0) return erf_series(z);
  // erf(z) = 1 - exp(-z^2) w(iz); iz lies in the upper half plane here.
  const double growth = z.imag() * z.imag() - z.real() * z.real();
  if (growth > kExpOverflow) {
    throw std::domain_error("cerf: erf exceeds double range at this argument");
  }
  return 1.0 - std::exp(-z * z) * w_uhp(std::complex<double>(0, 1) * z);
}

double dawson(double x) {
  const double ax = std::abs(x);
  if (ax < 0.1) {
    // D(x) = x - 2x^3/3 + 4x^5/15 - ...
    const double x2 = x * x;
    double term = x;
    double sum = 0.0;
    for (int k = 0; k < 12; ++k) {
      sum += term;
      term *= -2.0 * x2 / (2.0 * k + 3.0);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const double d = std::sqrt(pi) / 2.0 * w_uhp(std::complex<double>(ax, 0.0)).imag();
  return x < 0.0 ? -d : d;
}

double bracket_scaled(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("bracket_scaled: both arguments must be nonnegative");
  }
  if (!(a <= kDomainLimit) || !(b <= kDomainLimit)) {
    throw std::domain_error("bracket_scaled: argument outside the supported range");
  }
  if (a == 0.0 || b == 0.0) return 0.0;
  // exp(-b^2)(-i)[erf(a-ib) - erf(a+ib) + 2 erf(ib)]
  //   = 2 Im w(b) + 2 exp(-a^2) Im[exp(-2iab) w(-b + ia)];
  // every factor here is bounded, so arbitrary b is safe.
  const std::complex<double> w_shift = w_uhp(std::complex<double>(-b, a));
  const std::complex<double> osc(std::cos(2.0 * a * b), -std::sin(2.0 * a * b));
  return 2.0 * w_uhp(std::complex<double>(b, 0.0)).imag() +
         2.0 * std::exp(-a * a) * (osc * w_shift).imag();
}

namespace {
struct SelfTestPoint {
  double re, im, w_re, w_im;
};
#include "cerf_selftest_table.inc"
}  // namespace

SelfTestResult self_test() {
  SelfTestResult result;
  for (const SelfTestPoint& p : kSelfTestTable) {
    const std::complex<double> got = faddeeva({p.re, p.im});
    const std::complex<double> ref(p.w_re, p.w_im);
    const double rel = std::abs(got - ref) / std::abs(ref);
    if (rel > result.max_rel_err) result.max_rel_err = rel;
    ++result.points;
  }
  return result;
}

}  // namespace qdot::cerf
