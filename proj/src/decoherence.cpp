#include "qdot/decoherence.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdot/cerf.hpp"
#include "qdot/errors.hpp"

namespace qdot::decoherence {
namespace {

using std::numbers::pi;

// Below this the two leading contributions to W cancel to O(b^2) of huge
// terms; the series branch subtracts them analytically instead.
constexpr double kSmallB = 0.25;

// W as a function of a = sqrt(N/8) t and b = sqrt(2/N) lambda:
//
//   W = [1 - e^{-a^2} cos(2ab)] / (2b^2) - (1/(2b^3)) int_0^a e^{-u^2} sin(2ub) du.
//
// Direct branch uses the scaled erf bracket for the integral; series branch
// expands both pieces in b^2 (the 1/b^2 singular parts cancel exactly).
double w_of_ab(double a, double b) {
  const double g = std::exp(-a * a);
  if (b >= kSmallB) {
    const double first = (1.0 - g * std::cos(2.0 * a * b)) / (2.0 * b * b);
    return first - std::sqrt(pi) / (8.0 * b * b * b) * cerf::bracket_scaled(a, b);
  }
  // W = sum_{k>=1} (-1)^{k+1} 4^{k-1} b^{2k-2} [2g a^{2k}/(2k)! + 4 M_{2k+1}/(2k+1)!]
  // with M_m = int_0^a u^m e^{-u^2} du, M_1 = (1-g)/2,
  // M_{2k+1} = k M_{2k-1} - a^{2k} g / 2.
  const double a2 = a * a;
  double m_odd = (1.0 - g) / 2.0;    // M_1
  double pow_a2 = 1.0;               // a^{2k}
  double fact2k = 1.0;               // (2k)!
  double fact2k1 = 1.0;              // (2k+1)!
  double b_pow = 1.0;                // (4 b^2)^{k-1}
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 40; ++k) {
    pow_a2 *= a2;
    fact2k *= (2.0 * k - 1.0) * (2.0 * k);
    fact2k1 = fact2k * (2.0 * k + 1.0);
    m_odd = k * m_odd - pow_a2 * g / 2.0;  // now M_{2k+1}
    const double term = sign * b_pow * (2.0 * g * pow_a2 / fact2k + 4.0 * m_odd / fact2k1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && k > 3) break;
    b_pow *= 4.0 * b * b;
    sign = -sign;
  }
  return sum;
}

void fill_x(QubitChannel& ch, double r1, double r2, double w) {
  const cplx i_r2(0.0, r2 / 4.0);
  const double dp = (2.0 + r1) / 4.0;
  const double dm = (2.0 - r1) / 4.0;
  const double cp = (2.0 + r1 - 4.0 * w) / 4.0;
  const double cm = (2.0 - r1 - 4.0 * w) / 4.0;
  // column |0><0|
  ch.entry(0, 0, 0, 0) = dp;
  ch.entry(0, 1, 0, 0) = -i_r2;
  ch.entry(1, 0, 0, 0) = i_r2;
  ch.entry(1, 1, 0, 0) = dm;
  // column |0><1|
  ch.entry(0, 0, 0, 1) = -i_r2;
  ch.entry(0, 1, 0, 1) = cp;
  ch.entry(1, 0, 0, 1) = cm;
  ch.entry(1, 1, 0, 1) = i_r2;
  // column |1><0|
  ch.entry(0, 0, 1, 0) = i_r2;
  ch.entry(0, 1, 1, 0) = cm;
  ch.entry(1, 0, 1, 0) = cp;
  ch.entry(1, 1, 1, 0) = -i_r2;
  // column |1><1|
  ch.entry(0, 0, 1, 1) = dm;
  ch.entry(0, 1, 1, 1) = i_r2;
  ch.entry(1, 0, 1, 1) = -i_r2;
  ch.entry(1, 1, 1, 1) = dp;
}

void fill_y(QubitChannel& ch, double r1, double r2, double w, YForm form) {
  const double q = r2 / 4.0;
  const double dp = (2.0 + r1) / 4.0;
  const double dm = (2.0 - r1) / 4.0;
  const double cp = (2.0 + r1 - 4.0 * w) / 4.0;
  const double cm = (2.0 - r1 - 4.0 * w) / 4.0;
  ch.entry(0, 0, 0, 0) = dp;
  ch.entry(0, 1, 0, 0) = -q;
  ch.entry(1, 0, 0, 0) = -q;
  ch.entry(1, 1, 0, 0) = dm;
  ch.entry(0, 0, 0, 1) = q;
  ch.entry(0, 1, 0, 1) = cp;
  ch.entry(1, 0, 0, 1) = -cm;
  ch.entry(1, 1, 0, 1) = -q;
  ch.entry(0, 0, 1, 0) = q;
  ch.entry(0, 1, 1, 0) = -cm;
  // The printed map carries (2 + R2 - 4W)/4 here; the conjugated form keeps
  // the R1 demanded by Hermiticity duality and by the exact bath evolution.
  ch.entry(1, 0, 1, 0) = form == YForm::conjugated ? cp : (2.0 + r2 - 4.0 * w) / 4.0;
  ch.entry(1, 1, 1, 0) = -q;
  ch.entry(0, 0, 1, 1) = dm;
  ch.entry(0, 1, 1, 1) = q;
  ch.entry(1, 0, 1, 1) = q;
  ch.entry(1, 1, 1, 1) = dp;
}

void assert_trace_preserving(const QubitChannel& ch) {
  if (ch.trace_preservation_defect() > 1e-12) {
    throw internal_error("make_channel: trace preservation defect above tolerance");
  }
}

}  // namespace

ChannelParams channel_params(double t, double lambda, double bath_n) {
  if (!(t >= 0.0)) throw std::invalid_argument("channel_params: t must be nonnegative");
  if (!(bath_n >= 1.0)) throw std::invalid_argument("channel_params: bath_n must be >= 1");
  if (!(lambda > 0.0)) {
    throw std::domain_error("channel_params: lambda must be positive (zero field has its own limit)");
  }
  const double a = std::sqrt(bath_n / 8.0) * t;
  const double b = std::sqrt(2.0 / bath_n) * lambda;
  const double x = lambda * t;
  const double g = std::exp(-a * a);
  const double w = w_of_ab(a, b);
  const double a_over_b = bath_n * t / (4.0 * lambda);
  ChannelParams p;
  p.w = w;
  p.r1 = 2.0 * w + 2.0 * g * (std::cos(x) - a_over_b * std::sin(x));
  p.r2 = 2.0 * g * ((bath_n / (4.0 * lambda * lambda) - 1.0) * std::sin(x) - a_over_b * std::cos(x));
  p.t = t;
  p.lambda = lambda;
  p.bath_n = bath_n;
  return p;
}

ZeroFieldParams zero_field_params(double t, double bath_n) {
  if (!(t >= 0.0)) throw std::invalid_argument("zero_field_params: t must be nonnegative");
  if (!(bath_n >= 1.0)) throw std::invalid_argument("zero_field_params: bath_n must be >= 1");
  const double a2 = bath_n * t * t / 8.0;
  const double g = std::exp(-a2);
  ZeroFieldParams p;
  p.z = 1.0 / 3.0 + (2.0 * a2 / 3.0 - 1.0 / 3.0) * g;
  p.gamma = p.z + (1.0 - 2.0 * a2) * g;
  p.t = t;
  p.bath_n = bath_n;
  return p;
}

QubitChannel make_channel(Axis axis, const ChannelParams& p, Sign sign, YForm y_form) {
  if (axis == Axis::z) {
    throw std::invalid_argument("make_channel: the z map takes ZeroFieldParams");
  }
  const double r2 = sign == Sign::plus ? p.r2 : -p.r2;
  QubitChannel ch;
  ch.axis = axis;
  ch.sign = sign;
  if (axis == Axis::x) {
    fill_x(ch, p.r1, r2, p.w);
  } else {
    fill_y(ch, p.r1, r2, p.w, y_form);
  }
  assert_trace_preserving(ch);
  return ch;
}

QubitChannel make_channel(const ZeroFieldParams& p) {
  QubitChannel ch;
  ch.axis = Axis::z;
  ch.sign = Sign::plus;
  ch.entry(0, 0, 0, 0) = 1.0 - p.z;
  ch.entry(1, 1, 0, 0) = p.z;
  ch.entry(0, 1, 0, 1) = p.gamma;
  ch.entry(1, 0, 1, 0) = p.gamma;  // gamma is real, so equal to its conjugate
  ch.entry(0, 0, 1, 1) = p.z;
  ch.entry(1, 1, 1, 1) = 1.0 - p.z;
  assert_trace_preserving(ch);
  return ch;
}

CpReport cp_check(const QubitChannel& ch) {
  CpReport report;
  report.is_tp = ch.trace_preservation_defect() <= 1e-12;
  Eigen::Matrix4cd choi;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) choi(2 * i + k, 2 * j + l) = ch.entry(k, l, i, j);
  const Eigen::Matrix4cd herm = (choi + choi.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(herm, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 4; ++i) report.choi_eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  report.is_cp = report.choi_eigenvalues[0] >= -1e-9;
  return report;
}

}  // namespace qdot::decoherence
