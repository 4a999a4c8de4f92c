#ifndef QDOT_DECOHERENCE_HPP_
#define QDOT_DECOHERENCE_HPP_

#include <array>

#include "qdot/qcore.hpp"

namespace qdot::decoherence {

// Scalars of the driven-qubit map at field lambda: under an ESR pulse of
// duration t the populations and coherences of the pulsed qubit transform
// with coefficients built from R1, R2 and W. All three are real; R1(0) = 2,
// R2(0) = W(0) = 0.
struct ChannelParams {
  double r1 = 2.0;
  double r2 = 0.0;
  double w = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  double bath_n = 1.0;
};

// Zero-field limits gamma = lim R1/2 and z = lim W governing the idle map:
// populations mix through z, coherences scale by gamma.
struct ZeroFieldParams {
  double gamma = 1.0;
  double z = 0.0;
  double t = 0.0;
  double bath_n = 1.0;
};

// Evaluates R1, R2, W at dimensionless (t, lambda, bath_n); lambda must be
// positive (use zero_field_params for the free-evolution limit).
ChannelParams channel_params(double t, double lambda, double bath_n);

// Closed-form B0 -> 0 limits, validated in the test suite against a
// Richardson extrapolation of channel_params over lambda -> 0:
//   z(t)     = 1/3 + (2 a2/3 - 1/3) exp(-a2)
//   gamma(t) = z(t) + (1 - 2 a2) exp(-a2),        a2 = N t^2 / 8.
ZeroFieldParams zero_field_params(double t, double bath_n);

// Published variants of the pulsed y map: `conjugated` derives the y map by
// z-conjugation of the x map (the form consistent with trace duality and
// with the exact bath evolution); `published` keeps the (2 + R2 - 4W)/4 entry of
// the printed map. They differ in one entry only.
enum class YForm { conjugated, published };

// Pulsed map about the x or y axis; Sign::minus flips R2 (reversed field).
QubitChannel make_channel(Axis axis, const ChannelParams& p, Sign sign,
                          YForm y_form = YForm::conjugated);

// Idle (zero-field) map. No sign variant, R2 has no zero-field analogue.
QubitChannel make_channel(const ZeroFieldParams& p);

struct CpReport {
  bool is_tp = false;
  std::array<double, 4> choi_eigenvalues{};  // ascending
  bool is_cp = false;
};

// Builds the Choi matrix of the transfer matrix and reports its spectrum;
// complete positivity is min eigenvalue >= -1e-9. Trace-2 normalisation, so
// the identity channel reports {0, 0, 0, 2}.
CpReport cp_check(const QubitChannel& ch);

}  // namespace qdot::decoherence

#endif  // QDOT_DECOHERENCE_HPP_
