#include "qdot/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdot/errors.hpp"

namespace qdot::protocol {
namespace {

using std::numbers::pi;

constexpr double kDegenerateP = 1e-14;

const std::array<int, 2> kAliceQubits = {0, 1};
const std::array<int, 1> kA1 = {0};
const std::array<int, 1> kB = {2};

double pulse_angle(Sign sign) { return sign == Sign::plus ? pi / 2 : -pi / 2; }

double axis_angle(Axis axis) {
  switch (axis) {
    case Axis::x: return 0.0;
    case Axis::y: return pi / 2;
    default: throw std::invalid_argument("recovery pulses are about x or y only");
  }
}

}  // namespace

double MeasurementRecord::total_probability() const {
  double s = 0.0;
  for (const Outcome& o : outcomes) s += o.p;
  return s;
}

RecoveryPlan recovery_plan(int j, int k) {
  if ((j != 0 && j != 1) || (k != 0 && k != 1)) {
    throw std::invalid_argument("recovery_plan: jk must be bits");
  }
  RecoveryPlan plan;
  plan.j = j;
  plan.k = k;
  // First-applied pulse is the rightmost factor of the recovery product.
  const int idx = 2 * j + k;
  switch (idx) {
    case 0:  // U00 = e^{-i pi/4} Rx(+) Ry(+) Rx(-)
      plan.pulses = {PulseStep{Axis::x, Sign::minus}, PulseStep{Axis::y, Sign::plus},
                     PulseStep{Axis::x, Sign::plus}};
      plan.phase = std::polar(1.0, -pi / 4);
      break;
    case 1:  // U01 = -e^{i pi/4} Rx(+) Ry(+) Rx(+)
      plan.pulses = {PulseStep{Axis::x, Sign::plus}, PulseStep{Axis::y, Sign::plus},
                     PulseStep{Axis::x, Sign::plus}};
      plan.phase = -std::polar(1.0, pi / 4);
      break;
    case 2:  // U10 = e^{i pi/4} Rx(+) Ry(-) Rx(+)
      plan.pulses = {PulseStep{Axis::x, Sign::plus}, PulseStep{Axis::y, Sign::minus},
                     PulseStep{Axis::x, Sign::plus}};
      plan.phase = std::polar(1.0, pi / 4);
      break;
    default:  // U11 = -e^{-i pi/4} Rx(-) Ry(+) Rx(+)
      plan.pulses = {PulseStep{Axis::x, Sign::plus}, PulseStep{Axis::y, Sign::plus},
                     PulseStep{Axis::x, Sign::minus}};
      plan.phase = -std::polar(1.0, -pi / 4);
      break;
  }
  return plan;
}

Unitary recovery_unitary(int j, int k) {
  const RecoveryPlan plan = recovery_plan(j, k);
  Unitary u = rotation(pulse_angle(plan.pulses[0].sign), axis_angle(plan.pulses[0].axis));
  for (std::size_t s = 1; s < plan.pulses.size(); ++s) {
    u = rotation(pulse_angle(plan.pulses[s].sign), axis_angle(plan.pulses[s].axis)) * u;
  }
  return u.scaled(plan.phase);
}

MeasurementRecord measure(const DensityMatrix& gamma3) {
  if (gamma3.num_qubits() != 3) throw std::invalid_argument("measure: expected a 3-qubit state");
  MeasurementRecord record{{Outcome{0, 0, 0, DensityMatrix::maximally_mixed(1), false},
                            Outcome{0, 1, 0, DensityMatrix::maximally_mixed(1), false},
                            Outcome{1, 0, 0, DensityMatrix::maximally_mixed(1), false},
                            Outcome{1, 1, 0, DensityMatrix::maximally_mixed(1), false}}};
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      Outcome& o = record.outcomes[static_cast<std::size_t>(2 * j + k)];
      // tr_{A1A2}(M_jk Gamma3) is the B-block of Gamma3 at A1A2 = jk.
      std::vector<cplx> block(4);
      const int base = 4 * j + 2 * k;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) block[static_cast<std::size_t>(2 * r + c)] = gamma3(base + r, base + c);
      const double p = (block[0] + block[3]).real();
      o.p = p;
      if (p < kDegenerateP) {
        o.degenerate = true;
        continue;
      }
      for (cplx& v : block) v /= p;
      o.sigma = DensityMatrix::raw(1, std::move(block));
    }
  }
  return record;
}

IdealRun run_ideal(double theta, double phi) {
  const PureState psi = bloch_state(theta, phi);
  const PureState gamma0 = tensor(psi, bell_singlet());
  const Unitary entangler = sqrt_swap();
  const PureState gamma1 = apply_unitary(gamma0, entangler, kAliceQubits);
  const PureState gamma2 = apply_unitary(gamma1, rotation(-pi, 0.0), kA1);
  const PureState gamma3 = apply_unitary(gamma2, entangler, kAliceQubits);
  MeasurementRecord record = measure(DensityMatrix::from_pure(gamma3));
  return IdealRun{gamma0, gamma1, gamma2, gamma3, std::move(record)};
}

NoisyRun run_noisy(double theta, double phi, double t1, double lambda, double bath_n,
                   StepMode mode, decoherence::YForm /*y_form*/) {
  if (!(t1 >= 0.0)) throw std::invalid_argument("run_noisy: t1 must be nonnegative");
  const PureState psi = bloch_state(theta, phi);
  const PureState gamma0 = tensor(psi, bell_singlet());
  const Unitary entangler = sqrt_swap();
  const PureState gamma1 = apply_unitary(gamma0, entangler, kAliceQubits);
  DensityMatrix gamma2 = DensityMatrix::from_pure(gamma1);
  if (mode == StepMode::ideal) {
    gamma2 = apply_unitary(gamma2, rotation(-pi, 0.0), kA1);
  } else {
    // The pulsed map on A1 carries the rotation and its decoherence; A2 and B
    // idle under the zero-field map for the same duration.
    const decoherence::ChannelParams cp = decoherence::channel_params(t1, lambda, bath_n);
    const decoherence::ZeroFieldParams zp = decoherence::zero_field_params(t1, bath_n);
    const QubitChannel pulsed = decoherence::make_channel(Axis::x, cp, Sign::plus);
    const QubitChannel idle = decoherence::make_channel(zp);
    gamma2 = apply_channel(gamma2, pulsed, 0);
    gamma2 = apply_channel(gamma2, idle, 1);
    gamma2 = apply_channel(gamma2, idle, 2);
  }
  DensityMatrix gamma3 = apply_unitary(gamma2, entangler, kAliceQubits);
  MeasurementRecord record = measure(gamma3);
  return NoisyRun{gamma0, gamma1, std::move(gamma2), std::move(gamma3), std::move(record)};
}

DensityMatrix recover(const DensityMatrix& sigma, int j, int k, double t2, double lambda,
                      double bath_n, StepMode mode, decoherence::YForm y_form) {
  if (sigma.num_qubits() != 1) throw std::invalid_argument("recover: expected a 1-qubit state");
  if (!(t2 >= 0.0)) throw std::invalid_argument("recover: t2 must be nonnegative");
  const RecoveryPlan plan = recovery_plan(j, k);
  if (mode == StepMode::ideal) {
    const Unitary u = recovery_unitary(j, k);
    const std::array<int, 1> q0 = {0};
    return apply_unitary(sigma, u, q0);
  }
  const decoherence::ChannelParams cp = decoherence::channel_params(t2, lambda, bath_n);
  DensityMatrix rho = sigma;
  for (const PulseStep& step : plan.pulses) {
    rho = apply_channel(rho, decoherence::make_channel(step.axis, cp, step.sign, y_form), 0);
  }
  return rho;
}

}  // namespace qdot::protocol
