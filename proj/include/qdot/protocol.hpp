#ifndef QDOT_PROTOCOL_HPP_
#define QDOT_PROTOCOL_HPP_

#include <array>

#include "qdot/decoherence.hpp"
#include "qdot/qcore.hpp"

namespace qdot::protocol {

// Qubit layout: 0 = A1 (the state to teleport), 1 = A2, 2 = B.

struct Outcome {
  int j = 0;
  int k = 0;
  double p = 0.0;
  DensityMatrix sigma;  // Bob's conditional 1-qubit state
  bool degenerate = false;
};

struct MeasurementRecord {
  std::array<Outcome, 4> outcomes;  // ordered 00, 01, 10, 11
  double total_probability() const;
};

struct PulseStep {
  Axis axis = Axis::x;
  Sign sign = Sign::plus;
};

// Bob's conditional recovery, stored first-applied first. The unitary it
// realises is the Table-II product read right to left; `phase` is that
// product's global phase.
struct RecoveryPlan {
  int j = 0;
  int k = 0;
  std::array<PulseStep, 3> pulses;
  cplx phase;
};

RecoveryPlan recovery_plan(int j, int k);

// The exact recovery unitary U_jk, global phase included.
Unitary recovery_unitary(int j, int k);

enum class StepMode { noisy, ideal };

struct IdealRun {
  PureState gamma0, gamma1, gamma2, gamma3;
  MeasurementRecord record;
};

// Pure-state pipeline with exact unitaries: prepare, entangle, rotate by -pi
// about x, entangle again, measure A1A2. Every outcome has p = 1/4 and
// applying U_jk to sigma_jk returns the input state.
IdealRun run_ideal(double theta, double phi);

struct NoisyRun {
  PureState gamma0, gamma1;  // steps 0-1 are treated as noiseless
  DensityMatrix gamma2, gamma3;
  MeasurementRecord record;
};

// Density-matrix pipeline: the step-2 rotation is replaced by the pulsed x
// map on A1 (the map itself carries the coherent rotation) while A2 and B
// idle under the zero-field map, all for duration t1. StepMode::ideal swaps
// in the exact rotation (x pi-rotation on A1, identity elsewhere) to
// reproduce run_ideal.
NoisyRun run_noisy(double theta, double phi, double t1, double lambda, double bath_n,
                   StepMode mode = StepMode::noisy,
                   decoherence::YForm y_form = decoherence::YForm::conjugated);

// Applies the three recovery pulses for outcome jk, each of duration t2 (the
// reported recovery wall time is 3 t2). StepMode::ideal applies U_jk exactly.
DensityMatrix recover(const DensityMatrix& sigma, int j, int k, double t2, double lambda,
                      double bath_n, StepMode mode = StepMode::noisy,
                      decoherence::YForm y_form = decoherence::YForm::conjugated);

// Projective measurement of A1 and A2 in the standard basis: probabilities
// and Bob's conditional states. Outcomes with p < 1e-14 are flagged
// degenerate and carry the maximally mixed state.
MeasurementRecord measure(const DensityMatrix& gamma3);

}  // namespace qdot::protocol

#endif  // QDOT_PROTOCOL_HPP_
