#ifndef QDOT_BATHSIM_HPP_
#define QDOT_BATHSIM_HPP_

#include <array>

#include "qdot/decoherence.hpp"
#include "qdot/qcore.hpp"

namespace qdot::bathsim {

// One electron spin coupled uniformly to n_small bath spins in the maximally
// mixed state, H = lambda S_axis + S.I (dimensionless units).
struct CentralSpinModel {
  int n_small = 1;  // 1..12
  double lambda = 0.0;
  Axis axis = Axis::z;
  double t = 0.0;

  void validate() const;
};

enum class EvolveMethod {
  // Decompose the bath into total-angular-momentum sectors; exact for the
  // maximally mixed bath and cheap at any supported n_small.
  blocks,
  // Evolve the full 2^(n+1) density matrix by dense Hermitian
  // eigendecomposition; n_small <= 8. Kept as an independent cross-check.
  dense,
};

// Channel of the central spin after unitary evolution for time t and a bath
// trace, assembled by process tomography on the four matrix units.
QubitChannel exact_channel(const CentralSpinModel& model,
                           EvolveMethod method = EvolveMethod::blocks);

// The bath-free limit: a pure rotation by angle about the axis (test mode).
QubitChannel rotation_channel(Axis axis, double angle);

struct StructureReport {
  Axis axis = Axis::z;
  // Largest transfer entry outside the sparsity pattern of the analytic map
  // for this axis, and whether it is below 1e-10.
  double max_off_pattern = 0.0;
  bool pattern_ok = false;
  // Parameters read off the nonzero entries (r1/r2/w for x or y, gamma/z for
  // the zero-field pattern).
  double r1 = 0.0, r2 = 0.0, w = 0.0;
  double gamma = 0.0, z = 0.0;
  decoherence::CpReport cp;
  // Max deviation between this channel and the z-conjugated x channel; only
  // filled when an x-axis reference is supplied (meaningful for axis y).
  double y_conjugation_residual = -1.0;
};

StructureReport structure_report(const QubitChannel& exact, Axis axis,
                                 const QubitChannel* x_reference = nullptr);

// Transfer matrix of rho -> V rho V^dagger with V = Rz(pi/2), used for the
// y-from-x conjugation identity.
QubitChannel z_conjugation(const QubitChannel& x_channel);

}  // namespace qdot::bathsim

#endif  // QDOT_BATHSIM_HPP_
