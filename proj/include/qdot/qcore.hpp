#ifndef QDOT_QCORE_HPP_
#define QDOT_QCORE_HPP_

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace qdot {

using cplx = std::complex<double>;

// Qubit 0 is the leftmost tensor factor; a basis index is the big-endian bit
// string of the qubit values, so |jk>_{01} (x) |m>_2 sits at index 4j+2k+m.

class PureState {
public:
  PureState(int num_qubits, std::vector<cplx> amplitudes);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return 1 << num_qubits_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  cplx amplitude(int i) const { return amp_[static_cast<std::size_t>(i)]; }
  double norm() const;

private:
  int num_qubits_;
  std::vector<cplx> amp_;
};

class DensityMatrix {
public:
  // Validating constructor: Hermitian within 1e-12, unit trace within 1e-12,
  // eigenvalues >= -1e-10.
  static DensityMatrix physical(int num_qubits, std::vector<cplx> rowmajor);
  // Trusted constructor for operation outputs; channel outputs may lie
  // slightly outside the physical set and are flagged downstream, not
  // rejected here.
  static DensityMatrix raw(int num_qubits, std::vector<cplx> rowmajor);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return 1 << num_qubits_; }
  cplx operator()(int r, int c) const { return m_[static_cast<std::size_t>(r) * dim() + c]; }
  cplx& at(int r, int c) { return m_[static_cast<std::size_t>(r) * dim() + c]; }
  const std::vector<cplx>& data() const { return m_; }

  cplx trace() const;
  double hermiticity_defect() const;  // max |m - m^dagger| entry
  double min_eigenvalue() const;      // of the Hermitian part

private:
  DensityMatrix(int num_qubits, std::vector<cplx> rowmajor);
  int num_qubits_;
  std::vector<cplx> m_;
};

class Unitary {
public:
  // Validates U U^dagger = 1 within 1e-12.
  Unitary(int num_qubits, std::vector<cplx> rowmajor);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return 1 << num_qubits_; }
  cplx operator()(int r, int c) const { return m_[static_cast<std::size_t>(r) * dim() + c]; }
  const std::vector<cplx>& data() const { return m_; }

  Unitary dagger() const;
  Unitary operator*(const Unitary& rhs) const;
  Unitary scaled(cplx phase) const;  // phase must be unimodular

private:
  int num_qubits_;
  std::vector<cplx> m_;
};

enum class Axis { x, y, z };
enum class Sign { plus, minus };

// Single-qubit map as a 4x4 transfer matrix on the ordered matrix-unit basis
// {|0><0|, |0><1|, |1><0|, |1><1|}: column (i,j) holds the image of |i><j|,
// row (k,l) its component on |k><l|.
struct QubitChannel {
  std::array<cplx, 16> transfer{};
  Axis axis = Axis::x;
  Sign sign = Sign::plus;

  cplx entry(int k, int l, int i, int j) const {
    return transfer[static_cast<std::size_t>(2 * k + l) * 4 + (2 * i + j)];
  }
  cplx& entry(int k, int l, int i, int j) {
    return transfer[static_cast<std::size_t>(2 * k + l) * 4 + (2 * i + j)];
  }
  static QubitChannel identity(Axis axis = Axis::x, Sign sign = Sign::plus);
  // max |tr E(|i><j|) - delta_ij|
  double trace_preservation_defect() const;
};

// |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, 0<=theta<=pi, 0<=phi<=2pi.
PureState bloch_state(double theta, double phi);

// (|01> - |10>)/sqrt(2).
PureState bell_singlet();

// The two-qubit sqrt(SWAP) entangler, including its global phase e^{i pi/8};
// squaring it gives e^{-i pi/4} SWAP.
Unitary sqrt_swap();

// Single-qubit rotation by theta about the axis (cos phi_axis, sin phi_axis, 0).
Unitary rotation(double theta, double phi_axis);

// Embeds U on the listed qubits (ascending, contiguous in tensor order is not
// required) and applies it.
PureState apply_unitary(const PureState& psi, const Unitary& u, std::span<const int> qubits);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Unitary& u, std::span<const int> qubits);

// Applies the transfer matrix on the selected tensor factor.
DensityMatrix apply_channel(const DensityMatrix& rho, const QubitChannel& ch, int qubit);

// Reduced density matrix on the kept qubits (ascending index list).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

// <pure| rho |pure> as a real number; imaginary residue above 1e-9 raises
// internal_error, below that it is discarded.
double fidelity(const PureState& pure, const DensityMatrix& rho);

PureState tensor(const PureState& a, const PureState& b);

}  // namespace qdot

#endif  // QDOT_QCORE_HPP_
