#include "qdot/qcore.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "qdot/errors.hpp"

namespace qdot {
namespace {

using std::numbers::pi;

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = 1e-10;

int checked_qubits(int num_qubits, std::size_t size) {
  if (num_qubits < 1 || num_qubits > 3) {
    throw std::invalid_argument("qubit count must be between 1 and 3");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (size != dim * dim && size != dim) {
    throw std::invalid_argument("container size does not match the qubit count");
  }
  return num_qubits;
}

Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = rho(r, c);
  return m;
}

void check_sorted_qubits(std::span<const int> qubits, int n) {
  if (qubits.empty()) throw std::invalid_argument("qubit index list must not be empty");
  int prev = -1;
  for (int q : qubits) {
    if (q <= prev || q >= n) throw std::invalid_argument("qubit index list must be sorted and in range");
    prev = q;
  }
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
  if (num_qubits_ < 1 || num_qubits_ > 3 ||
      amp_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument("PureState: bad dimension");
  }
  if (std::abs(norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("PureState: amplitudes are not normalised");
  }
}

double PureState::norm() const {
  double s = 0.0;
  for (const cplx& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(int num_qubits, std::vector<cplx> rowmajor)
    : num_qubits_(checked_qubits(num_qubits, rowmajor.size())), m_(std::move(rowmajor)) {}

DensityMatrix DensityMatrix::raw(int num_qubits, std::vector<cplx> rowmajor) {
  return DensityMatrix(num_qubits, std::move(rowmajor));
}

DensityMatrix DensityMatrix::physical(int num_qubits, std::vector<cplx> rowmajor) {
  DensityMatrix rho(num_qubits, std::move(rowmajor));
  if (rho.hermiticity_defect() > kHermTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kHermTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  if (rho.min_eigenvalue() < -kPsdTol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
  return rho;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const int d = psi.dim();
  std::vector<cplx> m(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      m[static_cast<std::size_t>(r) * d + c] = psi.amplitude(r) * std::conj(psi.amplitude(c));
  return DensityMatrix(psi.num_qubits(), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const int d = 1 << num_qubits;
  std::vector<cplx> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r) m[static_cast<std::size_t>(r) * d + r] = 1.0 / d;
  return DensityMatrix(num_qubits, std::move(m));
}

cplx DensityMatrix::trace() const {
  cplx t = 0.0;
  for (int r = 0; r < dim(); ++r) t += (*this)(r, r);
  return t;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int r = 0; r < dim(); ++r)
    for (int c = 0; c <= r; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd m = to_eigen(*this);
  Eigen::MatrixXcd herm = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------- Unitary

Unitary::Unitary(int num_qubits, std::vector<cplx> rowmajor)
    : num_qubits_(checked_qubits(num_qubits, rowmajor.size())), m_(std::move(rowmajor)) {
  const int d = dim();
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (*this)(r, k) * std::conj((*this)(c, k));
      if (std::abs(acc - (r == c ? 1.0 : 0.0)) > kNormTol) {
        throw std::invalid_argument("Unitary: U U^dagger is not the identity");
      }
    }
  }
}

Unitary Unitary::dagger() const {
  const int d = dim();
  std::vector<cplx> m(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m[static_cast<std::size_t>(r) * d + c] = std::conj((*this)(c, r));
  return Unitary(num_qubits_, std::move(m));
}

Unitary Unitary::operator*(const Unitary& rhs) const {
  if (rhs.num_qubits_ != num_qubits_) throw std::invalid_argument("Unitary product: dimension mismatch");
  const int d = dim();
  std::vector<cplx> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < d; ++c)
        m[static_cast<std::size_t>(r) * d + c] += (*this)(r, k) * rhs(k, c);
  return Unitary(num_qubits_, std::move(m));
}

Unitary Unitary::scaled(cplx phase) const {
  if (std::abs(std::abs(phase) - 1.0) > kNormTol) {
    throw std::invalid_argument("Unitary::scaled: phase must be unimodular");
  }
  std::vector<cplx> m = m_;
  for (cplx& v : m) v *= phase;
  return Unitary(num_qubits_, std::move(m));
}

// ------------------------------------------------------------- QubitChannel

QubitChannel QubitChannel::identity(Axis axis, Sign sign) {
  QubitChannel ch;
  ch.axis = axis;
  ch.sign = sign;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ch.entry(i, j, i, j) = 1.0;
  return ch;
}

double QubitChannel::trace_preservation_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cplx tr = entry(0, 0, i, j) + entry(1, 1, i, j);
      worst = std::max(worst, std::abs(tr - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// ------------------------------------------------------------- constructors

PureState bloch_state(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= pi)) throw std::invalid_argument("bloch_state: theta out of [0, pi]");
  if (!(phi >= 0.0 && phi <= 2.0 * pi)) throw std::invalid_argument("bloch_state: phi out of [0, 2pi]");
  return PureState(1, {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
}

PureState bell_singlet() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(2, {0.0, s, -s, 0.0});
}

Unitary sqrt_swap() {
  const cplx ph = std::polar(1.0, pi / 8) / std::sqrt(2.0);
  const cplx one_mi = cplx(1.0, -1.0);
  const cplx mi = cplx(0.0, -1.0);
  return Unitary(2, {ph * one_mi, 0.0, 0.0, 0.0,
                     0.0, ph, ph * mi, 0.0,
                     0.0, ph * mi, ph, 0.0,
                     0.0, 0.0, 0.0, ph * one_mi});
}

Unitary rotation(double theta, double phi_axis) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const cplx mi = cplx(0.0, -1.0);
  return Unitary(1, {c, mi * std::polar(s, -phi_axis), mi * std::polar(s, phi_axis), c});
}

// ----------------------------------------------------------- tensor algebra

namespace {

// Expands U on `qubits` of an n-qubit register into a full-dimension matrix.
std::vector<cplx> embed_unitary(const Unitary& u, std::span<const int> qubits, int n) {
  check_sorted_qubits(qubits, n);
  if (u.num_qubits() != static_cast<int>(qubits.size())) {
    throw std::invalid_argument("apply_unitary: operator size does not match the index list");
  }
  const int d = 1 << n;
  const int k = u.num_qubits();
  std::vector<int> shifts(qubits.size());
  for (std::size_t i = 0; i < qubits.size(); ++i) shifts[i] = n - 1 - qubits[i];
  std::vector<cplx> full(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r) {
    int sub_r = 0;
    for (int i = 0; i < k; ++i) sub_r = (sub_r << 1) | ((r >> shifts[static_cast<std::size_t>(i)]) & 1);
    const int base = [&] {
      int b = r;
      for (int i = 0; i < k; ++i) b &= ~(1 << shifts[static_cast<std::size_t>(i)]);
      return b;
    }();
    for (int sub_c = 0; sub_c < (1 << k); ++sub_c) {
      int c = base;
      for (int i = 0; i < k; ++i) {
        if ((sub_c >> (k - 1 - i)) & 1) c |= 1 << shifts[static_cast<std::size_t>(i)];
      }
      full[static_cast<std::size_t>(r) * d + c] = u(sub_r, sub_c);
    }
  }
  return full;
}

}  // namespace

PureState apply_unitary(const PureState& psi, const Unitary& u, std::span<const int> qubits) {
  const int n = psi.num_qubits();
  const int d = psi.dim();
  const std::vector<cplx> full = embed_unitary(u, qubits, n);
  std::vector<cplx> out(static_cast<std::size_t>(d), 0.0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(r)] += full[static_cast<std::size_t>(r) * d + c] * psi.amplitude(c);
  return PureState(n, std::move(out));
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Unitary& u, std::span<const int> qubits) {
  const int n = rho.num_qubits();
  const int d = rho.dim();
  const std::vector<cplx> full = embed_unitary(u, qubits, n);
  std::vector<cplx> tmp(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) {
      const cplx urk = full[static_cast<std::size_t>(r) * d + k];
      if (urk == cplx(0.0)) continue;
      for (int c = 0; c < d; ++c) tmp[static_cast<std::size_t>(r) * d + c] += urk * rho(k, c);
    }
  std::vector<cplx> out(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < d; ++c) {
        const cplx uck = full[static_cast<std::size_t>(c) * d + k];
        if (uck == cplx(0.0)) continue;
        out[static_cast<std::size_t>(r) * d + c] += tmp[static_cast<std::size_t>(r) * d + k] * std::conj(uck);
      }
  return DensityMatrix::raw(n, std::move(out));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const QubitChannel& ch, int qubit) {
  const int n = rho.num_qubits();
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("apply_channel: qubit index out of range");
  const int d = rho.dim();
  const int shift = n - 1 - qubit;
  std::vector<cplx> out(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r) {
    const int i = (r >> shift) & 1;
    for (int c = 0; c < d; ++c) {
      const cplx v = rho(r, c);
      if (v == cplx(0.0)) continue;
      const int j = (c >> shift) & 1;
      for (int k = 0; k < 2; ++k) {
        const int rr = (r & ~(1 << shift)) | (k << shift);
        for (int l = 0; l < 2; ++l) {
          const cplx coeff = ch.entry(k, l, i, j);
          if (coeff == cplx(0.0)) continue;
          const int cc = (c & ~(1 << shift)) | (l << shift);
          out[static_cast<std::size_t>(rr) * d + cc] += coeff * v;
        }
      }
    }
  }
  return DensityMatrix::raw(n, std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  check_sorted_qubits(keep, n);
  const int k = static_cast<int>(keep.size());
  if (k == n) return rho;
  std::vector<int> keep_shift;
  for (int q : keep) keep_shift.push_back(n - 1 - q);
  std::vector<int> trace_shift;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) trace_shift.push_back(n - 1 - q);
  }
  const int dk = 1 << k;
  const int dt = 1 << (n - k);
  std::vector<cplx> out(static_cast<std::size_t>(dk) * dk, 0.0);
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (int e = 0; e < dt; ++e) {
        int full_r = 0, full_c = 0;
        for (int i = 0; i < k; ++i) {
          const int bit_r = (r >> (k - 1 - i)) & 1;
          const int bit_c = (c >> (k - 1 - i)) & 1;
          full_r |= bit_r << keep_shift[static_cast<std::size_t>(i)];
          full_c |= bit_c << keep_shift[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n - k; ++i) {
          const int bit = (e >> (n - k - 1 - i)) & 1;
          full_r |= bit << trace_shift[static_cast<std::size_t>(i)];
          full_c |= bit << trace_shift[static_cast<std::size_t>(i)];
        }
        acc += rho(full_r, full_c);
      }
      out[static_cast<std::size_t>(r) * dk + c] = acc;
    }
  }
  return DensityMatrix::raw(k, std::move(out));
}

double fidelity(const PureState& pure, const DensityMatrix& rho) {
  if (pure.num_qubits() != rho.num_qubits()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  cplx acc = 0.0;
  const int d = rho.dim();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) acc += std::conj(pure.amplitude(r)) * rho(r, c) * pure.amplitude(c);
  if (std::abs(acc.imag()) > 1e-9) {
    throw internal_error("fidelity: imaginary residue above tolerance");
  }
  return acc.real();
}

PureState tensor(const PureState& a, const PureState& b) {
  const int n = a.num_qubits() + b.num_qubits();
  std::vector<cplx> amp(static_cast<std::size_t>(1) << n);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      amp[static_cast<std::size_t>(i) * b.dim() + j] = a.amplitude(i) * b.amplitude(j);
  return PureState(n, std::move(amp));
}

}  // namespace qdot
