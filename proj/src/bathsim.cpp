#include "qdot/bathsim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qdot::bathsim {
namespace {

using std::numbers::pi;

Eigen::Matrix2cd pauli_half(Axis axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::x: m << 0, 0.5, 0.5, 0; break;
    case Axis::y: m << 0, cplx(0, -0.5), cplx(0, 0.5), 0; break;
    default: m << 0.5, 0, 0, -0.5; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

double multiplicity(int n, int two_j) {
  // Number of spin-j irreps in n spins-1/2: C(n, (n-2j)/2) - C(n, (n-2j)/2 - 1).
  const int k = (n - two_j) / 2;
  auto binom = [](int nn, int kk) -> double {
    if (kk < 0 || kk > nn) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= kk; ++i) v = v * (nn - kk + i) / i;
    return v;
  };
  return binom(n, k) - binom(n, k - 1);
}

// ribbon of spin-j operators, dimension two_j + 1, m = j .. -j.
struct SpinOps {
  Eigen::MatrixXcd jz, jp, jm;
};

SpinOps spin_ops(int two_j) {
  const int d = two_j + 1;
  const double j = two_j / 2.0;
  SpinOps ops{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d),
              Eigen::MatrixXcd::Zero(d, d)};
  for (int r = 0; r < d; ++r) ops.jz(r, r) = j - r;
  for (int c = 1; c < d; ++c) {
    const double m = j - c;
    ops.jp(c - 1, c) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  ops.jm = ops.jp.adjoint();
  return ops;
}

QubitChannel from_reduced(const std::array<std::array<Eigen::Matrix2cd, 2>, 2>& reduced, Axis axis) {
  QubitChannel ch;
  ch.axis = axis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) ch.entry(k, l, i, j) = reduced[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](k, l);
  return ch;
}

QubitChannel blocks_channel(const CentralSpinModel& model) {
  const int n = model.n_small;
  std::array<std::array<Eigen::Matrix2cd, 2>, 2> reduced;
  for (auto& row : reduced)
    for (auto& m : row) m = Eigen::Matrix2cd::Zero();
  const Eigen::Matrix2cd sx = pauli_half(Axis::x);
  const Eigen::Matrix2cd sy = pauli_half(Axis::y);
  const Eigen::Matrix2cd sz = pauli_half(Axis::z);
  const Eigen::Matrix2cd sp = sx + cplx(0, 1) * sy;
  const Eigen::Matrix2cd sm = sx - cplx(0, 1) * sy;
  const Eigen::Matrix2cd sa = pauli_half(model.axis);
  for (int two_j = n % 2; two_j <= n; two_j += 2) {
    const double mult = multiplicity(n, two_j);
    if (mult <= 0.0) continue;
    const int d = two_j + 1;
    const SpinOps ops = spin_ops(two_j);
    const Eigen::MatrixXcd eye_b = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd h = model.lambda * kron(sa, eye_b);
    h += kron(sz, ops.jz);
    h += 0.5 * kron(sp, ops.jm);
    h += 0.5 * kron(sm, ops.jp);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();
    Eigen::VectorXcd phases(evals.size());
    for (int i = 0; i < evals.size(); ++i) phases(i) = std::polar(1.0, -evals(i) * model.t);
    const Eigen::MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();
    const double weight = mult / std::pow(2.0, n);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
        e(i, j) = 1.0;
        const Eigen::MatrixXcd rho = kron(e, eye_b);
        const Eigen::MatrixXcd out = u * rho * u.adjoint();
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            cplx acc = 0.0;
            for (int b = 0; b < d; ++b) acc += out(k * d + b, l * d + b);
            reduced[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](k, l) += weight * acc;
          }
      }
    }
  }
  return from_reduced(reduced, model.axis);
}

QubitChannel dense_channel(const CentralSpinModel& model) {
  if (model.n_small > 8) {
    throw std::invalid_argument("exact_channel: the dense path is limited to n_small <= 8");
  }
  const int n = model.n_small;
  const int nq = n + 1;
  const int dim = 1 << nq;
  // Electron occupies the most significant bit; bit value 0 means spin up.
  auto bit = [nq](int state, int pos) { return (state >> (nq - 1 - pos)) & 1; };
  auto szv = [](int b) { return b == 0 ? 0.5 : -0.5; };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::Matrix2cd sa = pauli_half(model.axis);
  for (int s = 0; s < dim; ++s) {
    const int e = bit(s, 0);
    // Zeeman on the electron
    for (int e2 = 0; e2 < 2; ++e2) {
      const cplx v = model.lambda * sa(e2, e);
      if (v != cplx(0.0)) {
        const int s2 = (s & ~(1 << (nq - 1))) | (e2 << (nq - 1));
        h(s2, s) += v;
      }
    }
    for (int k = 1; k <= n; ++k) {
      const int bk = bit(s, k);
      h(s, s) += szv(e) * szv(bk);  // Sz Iz
      if (e != bk) {
        // flip-flop (S+ I- + S- I+)/2 connects opposite pairs
        const int s2 = s ^ (1 << (nq - 1)) ^ (1 << (nq - 1 - k));
        h(s2, s) += 0.5;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXd evals = solver.eigenvalues();
  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  Eigen::VectorXcd phases(evals.size());
  for (int i = 0; i < evals.size(); ++i) phases(i) = std::polar(1.0, -evals(i) * model.t);
  const Eigen::MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();
  const int db = 1 << n;
  std::array<std::array<Eigen::Matrix2cd, 2>, 2> reduced;
  for (auto& row : reduced)
    for (auto& m : row) m = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
      for (int b = 0; b < db; ++b) rho(i * db + b, j * db + b) = 1.0 / db;
      const Eigen::MatrixXcd out = u * rho * u.adjoint();
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          cplx acc = 0.0;
          for (int b = 0; b < db; ++b) acc += out(k * db + b, l * db + b);
          reduced[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](k, l) = acc;
        }
    }
  }
  return from_reduced(reduced, model.axis);
}

bool z_pattern_allowed(int k, int l, int i, int j) {
  // population sector (i == j) maps to populations, coherences only scale
  if (i == j) return k == l;
  return k == i && l == j;
}

}  // namespace

void CentralSpinModel::validate() const {
  if (n_small < 1 || n_small > 12) throw std::invalid_argument("CentralSpinModel: n_small must be 1..12");
  if (!(t >= 0.0)) throw std::invalid_argument("CentralSpinModel: t must be nonnegative");
  if (!(lambda >= 0.0)) throw std::invalid_argument("CentralSpinModel: lambda must be nonnegative");
}

QubitChannel exact_channel(const CentralSpinModel& model, EvolveMethod method) {
  model.validate();
  return method == EvolveMethod::blocks ? blocks_channel(model) : dense_channel(model);
}

QubitChannel rotation_channel(Axis axis, double angle) {
  const Eigen::Matrix2cd sa = pauli_half(axis);
  const Eigen::Matrix2cd r =
      (std::cos(angle / 2) * Eigen::Matrix2cd::Identity() -
       cplx(0, 2.0 * std::sin(angle / 2)) * sa);
  QubitChannel ch;
  ch.axis = axis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
      e(i, j) = 1.0;
      const Eigen::Matrix2cd out = r * e * r.adjoint();
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) ch.entry(k, l, i, j) = out(k, l);
    }
  return ch;
}

QubitChannel z_conjugation(const QubitChannel& x_channel) {
  // E^y(rho) = V E^x(V^dagger rho V) V^dagger with V = Rz(pi/2); on matrix
  // units V |0><1| V^dagger = -i |0><1|, so the transfer matrix just picks up
  // phases row- and column-wise.
  auto phase = [](int i, int j) -> cplx {
    if (i == 0 && j == 1) return cplx(0, -1);
    if (i == 1 && j == 0) return cplx(0, 1);
    return 1.0;
  };
  QubitChannel out = x_channel;
  out.axis = Axis::y;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          out.entry(k, l, i, j) = phase(k, l) * std::conj(phase(i, j)) * x_channel.entry(k, l, i, j);
  return out;
}

StructureReport structure_report(const QubitChannel& exact, Axis axis,
                                 const QubitChannel* x_reference) {
  StructureReport report;
  report.axis = axis;
  const bool zero_field_pattern = axis == Axis::z;
  if (zero_field_pattern) {
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            if (!z_pattern_allowed(k, l, i, j)) {
              report.max_off_pattern =
                  std::max(report.max_off_pattern, std::abs(exact.entry(k, l, i, j)));
            }
          }
    report.z = exact.entry(1, 1, 0, 0).real();
    report.gamma = exact.entry(0, 1, 0, 1).real();
  } else {
    // The pulsed maps have no analytic zeros; the pattern check is the
    // Hermiticity duality relation T[(l,k),(j,i)] = conj(T[(k,l),(i,j)]).
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const cplx dual = std::conj(exact.entry(k, l, i, j)) - exact.entry(l, k, j, i);
            report.max_off_pattern = std::max(report.max_off_pattern, std::abs(dual));
          }
    report.r1 = 2.0 * (exact.entry(0, 0, 0, 0) - exact.entry(1, 1, 0, 0)).real();
    if (axis == Axis::x) {
      report.r2 = -4.0 * exact.entry(0, 1, 0, 0).imag();
    } else {
      report.r2 = -4.0 * exact.entry(0, 1, 0, 0).real();
    }
    report.w = (2.0 + report.r1) / 4.0 - exact.entry(0, 1, 0, 1).real();
  }
  report.pattern_ok = report.max_off_pattern <= 1e-10;
  report.cp = decoherence::cp_check(exact);
  if (x_reference != nullptr) {
    const QubitChannel expected = z_conjugation(*x_reference);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < exact.transfer.size(); ++idx) {
      worst = std::max(worst, std::abs(exact.transfer[idx] - expected.transfer[idx]));
    }
    report.y_conjugation_residual = worst;
  }
  return report;
}

}  // namespace qdot::bathsim
