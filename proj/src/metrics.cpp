#include "qdot/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "qdot/protocol.hpp"

namespace qdot::metrics {
namespace {

using decoherence::ChannelParams;
using decoherence::ZeroFieldParams;
using std::numbers::pi;

constexpr int kScanPoints = 2000;
constexpr double kRefineNs = 1e-3;  // golden-section window target, ns

const char* kMetricNames[] = {"gx_pi", "g_half_pi", "idle", "f_measured",
                              "u_00", "u_01", "u_10", "u_11", "phi"};

// The six Pauli eigenstates: a state 2-design, so their uniform average
// equals the Bloch-sphere average for the degree-2 integrands used here.
constexpr std::array<std::array<double, 2>, 6> kTwoDesign = {{
    {0.0, 0.0},
    {pi, 0.0},
    {pi / 2, 0.0},
    {pi / 2, pi},
    {pi / 2, pi / 2},
    {pi / 2, 3 * pi / 2},
}};

struct GaussLegendre {
  std::array<double, 12> node;
  std::array<double, 12> weight;
};

// Order-12 nodes on [-1, 1] by Newton iteration on P_12.
GaussLegendre build_gauss_legendre() {
  GaussLegendre gl{};
  const int n = 12;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    gl.node[static_cast<std::size_t>(i)] = x;
    gl.weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre gl = build_gauss_legendre();
  return gl;
}

// Fidelity integrand of one metric at a single Bloch state.
double integrand(MetricKind kind, double theta, double phi, double t, double lambda,
                 double bath_n, const MetricOptions& opts) {
  const std::array<int, 1> q0 = {0};
  switch (kind) {
    case MetricKind::gx_pi: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      const PureState psi = bloch_state(theta, phi);
      DensityMatrix rho = DensityMatrix::from_pure(psi);
      rho = apply_channel(rho, decoherence::make_channel(Axis::x, p, Sign::plus), 0);
      return fidelity(apply_unitary(psi, rotation(pi, 0.0), q0), rho);
    }
    case MetricKind::g_half_pi: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      const PureState psi = bloch_state(theta, phi);
      DensityMatrix rho = DensityMatrix::from_pure(psi);
      rho = apply_channel(rho, decoherence::make_channel(Axis::x, p, Sign::plus), 0);
      return fidelity(apply_unitary(psi, rotation(pi / 2, 0.0), q0), rho);
    }
    case MetricKind::idle: {
      const ZeroFieldParams p = decoherence::zero_field_params(t, bath_n);
      const PureState psi = bloch_state(theta, phi);
      DensityMatrix rho = DensityMatrix::from_pure(psi);
      rho = apply_channel(rho, decoherence::make_channel(p), 0);
      return fidelity(psi, rho);
    }
    case MetricKind::f_measured: {
      const PureState psi = bloch_state(theta, phi);
      const protocol::NoisyRun run =
          protocol::run_noisy(theta, phi, t, lambda, bath_n, protocol::StepMode::noisy, opts.y_form);
      double acc = 0.0;
      for (const protocol::Outcome& o : run.record.outcomes) {
        const Unitary u = protocol::recovery_unitary(o.j, o.k);
        acc += o.p * fidelity(psi, apply_unitary(o.sigma, u, q0));
      }
      return acc;
    }
    case MetricKind::u_00:
    case MetricKind::u_01:
    case MetricKind::u_10:
    case MetricKind::u_11: {
      const int idx = static_cast<int>(kind) - static_cast<int>(MetricKind::u_00);
      const int j = idx / 2, k = idx % 2;
      const PureState psi = bloch_state(theta, phi);
      const DensityMatrix tau = protocol::recover(DensityMatrix::from_pure(psi), j, k, t, lambda,
                                                  bath_n, protocol::StepMode::noisy, opts.y_form);
      return fidelity(apply_unitary(psi, protocol::recovery_unitary(j, k), q0), tau);
    }
    case MetricKind::phi: {
      if (!(opts.phi_t1 >= 0.0)) {
        throw std::invalid_argument("pipeline_average: phi requires phi_t1 in the options");
      }
      const PureState psi = bloch_state(theta, phi);
      const protocol::NoisyRun run = protocol::run_noisy(theta, phi, opts.phi_t1, lambda, bath_n,
                                                         protocol::StepMode::noisy, opts.y_form);
      double acc = 0.0;
      for (const protocol::Outcome& o : run.record.outcomes) {
        const DensityMatrix recovered =
            protocol::recover(o.sigma, o.j, o.k, t, lambda, bath_n, protocol::StepMode::noisy, opts.y_form);
        acc += o.p * fidelity(psi, recovered);
      }
      return acc;
    }
  }
  throw std::invalid_argument("pipeline_average: unknown metric");
}

double nominal_pulse_time(MetricKind kind, double lambda) {
  switch (kind) {
    case MetricKind::gx_pi:
    case MetricKind::f_measured:
    case MetricKind::idle:
      return pi / lambda;
    default:
      return pi / (2.0 * lambda);
  }
}

struct ScanOutcome {
  double t_star = 0.0;
  double value = 0.0;
  ScanDiagnostics diag;
};

// Dense grid over (0, t_max] then golden-section refinement of the winning
// bracket down to kRefineNs.
ScanOutcome scan_maximum(const std::function<double(double)>& f, double t_max, double refine_to) {
  ScanOutcome out;
  out.diag.grid_points = kScanPoints;
  out.diag.t_max = t_max;
  int best = 0;
  double best_v = -1e300;
  std::array<double, kScanPoints> ts{};
  for (int i = 0; i < kScanPoints; ++i) {
    ts[static_cast<std::size_t>(i)] = t_max * (i + 1) / kScanPoints;
    const double v = f(ts[static_cast<std::size_t>(i)]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  out.diag.boundary_low = best == 0;
  out.diag.boundary_high = best == kScanPoints - 1;
  double lo = best > 0 ? ts[static_cast<std::size_t>(best - 1)] : t_max / kScanPoints * 0.5;
  double hi = best < kScanPoints - 1 ? ts[static_cast<std::size_t>(best + 1)] : t_max;
  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_gr * (hi - lo);
  double d = lo + inv_gr * (hi - lo);
  double fc = f(c), fd = f(d);
  int iters = 0;
  while (hi - lo > refine_to && iters < 200) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_gr * (hi - lo);
      fd = f(d);
    }
    ++iters;
  }
  out.diag.refine_iterations = iters;
  out.t_star = (lo + hi) / 2.0;
  out.value = f(out.t_star);
  if (best_v > out.value) {
    out.t_star = ts[static_cast<std::size_t>(best)];
    out.value = best_v;
  }
  return out;
}

bool cp_ok_at(MetricKind kind, double t_star, double lambda, double bath_n, double phi_t1) {
  // Sign variants are sigma_z-conjugates of each other, so one Choi spectrum
  // per family is enough.
  const auto x_ok = [&](double t) {
    return decoherence::cp_check(
               decoherence::make_channel(Axis::x, decoherence::channel_params(t, lambda, bath_n),
                                         Sign::plus))
        .is_cp;
  };
  const auto z_ok = [&](double t) {
    return decoherence::cp_check(decoherence::make_channel(decoherence::zero_field_params(t, bath_n)))
        .is_cp;
  };
  switch (kind) {
    case MetricKind::gx_pi:
    case MetricKind::g_half_pi:
      return x_ok(t_star);
    case MetricKind::idle:
      return z_ok(t_star);
    case MetricKind::f_measured:
      return x_ok(t_star) && z_ok(t_star);
    case MetricKind::u_00:
    case MetricKind::u_01:
    case MetricKind::u_10:
    case MetricKind::u_11:
      return x_ok(t_star);
    case MetricKind::phi:
      return x_ok(phi_t1) && z_ok(phi_t1) && x_ok(t_star);
  }
  return false;
}

}  // namespace

const char* metric_name(MetricKind kind) { return kMetricNames[static_cast<int>(kind)]; }

bool metric_from_name(const std::string& name, MetricKind* kind) {
  for (int i = 0; i < static_cast<int>(std::size(kMetricNames)); ++i) {
    if (name == kMetricNames[i]) {
      *kind = static_cast<MetricKind>(i);
      return true;
    }
  }
  return false;
}

const char* table_name(TableId id) {
  switch (id) {
    case TableId::I: return "I";
    case TableId::III: return "III";
    case TableId::IV: return "IV";
    case TableId::V: return "V";
    case TableId::VI: return "VI";
  }
  return "?";
}

bool table_from_name(const std::string& name, TableId* id) {
  if (name == "I" || name == "i" || name == "1") *id = TableId::I;
  else if (name == "III" || name == "iii" || name == "3") *id = TableId::III;
  else if (name == "IV" || name == "iv" || name == "4") *id = TableId::IV;
  else if (name == "V" || name == "v" || name == "5") *id = TableId::V;
  else if (name == "VI" || name == "vi" || name == "6") *id = TableId::VI;
  else return false;
  return true;
}

double closed_form(MetricKind kind, double t, double lambda, double bath_n) {
  switch (kind) {
    case MetricKind::gx_pi: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      return (4.0 - p.r1 - 2.0 * p.w) / 6.0;
    }
    case MetricKind::g_half_pi: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      return (4.0 - p.r2 - 2.0 * p.w) / 6.0;
    }
    case MetricKind::idle: {
      const ZeroFieldParams p = decoherence::zero_field_params(t, bath_n);
      return (2.0 + p.gamma - p.z) / 3.0;
    }
    case MetricKind::f_measured: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      const ZeroFieldParams q = decoherence::zero_field_params(t, bath_n);
      return 0.5 + q.gamma / 12.0 * (1.0 - 2.0 * q.z + q.gamma * (1.0 - 2.0 * p.w)) +
             p.r1 / 24.0 * (8.0 * q.z * (1.0 - q.z) - q.gamma * (1.0 + q.gamma) - 2.0);
    }
    case MetricKind::u_00:
    case MetricKind::u_01:
    case MetricKind::u_10:
    case MetricKind::u_11: {
      const ChannelParams p = decoherence::channel_params(t, lambda, bath_n);
      const bool plus_branch = kind == MetricKind::u_00 || kind == MetricKind::u_11;
      const double cubic = p.r1 * p.r1 * p.r1 / 6.0;
      return 0.5 + (p.r2 * p.r2 * (1.0 - 2.0 * p.w) + (plus_branch ? cubic : -cubic)) / 8.0;
    }
    case MetricKind::phi:
      throw std::invalid_argument("closed_form: phi is pipeline-only");
  }
  throw std::invalid_argument("closed_form: unknown metric");
}

double pipeline_average(MetricKind kind, double t, double lambda, double bath_n,
                        AverageMethod method, const MetricOptions& opts) {
  if (method == AverageMethod::two_design) {
    double acc = 0.0;
    for (const auto& [theta, ph] : kTwoDesign) acc += integrand(kind, theta, ph, t, lambda, bath_n, opts);
    return acc / 6.0;
  }
  const GaussLegendre& gl = gauss_legendre();
  constexpr int kPhiPoints = 16;
  double acc = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double theta = std::acos(gl.node[static_cast<std::size_t>(i)]);
    double ring = 0.0;
    for (int j = 0; j < kPhiPoints; ++j) {
      const double ph = 2.0 * pi * j / kPhiPoints;
      ring += integrand(kind, theta, ph, t, lambda, bath_n, opts);
    }
    acc += gl.weight[static_cast<std::size_t>(i)] / 2.0 * ring / kPhiPoints;
  }
  return acc;
}

MetricResult maximize(MetricKind kind, double lambda, double bath_n,
                      const units::PhysicalConfig& cfg, const MetricOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("maximize: lambda must be positive");
  if (kind == MetricKind::phi && !(opts.phi_t1 >= 0.0)) {
    throw std::invalid_argument("maximize: use teleport_fidelity for phi");
  }
  const double ns = units::ns_per_unit(cfg);
  const double t_max = 2.0 * nominal_pulse_time(kind, lambda);

  std::function<double(double)> objective;
  if (kind == MetricKind::phi) {
    // Cache the measurement stage: it does not depend on the scan variable.
    auto branches = std::make_shared<std::vector<std::pair<PureState, protocol::MeasurementRecord>>>();
    for (const auto& [theta, ph] : kTwoDesign) {
      const protocol::NoisyRun run = protocol::run_noisy(theta, ph, opts.phi_t1, lambda, bath_n,
                                                         protocol::StepMode::noisy, opts.y_form);
      branches->emplace_back(bloch_state(theta, ph), run.record);
    }
    objective = [branches, lambda, bath_n, opts](double t2) {
      double acc = 0.0;
      for (const auto& [psi, record] : *branches) {
        for (const protocol::Outcome& o : record.outcomes) {
          const DensityMatrix rec = protocol::recover(o.sigma, o.j, o.k, t2, lambda, bath_n,
                                                      protocol::StepMode::noisy, opts.y_form);
          acc += o.p * fidelity(psi, rec);
        }
      }
      return acc / 6.0;
    };
  } else if (kind == MetricKind::f_measured || kind == MetricKind::gx_pi ||
             kind == MetricKind::g_half_pi || kind == MetricKind::idle ||
             kind == MetricKind::u_00 || kind == MetricKind::u_01 || kind == MetricKind::u_10 ||
             kind == MetricKind::u_11) {
    objective = [kind, lambda, bath_n](double t) { return closed_form(kind, t, lambda, bath_n); };
  }

  const ScanOutcome scan = scan_maximum(objective, t_max, kRefineNs / ns);
  MetricResult result;
  result.kind = kind;
  result.t_star = scan.t_star;
  result.value = scan.value;
  result.scan = scan.diag;
  const bool per_pulse_triple = kind == MetricKind::u_00 || kind == MetricKind::u_01 ||
                                kind == MetricKind::u_10 || kind == MetricKind::u_11;
  result.tau_ns = (per_pulse_triple ? 3.0 * scan.t_star : scan.t_star) * ns;
  if (kind == MetricKind::phi) result.tau_ns = (opts.phi_t1 + 3.0 * scan.t_star) * ns;
  result.cp_region_ok = cp_ok_at(kind, scan.t_star, lambda, bath_n, opts.phi_t1);
  return result;
}

MetricResult teleport_fidelity(double lambda, double bath_n, const units::PhysicalConfig& cfg,
                               const PhiOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("teleport_fidelity: lambda must be positive");
  MetricOptions mopts;
  mopts.y_form = opts.y_form;
  MetricResult stage1 = maximize(MetricKind::f_measured, lambda, bath_n, cfg, mopts);
  if (!opts.joint) {
    mopts.phi_t1 = stage1.t_star;
    return maximize(MetricKind::phi, lambda, bath_n, cfg, mopts);
  }
  // Sensitivity mode: coarse 2-D grid over (t1, t2), then a staged refinement
  // at the best t1.
  const double t1_max = 2.0 * pi / lambda;
  const double t2_max = pi / lambda;
  constexpr int kJointGrid = 120;
  double best_v = -1e300;
  double best_t1 = stage1.t_star;
  for (int i = 1; i <= kJointGrid; ++i) {
    const double t1 = t1_max * i / kJointGrid;
    MetricOptions probe = mopts;
    probe.phi_t1 = t1;
    for (int j = 1; j <= kJointGrid; ++j) {
      const double t2 = t2_max * j / kJointGrid;
      const double v = pipeline_average(MetricKind::phi, t2, lambda, bath_n,
                                        AverageMethod::two_design, probe);
      if (v > best_v) {
        best_v = v;
        best_t1 = t1;
      }
    }
  }
  mopts.phi_t1 = best_t1;
  return maximize(MetricKind::phi, lambda, bath_n, cfg, mopts);
}

std::vector<TableRow> make_table(TableId id, std::span<const double> b0_list_mT,
                                 const units::PhysicalConfig& base, const PhiOptions& phi_opts) {
  if (b0_list_mT.empty()) throw std::invalid_argument("make_table: empty field list");
  std::vector<TableRow> rows;
  for (double b0 : b0_list_mT) {
    if (!(b0 > 0.0)) throw std::domain_error("make_table: B0 must be positive");
    units::PhysicalConfig cfg = base;
    cfg.b0_mT = b0;
    const double lambda = units::lambda_from_field(cfg);
    TableRow row;
    row.b0_mT = b0;
    switch (id) {
      case TableId::I: {
        const MetricResult r = maximize(MetricKind::gx_pi, lambda, cfg.bath_n, cfg);
        row.values = {r.value};
        row.durations_ns = {r.tau_ns};
        row.cp_region_ok = r.cp_region_ok;
        break;
      }
      case TableId::III: {
        const MetricResult r = maximize(MetricKind::f_measured, lambda, cfg.bath_n, cfg);
        row.values = {r.value};
        row.durations_ns = {r.tau_ns};
        row.cp_region_ok = r.cp_region_ok;
        break;
      }
      case TableId::IV: {
        const MetricResult r = maximize(MetricKind::g_half_pi, lambda, cfg.bath_n, cfg);
        row.values = {r.value};
        row.durations_ns = {r.tau_ns};
        row.cp_region_ok = r.cp_region_ok;
        break;
      }
      case TableId::V: {
        const MetricResult plus = maximize(MetricKind::u_00, lambda, cfg.bath_n, cfg);
        const MetricResult minus = maximize(MetricKind::u_01, lambda, cfg.bath_n, cfg);
        row.values = {plus.value, minus.value};
        row.durations_ns = {plus.tau_ns, minus.tau_ns};
        row.cp_region_ok = plus.cp_region_ok && minus.cp_region_ok;
        break;
      }
      case TableId::VI: {
        const MetricResult r = teleport_fidelity(lambda, cfg.bath_n, cfg, phi_opts);
        row.values = {r.value};
        row.durations_ns = {r.tau_ns};
        row.cp_region_ok = r.cp_region_ok;
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qdot::metrics
