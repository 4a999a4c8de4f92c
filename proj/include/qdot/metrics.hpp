#ifndef QDOT_METRICS_HPP_
#define QDOT_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "qdot/decoherence.hpp"
#include "qdot/units.hpp"

namespace qdot::metrics {

enum class MetricKind {
  gx_pi,       // pulsed x map against a pi rotation target
  g_half_pi,   // pulsed map against a half-pi rotation target
  idle,        // zero-field map against the identity
  f_measured,  // measured-state fidelity after the full 3-qubit pipeline
  u_00,        // composite recovery fidelity, branch 00
  u_01,
  u_10,
  u_11,
  phi,  // teleportation fidelity (pipeline only)
};

const char* metric_name(MetricKind kind);
bool metric_from_name(const std::string& name, MetricKind* kind);

enum class AverageMethod { two_design, quadrature };

struct MetricOptions {
  decoherence::YForm y_form = decoherence::YForm::conjugated;
  // Measurement-stage duration entering the phi integrand; required for
  // MetricKind::phi, ignored otherwise.
  double phi_t1 = -1.0;
};

// Closed-form value of the Bloch-averaged fidelity at dimensionless time t.
// phi has no closed form and is rejected.
double closed_form(MetricKind kind, double t, double lambda, double bath_n);

// The same average evaluated through the state/channel pipeline, never
// through the closed forms. two_design averages the six Pauli eigenstates
// (exact for these degree-2 integrands); quadrature uses Gauss-Legendre in
// cos(theta) x trapezoid in phi.
double pipeline_average(MetricKind kind, double t, double lambda, double bath_n,
                        AverageMethod method, const MetricOptions& opts = {});

struct ScanDiagnostics {
  int grid_points = 0;
  double t_max = 0.0;
  bool boundary_low = false;
  bool boundary_high = false;
  int refine_iterations = 0;
};

struct MetricResult {
  MetricKind kind{};
  double t_star = 0.0;   // dimensionless optimum (per pulse for u_jk / phi stage 2)
  double value = 0.0;
  double tau_ns = 0.0;   // reported duration: 3 t* for u_jk, t1 + 3 t2 for phi
  ScanDiagnostics scan;
  bool cp_region_ok = true;
};

// Dense scan of (0, t_max] (t_max = twice the nominal pulse time) followed by
// golden-section refinement. A maximum on the scan boundary is flagged in the
// diagnostics.
MetricResult maximize(MetricKind kind, double lambda, double bath_n,
                      const units::PhysicalConfig& cfg, const MetricOptions& opts = {});

struct PhiOptions {
  decoherence::YForm y_form = decoherence::YForm::conjugated;
  bool joint = false;  // 2-D (t1, t2) sensitivity mode instead of the staged default
};

// Teleportation fidelity: stage 1 pins t1 at the f_measured optimum, stage 2
// maximises the outcome-averaged recovered fidelity over the recovery pulse
// duration t2; reports tau_ns = t1 + 3 t2.
MetricResult teleport_fidelity(double lambda, double bath_n, const units::PhysicalConfig& cfg,
                               const PhiOptions& opts = {});

enum class TableId { I, III, IV, V, VI };

bool table_from_name(const std::string& name, TableId* id);
const char* table_name(TableId id);

struct TableRow {
  double b0_mT = 0.0;
  std::vector<double> values;        // one or two fidelities (table V: +, -)
  std::vector<double> durations_ns;  // matching durations
  bool cp_region_ok = true;
};

std::vector<TableRow> make_table(TableId id, std::span<const double> b0_list_mT,
                                 const units::PhysicalConfig& base,
                                 const PhiOptions& phi_opts = {});

}  // namespace qdot::metrics

#endif  // QDOT_METRICS_HPP_
