#include "qdot/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "qdot/bathsim.hpp"
#include "qdot/cerf.hpp"
#include "qdot/errors.hpp"
#include "qdot/protocol.hpp"
#include "qdot/table_io.hpp"

namespace qdot::cli {
namespace {

using nlohmann::json;

json complex_json(const cplx& v) { return json::array({v.real(), v.imag()}); }

json pure_json(const PureState& psi) {
  json amps = json::array();
  for (int i = 0; i < psi.dim(); ++i) amps.push_back(complex_json(psi.amplitude(i)));
  return amps;
}

json density_json(const DensityMatrix& rho) {
  json m = json::array();
  for (int r = 0; r < rho.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < rho.dim(); ++c) row.push_back(complex_json(rho(r, c)));
    m.push_back(row);
  }
  return m;
}

json transfer_json(const QubitChannel& ch) {
  json m = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(complex_json(ch.transfer[static_cast<std::size_t>(r) * 4 + c]));
    m.push_back(row);
  }
  return m;
}

json config_echo(const RunConfig& rc) {
  return json{{"command", rc.command},
              {"b0_mT", rc.b0_list_mT},
              {"bath_n", rc.bath_n},
              {"a_eV", rc.a_eV},
              {"mu_b_eV_per_T", rc.mu_b_eV_per_T},
              {"hbar_eV_s", rc.hbar_eV_s},
              {"output", rc.output == OutputFormat::csv ? "csv" : "json"},
              {"output_path", rc.output_path},
              {"strict_paper_ey", rc.strict_paper_ey},
              {"joint_phi_opt", rc.joint_phi_opt}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out.good()) throw io_error("failed while writing '" + path + "'");
}

void emit(const RunConfig& rc, const std::string& default_name, const std::string& content) {
  if (rc.output_path.empty()) {
    std::cout << content;
    return;
  }
  write_file(rc.output_path, content);
  std::cout << "wrote " << rc.output_path << "\n";
  (void)default_name;
}

decoherence::YForm y_form(const RunConfig& rc) {
  return rc.strict_paper_ey ? decoherence::YForm::published : decoherence::YForm::conjugated;
}

double require_single_b0(const RunConfig& rc) {
  if (rc.b0_list_mT.empty()) throw std::invalid_argument("a field value is required (--b0)");
  return rc.b0_list_mT.front();
}

Axis axis_from_name(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw std::invalid_argument("axis must be x, y or z");
}

int run_tables(const RunConfig& rc) {
  std::vector<metrics::TableId> ids;
  if (rc.which == "all") {
    ids = {metrics::TableId::I, metrics::TableId::III, metrics::TableId::IV, metrics::TableId::V,
           metrics::TableId::VI};
  } else {
    metrics::TableId id;
    if (!metrics::table_from_name(rc.which, &id)) {
      throw std::invalid_argument("unknown table '" + rc.which + "' (expected I, III, IV, V or VI)");
    }
    ids = {id};
  }
  const units::PhysicalConfig base = rc.physical(0.0);
  metrics::PhiOptions phi_opts;
  phi_opts.joint = rc.joint_phi_opt;
  phi_opts.y_form = y_form(rc);
  const std::string dir = rc.output_path.empty() ? "." : rc.output_path;
  for (metrics::TableId id : ids) {
    const std::vector<metrics::TableRow> rows = metrics::make_table(id, rc.b0_list_mT, base, phi_opts);
    for (const metrics::TableRow& row : rows) {
      if (!row.cp_region_ok) {
        std::cerr << "qdotsim: warning: table " << metrics::table_name(id) << " optimum at "
                  << row.b0_mT << " mT lies outside the completely positive region\n";
      }
      if (id == metrics::TableId::VI && row.values[0] < 2.0 / 3.0) {
        std::cerr << "qdotsim: note: teleportation fidelity at " << row.b0_mT
                  << " mT is below the classical benchmark 2/3\n";
      }
    }
    std::string content;
    std::string suffix;
    if (rc.output == OutputFormat::csv) {
      content = table_io::table_csv(id, rows);
      suffix = ".csv";
    } else {
      json jrows = json::array();
      for (const metrics::TableRow& row : rows) {
        json r{{"b0_mT", row.b0_mT},
               {"value", row.values[0]},
               {"value_2sf", table_io::format_sig2(row.values[0])},
               {"duration_ns", row.durations_ns[0]},
               {"duration_2sf", table_io::format_sig2(row.durations_ns[0])},
               {"cp_region_ok", row.cp_region_ok}};
        if (row.values.size() > 1) {
          r["value_alt"] = row.values[1];
          r["value_alt_2sf"] = table_io::format_sig2(row.values[1]);
          r["duration_alt_ns"] = row.durations_ns[1];
          r["duration_alt_2sf"] = table_io::format_sig2(row.durations_ns[1]);
        }
        if (id == metrics::TableId::VI) r["nonclassical"] = row.values[0] > 2.0 / 3.0;
        jrows.push_back(r);
      }
      bool all_cp = true;
      for (const metrics::TableRow& row : rows) all_cp = all_cp && row.cp_region_ok;
      json doc{{"config_echo", config_echo(rc)},
               {"rows", jrows},
               {"diagnostics", json{{"table", metrics::table_name(id)}, {"cp_all_ok", all_cp}}}};
      content = doc.dump(2) + "\n";
      suffix = ".json";
    }
    const std::string path = dir + "/table_" + metrics::table_name(id) + suffix;
    write_file(path, content);
    std::cout << "wrote " << path << "\n";
  }
  return kExitOk;
}

int run_sweep(const RunConfig& rc) {
  metrics::MetricKind kind;
  if (!metrics::metric_from_name(rc.metric, &kind)) {
    throw std::invalid_argument("unknown metric '" + rc.metric + "'");
  }
  const double b0 = require_single_b0(rc);
  if (!(b0 > 0.0)) throw std::domain_error("sweep needs a positive field");
  const units::PhysicalConfig cfg = rc.physical(b0);
  const double lambda = units::lambda_from_field(cfg);
  const double ns = units::ns_per_unit(cfg);
  metrics::MetricOptions opts;
  opts.y_form = y_form(rc);
  double t1_ns = 0.0;
  if (kind == metrics::MetricKind::phi) {
    opts.phi_t1 = metrics::maximize(metrics::MetricKind::f_measured, lambda, cfg.bath_n, cfg).t_star;
    t1_ns = opts.phi_t1 * ns;
  }
  const bool half_kind = !(kind == metrics::MetricKind::gx_pi ||
                           kind == metrics::MetricKind::f_measured || kind == metrics::MetricKind::idle);
  double t_max_ns = rc.sweep_t_max_ns;
  const double nominal = half_kind ? std::numbers::pi / (2.0 * lambda) : std::numbers::pi / lambda;
  if (!(t_max_ns > 0.0)) t_max_ns = 2.0 * nominal * ns;
  const int points = std::max(2, rc.sweep_points);
  std::ostringstream csv;
  json jrows = json::array();
  csv << "t_ns,value\n";
  for (int i = 1; i <= points; ++i) {
    const double t_ns = t_max_ns * i / points;
    const double t = t_ns / ns;
    const double v = kind == metrics::MetricKind::phi
                         ? metrics::pipeline_average(kind, t, lambda, cfg.bath_n,
                                                     metrics::AverageMethod::two_design, opts)
                         : metrics::closed_form(kind, t, lambda, cfg.bath_n);
    char line[64];
    std::snprintf(line, sizeof(line), "%.6f,%.9f\n", t_ns, v);
    csv << line;
    jrows.push_back(json{{"t_ns", t_ns}, {"value", v}});
  }
  if (rc.output == OutputFormat::csv) {
    emit(rc, "sweep.csv", csv.str());
  } else {
    json doc{{"config_echo", config_echo(rc)},
             {"rows", jrows},
             {"diagnostics", json{{"metric", rc.metric}, {"t1_ns", t1_ns}, {"t_max_ns", t_max_ns}}}};
    emit(rc, "sweep.json", doc.dump(2) + "\n");
  }
  return kExitOk;
}

int run_protocol(const RunConfig& rc) {
  const double b0 = require_single_b0(rc);
  if (!(b0 > 0.0)) throw std::domain_error("protocol needs a positive field");
  const units::PhysicalConfig cfg = rc.physical(b0);
  const double lambda = units::lambda_from_field(cfg);
  const double t1 = units::time_convert(rc.t1_ns, units::TimeDirection::to_dimensionless, cfg);
  const double t2 = units::time_convert(rc.t2_ns, units::TimeDirection::to_dimensionless, cfg);
  const protocol::StepMode mode = rc.ideal ? protocol::StepMode::ideal : protocol::StepMode::noisy;
  const protocol::NoisyRun run = protocol::run_noisy(rc.theta, rc.phi, t1, lambda, cfg.bath_n, mode, y_form(rc));
  const PureState psi = bloch_state(rc.theta, rc.phi);
  json rows = json::array();
  rows.push_back(json{{"stage", "gamma0"}, {"kind", "pure"}, {"amplitudes", pure_json(run.gamma0)}});
  rows.push_back(json{{"stage", "gamma1"}, {"kind", "pure"}, {"amplitudes", pure_json(run.gamma1)}});
  rows.push_back(json{{"stage", "gamma2"}, {"kind", "density"}, {"matrix", density_json(run.gamma2)}});
  rows.push_back(json{{"stage", "gamma3"}, {"kind", "density"}, {"matrix", density_json(run.gamma3)}});
  double recovered_avg = 0.0;
  for (const protocol::Outcome& o : run.record.outcomes) {
    const DensityMatrix recovered =
        protocol::recover(o.sigma, o.j, o.k, t2, lambda, cfg.bath_n, mode, y_form(rc));
    const double fid = fidelity(psi, recovered);
    recovered_avg += o.p * fid;
    rows.push_back(json{{"stage", "outcome_" + std::to_string(o.j) + std::to_string(o.k)},
                        {"kind", "outcome"},
                        {"p", o.p},
                        {"degenerate", o.degenerate},
                        {"sigma", density_json(o.sigma)},
                        {"recovered", density_json(recovered)},
                        {"recovered_fidelity", fid}});
  }
  json doc{{"config_echo", config_echo(rc)},
           {"rows", rows},
           {"diagnostics",
            json{{"theta", rc.theta},
                 {"phi", rc.phi},
                 {"b0_mT", b0},
                 {"lambda", lambda},
                 {"t1_ns", rc.t1_ns},
                 {"t2_ns", rc.t2_ns},
                 {"ideal", rc.ideal},
                 {"sum_p", run.record.total_probability()},
                 {"outcome_weighted_fidelity", recovered_avg}}}};
  emit(rc, "protocol.json", doc.dump(2) + "\n");
  return kExitOk;
}

int run_gate(const RunConfig& rc) {
  const Axis axis = axis_from_name(rc.axis);
  const double b0 = require_single_b0(rc);
  const units::PhysicalConfig cfg = rc.physical(b0);
  const double t = units::time_convert(rc.t_ns, units::TimeDirection::to_dimensionless, cfg);
  const Sign sign = rc.sign == "-" || rc.sign == "minus" ? Sign::minus : Sign::plus;
  json row;
  QubitChannel ch;
  if (axis == Axis::z) {
    const decoherence::ZeroFieldParams p = decoherence::zero_field_params(t, cfg.bath_n);
    ch = decoherence::make_channel(p);
    row = json{{"axis", "z"},
               {"t_ns", rc.t_ns},
               {"gamma", p.gamma},
               {"z", p.z},
               {"idle_fidelity", metrics::closed_form(metrics::MetricKind::idle, t, 1.0, cfg.bath_n)}};
  } else {
    if (!(b0 > 0.0)) throw std::domain_error("gate needs a positive field for the x/y maps");
    const double lambda = units::lambda_from_field(cfg);
    const decoherence::ChannelParams p = decoherence::channel_params(t, lambda, cfg.bath_n);
    ch = decoherence::make_channel(axis, p, sign, y_form(rc));
    row = json{{"axis", rc.axis},
               {"sign", sign == Sign::plus ? "+" : "-"},
               {"t_ns", rc.t_ns},
               {"lambda", lambda},
               {"r1", p.r1},
               {"r2", p.r2},
               {"w", p.w},
               {"gx_pi", metrics::closed_form(metrics::MetricKind::gx_pi, t, lambda, cfg.bath_n)},
               {"g_half_pi", metrics::closed_form(metrics::MetricKind::g_half_pi, t, lambda, cfg.bath_n)}};
  }
  const decoherence::CpReport cp = decoherence::cp_check(ch);
  row["transfer"] = transfer_json(ch);
  row["is_tp"] = cp.is_tp;
  row["is_cp"] = cp.is_cp;
  row["choi_eigenvalues"] = cp.choi_eigenvalues;
  json doc{{"config_echo", config_echo(rc)},
           {"rows", json::array({row})},
           {"diagnostics", json{{"cp_region_ok", cp.is_cp}}}};
  emit(rc, "gate.json", doc.dump(2) + "\n");
  return kExitOk;
}

int run_oracle(const RunConfig& rc) {
  bathsim::CentralSpinModel model;
  model.n_small = rc.n_small;
  model.axis = axis_from_name(rc.axis);
  model.t = units::time_convert(rc.t_ns, units::TimeDirection::to_dimensionless, rc.physical(0.0));
  if (rc.lambda_override) {
    model.lambda = *rc.lambda_override;
  } else {
    model.lambda = units::lambda_from_field(rc.physical(require_single_b0(rc)));
  }
  const bathsim::EvolveMethod method =
      rc.dense ? bathsim::EvolveMethod::dense : bathsim::EvolveMethod::blocks;
  const QubitChannel exact = bathsim::exact_channel(model, method);
  // The conjugation identity is reported against the x channel of the same model.
  bathsim::CentralSpinModel xmodel = model;
  xmodel.axis = Axis::x;
  const QubitChannel x_ref = bathsim::exact_channel(xmodel, method);
  const Axis pattern_axis = model.lambda == 0.0 ? Axis::z : model.axis;
  const bathsim::StructureReport report =
      bathsim::structure_report(exact, pattern_axis, model.axis == Axis::y ? &x_ref : nullptr);
  json row{{"n_small", model.n_small},
           {"lambda", model.lambda},
           {"t", model.t},
           {"axis", rc.axis},
           {"method", rc.dense ? "dense" : "blocks"},
           {"transfer", transfer_json(exact)},
           {"max_off_pattern", report.max_off_pattern},
           {"pattern_ok", report.pattern_ok},
           {"is_cp", report.cp.is_cp},
           {"is_tp", report.cp.is_tp},
           {"choi_eigenvalues", report.cp.choi_eigenvalues}};
  if (pattern_axis == Axis::z) {
    row["fitted"] = json{{"gamma", report.gamma}, {"z", report.z}};
  } else {
    row["fitted"] = json{{"r1", report.r1}, {"r2", report.r2}, {"w", report.w}};
  }
  if (report.y_conjugation_residual >= 0.0) {
    row["y_conjugation_residual"] = report.y_conjugation_residual;
  }
  json doc{{"config_echo", config_echo(rc)},
           {"rows", json::array({row})},
           {"diagnostics", json{{"pattern_ok", report.pattern_ok}, {"is_cp", report.cp.is_cp}}}};
  emit(rc, "oracle.json", doc.dump(2) + "\n");
  return kExitOk;
}

int run_erf_selftest() {
  const cerf::SelfTestResult r = cerf::self_test();
  char line[128];
  std::snprintf(line, sizeof(line), "faddeeva self-test: max relative error %.3e over %zu points\n",
                r.max_rel_err, r.points);
  std::cout << line;
  if (!(r.max_rel_err <= 1e-10)) {
    std::cerr << "qdotsim: self-test deviation above 1e-10\n";
    return kExitInternalError;
  }
  return kExitOk;
}

void load_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config file must hold one flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") rc.command = value.get<std::string>();
    else if (key == "b0") rc.b0_list_mT = value.get<std::vector<double>>();
    else if (key == "bath_n") rc.bath_n = value.get<double>();
    else if (key == "a_ev") rc.a_eV = value.get<double>();
    else if (key == "mu_b") rc.mu_b_eV_per_T = value.get<double>();
    else if (key == "hbar") rc.hbar_eV_s = value.get<double>();
    else if (key == "output") rc.output = value.get<std::string>() == "json" ? OutputFormat::json : OutputFormat::csv;
    else if (key == "out") rc.output_path = value.get<std::string>();
    else if (key == "strict_paper_ey") rc.strict_paper_ey = value.get<bool>();
    else if (key == "joint_phi_opt") rc.joint_phi_opt = value.get<bool>();
    else if (key == "which") rc.which = value.get<std::string>();
    else if (key == "metric") rc.metric = value.get<std::string>();
    else if (key == "points") rc.sweep_points = value.get<int>();
    else if (key == "t_max_ns") rc.sweep_t_max_ns = value.get<double>();
    else if (key == "theta") rc.theta = value.get<double>();
    else if (key == "phi") rc.phi = value.get<double>();
    else if (key == "t1_ns") rc.t1_ns = value.get<double>();
    else if (key == "t2_ns") rc.t2_ns = value.get<double>();
    else if (key == "ideal") rc.ideal = value.get<bool>();
    else if (key == "axis") rc.axis = value.get<std::string>();
    else if (key == "sign") rc.sign = value.get<std::string>();
    else if (key == "t_ns") rc.t_ns = value.get<double>();
    else if (key == "n_small") rc.n_small = value.get<int>();
    else if (key == "lambda") rc.lambda_override = value.get<double>();
    else if (key == "dense") rc.dense = value.get<bool>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

}  // namespace

units::PhysicalConfig RunConfig::physical(double b0_mT) const {
  units::PhysicalConfig cfg;
  cfg.b0_mT = b0_mT;
  cfg.bath_n = bath_n;
  cfg.a_eV = a_eV;
  cfg.mu_b_eV_per_T = mu_b_eV_per_T;
  cfg.hbar_eV_s = hbar_eV_s;
  return cfg;
}

int main(int argc, const char* const* argv) {
  RunConfig rc;

  // The config file seeds the defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(argv[i + 1], rc);
      } catch (const io_error& e) {
        std::cerr << "qdotsim: " << e.what() << "\n";
        return kExitIoError;
      } catch (const std::exception& e) {
        std::cerr << "qdotsim: " << e.what() << "\n";
        return kExitBadArguments;
      }
    }
  }

  CLI::App app{"hyperfine-bath decoherence analysis of the three-qubit spin teleportation protocol"};
  app.fallthrough();
  std::string config_path;
  std::string output_name = rc.output == OutputFormat::json ? "json" : "csv";
  double lambda_flag = rc.lambda_override.value_or(-1.0);
  app.add_option("--config", config_path, "flat JSON config file (flags win)");
  app.add_option("--b0", rc.b0_list_mT, "field values in mT");
  app.add_option("--bath-n", rc.bath_n, "bath spin count N");
  app.add_option("--a-ev", rc.a_eV, "hyperfine coupling A in eV");
  app.add_option("--mu-b", rc.mu_b_eV_per_T, "Bohr magneton in eV/T");
  app.add_option("--hbar", rc.hbar_eV_s, "hbar in eV s");
  app.add_option("--output", output_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", rc.output_path, "output path (directory for tables, file otherwise)");
  app.add_flag("--strict-paper-ey", rc.strict_paper_ey, "use the literal published y map");
  app.add_flag("--joint-phi-opt", rc.joint_phi_opt, "joint (t1, t2) sensitivity optimisation");
  app.add_option("--which", rc.which, "table to reproduce: I, III, IV, V, VI or all");
  app.add_option("--metric", rc.metric, "sweep metric name");
  app.add_option("--points", rc.sweep_points, "sweep grid points");
  app.add_option("--t-max-ns", rc.sweep_t_max_ns, "sweep upper bound in ns");
  app.add_option("--theta", rc.theta, "input state polar angle");
  app.add_option("--phi", rc.phi, "input state azimuth");
  app.add_option("--t1-ns", rc.t1_ns, "rotation-step duration in ns");
  app.add_option("--t2-ns", rc.t2_ns, "per-pulse recovery duration in ns");
  app.add_flag("--ideal", rc.ideal, "exact unitaries instead of the noisy maps");
  app.add_option("--axis", rc.axis, "x, y or z");
  app.add_option("--sign", rc.sign, "+ or -");
  app.add_option("--t-ns", rc.t_ns, "evaluation time in ns");
  app.add_option("--n-small", rc.n_small, "bath spins for the exact model (1..12)");
  app.add_option("--lambda", lambda_flag, "dimensionless field (overrides --b0)");
  app.add_flag("--dense", rc.dense, "force the dense evolution path");

  app.add_subcommand("tables", "reproduce the fidelity/duration tables");
  app.add_subcommand("sweep", "fidelity-versus-time curve for one metric");
  app.add_subcommand("protocol", "dump all intermediate states of one run");
  app.add_subcommand("gate", "channel parameters and CP diagnostics at one point");
  app.add_subcommand("oracle", "exact central-spin channel report");
  app.add_subcommand("erf-selftest", "kernel check against embedded references");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitBadArguments;
  }

  rc.output = output_name == "json" ? OutputFormat::json : OutputFormat::csv;
  if (lambda_flag >= 0.0) rc.lambda_override = lambda_flag;
  for (const CLI::App* sub : app.get_subcommands()) rc.command = sub->get_name();
  if (rc.command.empty()) {
    std::cerr << "qdotsim: a subcommand is required (tables, sweep, protocol, gate, oracle, erf-selftest)\n";
    return kExitBadArguments;
  }

  try {
    if (rc.command == "tables") return run_tables(rc);
    if (rc.command == "sweep") return run_sweep(rc);
    if (rc.command == "protocol") return run_protocol(rc);
    if (rc.command == "gate") return run_gate(rc);
    if (rc.command == "oracle") return run_oracle(rc);
    if (rc.command == "erf-selftest") return run_erf_selftest();
    std::cerr << "qdotsim: unknown command '" << rc.command << "'\n";
    return kExitBadArguments;
  } catch (const io_error& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitIoError;
  } catch (const internal_error& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::domain_error& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "qdotsim: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace qdot::cli
