#ifndef QDOT_CLI_HPP_
#define QDOT_CLI_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qdot/metrics.hpp"
#include "qdot/units.hpp"

namespace qdot::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitDomainError = 3;
inline constexpr int kExitIoError = 4;
inline constexpr int kExitInternalError = 5;

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;  // tables, sweep, protocol, gate, oracle, erf-selftest
  std::vector<double> b0_list_mT = {1, 2, 3, 4, 5, 6};
  double bath_n = 1e6;
  double a_eV = 1e-10;
  double mu_b_eV_per_T = 5.788e-5;
  double hbar_eV_s = 6.582119569e-16;
  OutputFormat output = OutputFormat::csv;
  std::string output_path;  // directory for tables, file otherwise ("" = stdout)
  bool strict_paper_ey = false;
  bool joint_phi_opt = false;

  // tables
  std::string which = "all";
  // sweep
  std::string metric = "gx_pi";
  int sweep_points = 400;
  double sweep_t_max_ns = 0.0;  // 0 = twice the nominal pulse time
  // protocol / gate
  double theta = 1.0471975511965976;  // pi/3
  double phi = 0.7853981633974483;    // pi/4
  double t1_ns = 1.0;
  double t2_ns = 0.0;
  bool ideal = false;
  std::string axis = "x";
  std::string sign = "+";
  double t_ns = 1.0;
  // oracle
  int n_small = 4;
  std::optional<double> lambda_override;
  bool dense = false;

  units::PhysicalConfig physical(double b0_mT) const;
};

// Parses argv (and an optional --config JSON file; flags win) and executes.
// Returns one of the kExit* codes; diagnostics go to stderr.
int main(int argc, const char* const* argv);

}  // namespace qdot::cli

#endif  // QDOT_CLI_HPP_
