#ifndef QDOT_UNITS_HPP_
#define QDOT_UNITS_HPP_

namespace qdot::units {

// Experimental knobs plus the physical constants that tie them to the
// dimensionless variables used everywhere else in the library: the field
// enters only through lambda = 2 mu_B B0 / A and times are measured in units
// of hbar / A.
struct PhysicalConfig {
  double b0_mT = 0.0;                     // external field, millitesla
  double bath_n = 1e6;                    // nuclear spins under the dot
  double a_eV = 1e-10;                    // contact hyperfine coupling
  double mu_b_eV_per_T = 5.788e-5;        // Bohr magneton
  double hbar_eV_s = 6.582119569e-16;

  // Throws std::invalid_argument when out of range.
  void validate() const;
};

enum class TimeDirection { to_ns, to_dimensionless };

// lambda = 2 mu_B B0 / A (the electron g-factor of 2 is baked in).
double lambda_from_field(const PhysicalConfig& cfg);

// Nanoseconds per dimensionless time unit, hbar / A in ns.
double ns_per_unit(const PhysicalConfig& cfg);

// Converts a nonnegative time between ns and dimensionless units.
double time_convert(double value, TimeDirection direction, const PhysicalConfig& cfg);

}  // namespace qdot::units

#endif  // QDOT_UNITS_HPP_
