#include "qdot/units.hpp"

#include <stdexcept>

namespace qdot::units {

void PhysicalConfig::validate() const {
  if (!(bath_n >= 1.0)) throw std::invalid_argument("bath_n must be >= 1");
  if (!(a_eV > 0.0)) throw std::invalid_argument("a_eV must be positive");
  if (!(b0_mT >= 0.0)) throw std::invalid_argument("b0_mT must be nonnegative");
  if (!(mu_b_eV_per_T > 0.0)) throw std::invalid_argument("mu_b must be positive");
  if (!(hbar_eV_s > 0.0)) throw std::invalid_argument("hbar must be positive");
}

double lambda_from_field(const PhysicalConfig& cfg) {
  cfg.validate();
  return 2.0 * cfg.mu_b_eV_per_T * (cfg.b0_mT * 1e-3) / cfg.a_eV;
}

double ns_per_unit(const PhysicalConfig& cfg) {
  cfg.validate();
  return cfg.hbar_eV_s / cfg.a_eV * 1e9;
}

double time_convert(double value, TimeDirection direction, const PhysicalConfig& cfg) {
  if (!(value >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const double scale = ns_per_unit(cfg);
  return direction == TimeDirection::to_ns ? value * scale : value / scale;
}

}  // namespace qdot::units
