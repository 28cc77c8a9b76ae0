#include "ppedcrf/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace ppedcrf {

namespace {

double gaussian_factor(double delta) { return std::sqrt(2.0 * std::log(1.25 / delta)); }

}  // namespace

void PrivacyBudget::validate() const {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::invalid_argument,
          "epsilon must be positive");
  require(delta > 0.0 && delta < 1.0, ErrorCode::invalid_argument, "delta must lie in (0, 1)");
  require(clip_bound > 0.0 && std::isfinite(clip_bound), ErrorCode::invalid_argument,
          "clip bound must be positive");
}

ControlMap ncp_control(const MaskMap& mask, double alpha, double eps_div) {
  require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::invalid_argument,
          "alpha must be nonnegative");
  require(eps_div > 0.0, ErrorCode::invalid_argument, "eps_div must be positive");
  const auto values = mask.values();
  const double peak = *std::max_element(values.begin(), values.end());
  const double scale = alpha / (peak + eps_div);
  ControlMap out(mask.width(), mask.height());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = scale * values[i];
  return out;
}

double calibrate_sigma(const PrivacyBudget& budget) {
  budget.validate();
  return budget.clip_bound * gaussian_factor(budget.delta) / budget.epsilon;
}

double sigma_for_target(const PrivacyBudget& budget_template, double sigma_target) {
  require(sigma_target > 0.0 && std::isfinite(sigma_target), ErrorCode::invalid_argument,
          "target sigma0 must be positive");
  require(budget_template.delta > 0.0 && budget_template.delta < 1.0,
          ErrorCode::invalid_argument, "delta must lie in (0, 1)");
  require(budget_template.clip_bound > 0.0, ErrorCode::invalid_argument,
          "clip bound must be positive");
  return budget_template.clip_bound * gaussian_factor(budget_template.delta) / sigma_target;
}

}  // namespace ppedcrf
