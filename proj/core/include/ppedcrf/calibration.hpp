#pragma once

#include "ppedcrf/image.hpp"

namespace ppedcrf {

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-5;
  double clip_bound = 1.0;  // C, in pixel-intensity units

  void validate() const;
};

inline constexpr double kDefaultEpsDiv = 1e-6;

/// alpha * p / (max(p) + eps_div).
ControlMap ncp_control(const MaskMap& mask, double alpha, double eps_div = kDefaultEpsDiv);

/// Gaussian-mechanism scale C * sqrt(2 ln(1.25 / delta)) / epsilon.
double calibrate_sigma(const PrivacyBudget& budget);

/// Inverse of calibrate_sigma: the epsilon that yields `sigma_target` under
/// the template's delta and C. The template's epsilon is ignored.
double sigma_for_target(const PrivacyBudget& budget_template, double sigma_target);

}  // namespace ppedcrf
