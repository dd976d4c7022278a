#pragma once

#include <string>

namespace cvab::calibration {

enum class Construction { surface_macronode, linear_macronode, direct };

struct SqueezingSpec {
  double db = 0.0;
  double xi = 0.0;
  double s_effective = 1.0;
  Construction construction = Construction::direct;
};

/// Squeezing parameter of a source with the given dB level: db ln(10) / 20.
double xi_from_db(double db);

/// Effective s after the reduction of the given construction.
///   surface: (1/2) sqrt(sinh 2 xi);  linear: sqrt(sinh 2 xi / 2);  direct: 10^{db/20}.
double effective_s(double db, Construction construction);

/// 20 log10 s. Negative for s < 1, which is allowed.
double effective_db(double s);

SqueezingSpec squeezing_spec(double db, Construction construction);

std::string to_string(Construction c);
Construction construction_from_string(const std::string& name);

}  // namespace cvab::calibration
