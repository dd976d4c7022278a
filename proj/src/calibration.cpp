#include "cvab/calibration.hpp"

#include <cmath>

#include "cvab/errors.hpp"

namespace cvab::calibration {

double xi_from_db(double db) {
  if (!std::isfinite(db)) throw DomainError("squeezing level must be finite");
  return db * std::log(10.0) / 20.0;
}

double effective_s(double db, Construction construction) {
  const double xi = xi_from_db(db);
  switch (construction) {
    case Construction::direct:
      return std::pow(10.0, db / 20.0);
    case Construction::surface_macronode:
    case Construction::linear_macronode: {
      if (!(db > 0.0)) throw DomainError("macronode constructions need a positive squeezing level");
      const double sh = std::sinh(2.0 * xi);
      return construction == Construction::surface_macronode ? 0.5 * std::sqrt(sh) : std::sqrt(0.5 * sh);
    }
  }
  throw ValidationError("unknown construction");
}

double effective_db(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("squeezing factor must be positive");
  return 20.0 * std::log10(s);
}

SqueezingSpec squeezing_spec(double db, Construction construction) {
  SqueezingSpec out;
  out.db = db;
  out.xi = xi_from_db(db);
  out.s_effective = effective_s(db, construction);
  out.construction = construction;
  return out;
}

std::string to_string(Construction c) {
  switch (c) {
    case Construction::surface_macronode:
      return "surface";
    case Construction::linear_macronode:
      return "linear";
    case Construction::direct:
      return "direct";
  }
  return "direct";
}

Construction construction_from_string(const std::string& name) {
  if (name == "surface" || name == "surface_macronode") return Construction::surface_macronode;
  if (name == "linear" || name == "linear_macronode") return Construction::linear_macronode;
  if (name == "direct") return Construction::direct;
  throw ValidationError("unknown construction '" + name + "' (expected surface, linear or direct)");
}

}  // namespace cvab::calibration
