#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include "cvab/gaussian_state.hpp"
#include "cvab/lattice.hpp"

namespace cvab {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

nlohmann::json path_to_json(const lattice::OrientedPath& path);
nlohmann::json lattice_to_json(const lattice::Lattice& lattice);
nlohmann::json partition_to_json(const lattice::WedgePartition& partition);

/// {"modes", "mean", "covariance"} with the covariance flattened row-major.
nlohmann::json state_to_json(const engine::GaussianState& state);
engine::GaussianState state_from_json(const nlohmann::json& j);

}  // namespace cvab
