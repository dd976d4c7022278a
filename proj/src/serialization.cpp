#include "cvab/serialization.hpp"

#include "cvab/errors.hpp"

namespace cvab {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != cols) throw ValidationError("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

json path_to_json(const lattice::OrientedPath& path) {
  return {{"kind", path.kind == lattice::PathKind::primal ? "primal" : "dual"},
          {"edges", path.edges},
          {"signs", path.signs}};
}

json lattice_to_json(const lattice::Lattice& lat) {
  json vertices = json::array();
  for (const auto& v : lat.vertices()) {
    vertices.push_back({{"index", v.index}, {"row", v.row}, {"col", v.col}, {"node", v.cluster_node}});
  }
  json edges = json::array();
  for (const auto& e : lat.edges()) {
    edges.push_back({{"index", e.index},
                     {"axis", e.axis == lattice::Axis::horizontal ? "horizontal" : "vertical"},
                     {"node", e.cluster_node},
                     {"site", {e.site.x, e.site.y}},
                     {"lower", e.lower},
                     {"upper", e.upper},
                     {"orientation", e.orientation}});
  }
  json faces = json::array();
  for (const auto& f : lat.faces()) {
    json boundary = json::array();
    for (const auto& t : f.boundary) boundary.push_back({{"edge", t.edge}, {"sign", t.sign}});
    faces.push_back({{"index", f.index}, {"node", f.cluster_node}, {"boundary", std::move(boundary)}});
  }
  return {{"rows", lat.rows()},
          {"cols", lat.cols()},
          {"boundary", lattice::to_string(lat.boundary())},
          {"cluster", {{"width", lat.cluster_width()}, {"height", lat.cluster_height()}}},
          {"vertices", std::move(vertices)},
          {"edges", std::move(edges)},
          {"faces", std::move(faces)}};
}

json partition_to_json(const lattice::WedgePartition& part) {
  json arcs = json::array();
  for (const auto& a : part.arcs) {
    arcs.push_back({{"player", a.player},
                    {"row", a.row},
                    {"first_edge_col", a.first_edge_col},
                    {"width", a.width},
                    {"path", path_to_json(a.path)}});
  }
  return {{"n", part.n}, {"w", part.w}, {"row", part.row}, {"arcs", std::move(arcs)}};
}

json state_to_json(const engine::GaussianState& state) {
  const auto& cov = state.covariance();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(cov.size()));
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index k = 0; k < cov.cols(); ++k) flat.push_back(cov(i, k));
  }
  std::vector<double> mean(state.mean().data(), state.mean().data() + state.mean().size());
  return {{"modes", state.modes()}, {"ordering", "qq..pp"}, {"mean", mean}, {"covariance", flat}};
}

engine::GaussianState state_from_json(const json& j) {
  const int modes = j.at("modes").get<int>();
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto flat = j.at("covariance").get<std::vector<double>>();
  const auto dim = static_cast<std::size_t>(2 * modes);
  if (mean.size() != dim || flat.size() != dim * dim) throw ValidationError("state JSON has inconsistent sizes");
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(dim));
  Eigen::MatrixXd cov(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < dim; ++k) cov(i, k) = flat[i * dim + k];
  }
  return {std::move(mu), std::move(cov)};
}

}  // namespace cvab
