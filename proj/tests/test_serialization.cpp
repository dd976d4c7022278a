#include <doctest.h>

#include "cvab/errors.hpp"
#include "cvab/serialization.hpp"

using namespace cvab;
using lattice::Boundary;
using lattice::Lattice;

TEST_CASE("matrix round trip") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0, -2.5, 3.0, 0.125, 1e-300, -7.0;
  const auto j = matrix_to_json(m);
  CHECK(j.dump() == "[[1.0,-2.5,3.0],[0.125,1e-300,-7.0]]");
  CHECK(matrix_from_json(j) == m);
  CHECK(matrix_from_json(nlohmann::json::array()).size() == 0);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("{}")), ValidationError);
}

TEST_CASE("state round trip is exact") {
  const Lattice lat(2, 2, Boundary::toroidal);
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(2 * lat.num_cluster_nodes(), -1.0, 1.0 / 3.0);
  const auto st = engine::build_canonical_cluster(lat, 1.7).displaced(d);
  const auto text = state_to_json(st).dump();
  const auto back = state_from_json(nlohmann::json::parse(text));
  CHECK(back.mean() == st.mean());
  CHECK(back.covariance() == st.covariance());
  CHECK(nlohmann::json::parse(text).at("ordering") == "qq..pp");

  auto bad = state_to_json(st);
  bad["modes"] = 3;
  CHECK_THROWS_AS(state_from_json(bad), ValidationError);
}

TEST_CASE("lattice description") {
  const Lattice lat(2, 2, Boundary::toroidal);
  const auto j = lattice_to_json(lat);
  CHECK(j.at("boundary") == "toroidal");
  CHECK(j.at("vertices").size() == 4);
  CHECK(j.at("edges").size() == 8);
  CHECK(j.at("faces").size() == 4);
  CHECK(j.at("cluster").at("width") == 4);
  // Horizontal edge (0, 0) sits on cluster node (0, 0) between vertex columns 1 and 0.
  const auto& e0 = j.at("edges").at(0);
  CHECK(e0.at("axis") == "horizontal");
  CHECK(e0.at("site") == nlohmann::json::array({0, 0}));
  CHECK(e0.at("orientation") == 1);
  for (const auto& f : j.at("faces")) CHECK(f.at("boundary").size() == 4);

  const auto part = partition_to_json(lattice::partition_wedges(lat, 2, 1));
  CHECK(part.at("arcs").size() == 2);
  CHECK(part.at("arcs").at(1).at("path").at("kind") == "primal");
}
