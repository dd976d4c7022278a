#include <doctest.h>

#include <cmath>

#include "cvab/errors.hpp"
#include "cvab/gaussian_state.hpp"
#include "cvab/surface_code.hpp"
#include "oracles.hpp"

using namespace cvab;
using namespace cvab::engine;
using lattice::Boundary;
using lattice::Lattice;

namespace {

Eigen::VectorXd unit(int dim, int k, double v = 1.0) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[k] = v;
  return e;
}

}  // namespace

TEST_CASE("single node is the vacuum at s = 1") {
  const auto st = build_cluster_state(Eigen::MatrixXd::Zero(1, 1), 1.0);
  CHECK((st.covariance() - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
  CHECK_THROWS_AS(build_cluster_state(Eigen::MatrixXd::Zero(1, 1), 0.0), DomainError);
}

TEST_CASE("two-node nullifier variance") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  for (double s : {1.0, 3.0, 10.0}) {
    const auto st = build_cluster_state(a, s);
    // p1 - q2 in (q1, q2, p1, p2) ordering.
    Eigen::VectorXd c(4);
    c << 0, -1, 1, 0;
    CHECK(st.covariance_of(c, c) == doctest::Approx(0.5 / (s * s)).epsilon(1e-12));
    // Direct composition: Var(q_k) = s^2/2, Var(p_k) = 1/(2 s^2) + s^2/2.
    CHECK(st.covariance()(2, 2) == doctest::Approx(0.5 / (s * s) + 0.5 * s * s));
    CHECK(st.is_pure());
  }
}

TEST_CASE("canonical cluster is pure and physical") {
  const Lattice lat(4, 4, Boundary::toroidal);
  const auto st = build_canonical_cluster(lat, 1.2);
  CHECK(st.modes() == 64);
  CHECK(st.uncertainty_margin() > -1e-9);
  CHECK(st.is_pure(1e-9));
}

TEST_CASE("homodyne on a product vacuum") {
  RandomStream rng(3);
  const auto vac = GaussianState::vacuum(3);
  double sum = 0.0, sum_sq = 0.0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto res = homodyne_measure(vac, 0, Quadrature::q, std::nullopt, &rng);
    sum += res.outcome;
    sum_sq += res.outcome * res.outcome;
    if (t == 0) {
      CHECK(res.state.modes() == 2);
      CHECK((res.state.covariance() - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
    }
  }
  const double mean = sum / trials;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(0.5 / trials));
  CHECK(sum_sq / trials == doctest::Approx(0.5).epsilon(0.04));
  CHECK_THROWS_AS(homodyne_measure(vac, 0, Quadrature::q, std::nullopt, nullptr), ValidationError);
  CHECK_THROWS_AS(homodyne_measure(vac, 3, Quadrature::q, 0.0), IndexError);
}

TEST_CASE("homodyne matches dense conditioning") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const auto st = build_cluster_state(a, 1.0);
  const auto res = homodyne_measure(st, 1, Quadrature::p, 0.0);
  const Eigen::MatrixXd expect = oracle::condition_reduced(st.covariance(), 2, 1, true);
  CHECK((res.state.covariance() - expect).norm() < 1e-12);
  // Graph rule by hand: Z_1 = i - 1/i = 2i, so Var(q) = 1/4 and Var(p) = 1.
  CHECK(res.state.covariance()(0, 0) == doctest::Approx(0.25));
  CHECK(res.state.covariance()(1, 1) == doctest::Approx(1.0));
  CHECK(res.state.is_pure());

  // Larger random check against the oracle, both quadratures.
  const Lattice lat(2, 2, Boundary::toroidal);
  const auto cl = build_canonical_cluster(lat, 0.9);
  for (int mode : {0, 5, 11}) {
    for (bool p : {false, true}) {
      const auto r = homodyne_measure(cl, mode, p ? Quadrature::p : Quadrature::q, 0.3);
      const Eigen::MatrixXd e = oracle::condition_reduced(cl.covariance(), cl.modes(), mode, p);
      CHECK((r.state.covariance() - e).norm() < 1e-10);
    }
  }
}

TEST_CASE("degenerate quadrature is rejected") {
  Eigen::MatrixXd cov = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  cov(0, 0) = 0.0;
  const GaussianState st(Eigen::VectorXd::Zero(2), cov);
  CHECK_THROWS_AS(homodyne_measure(st, 0, Quadrature::q, 0.0), DegenerateVarianceError);
}

TEST_CASE("sequential homodyne samples the joint distribution") {
  Eigen::MatrixXd a(3, 3);
  a << 0, 1, 0.5, 1, 0, -0.7, 0.5, -0.7, 0;
  const auto st = build_cluster_state(a, 1.4).displaced(unit(6, 4, 0.8));
  const Eigen::MatrixXd exact = st.covariance().bottomRightCorner(3, 3);
  const Eigen::VectorXd exact_mean = st.mean().tail(3);
  const int trials = 40000;
  RandomStream rng(17);
  Eigen::MatrixXd chain(trials, 3), direct(trials, 3);
  const Eigen::MatrixXd l = exact.llt().matrixL();
  for (int t = 0; t < trials; ++t) {
    GaussianState cur = st;
    for (int k = 0; k < 3; ++k) {
      auto res = homodyne_measure(cur, 0, Quadrature::p, std::nullopt, &rng);
      chain(t, k) = res.outcome;
      cur = res.state;
    }
    Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
    direct.row(t) = (exact_mean + l * z).transpose();
  }
  for (const Eigen::MatrixXd* sample : {&chain, &direct}) {
    const Eigen::RowVectorXd mean = sample->colwise().mean();
    const Eigen::MatrixXd centred = sample->rowwise() - mean;
    const Eigen::MatrixXd cov = centred.transpose() * centred / (trials - 1.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(mean[i] - exact_mean[i]) < 4.0 * std::sqrt(exact(i, i) / trials));
      for (int k = 0; k < 3; ++k) {
        const double se = std::sqrt((exact(i, i) * exact(k, k) + exact(i, k) * exact(i, k)) / trials);
        CHECK(std::abs(cov(i, k) - exact(i, k)) < 4.0 * se);
      }
    }
  }
}

TEST_CASE("reduction annihilates every nullifier") {
  for (auto [rows, cols, b] : {std::tuple{4, 4, Boundary::toroidal}, std::tuple{2, 4, Boundary::toroidal},
                               std::tuple{3, 3, Boundary::open}, std::tuple{2, 2, Boundary::open}}) {
    for (double s : {0.8, 1.3}) {
      const Lattice lat(rows, cols, b);
      RandomStream rng(5);
      const auto rec =
          cluster_to_surface_code(build_canonical_cluster(lat, s), lat, s, OutcomeSource::sampled(rng));
      CHECK(rec.state.modes() == lat.num_edges());
      CHECK(rec.state.is_pure(1e-9));
      CHECK(rec.state.uncertainty_margin() > -1e-9);
      for (const auto& v : lat.vertices()) CHECK(excitation(rec.state, vertex_nullifier(lat, v.index, s)) < 1e-9);
      for (const auto& f : lat.faces()) CHECK(excitation(rec.state, face_nullifier(lat, f.index, s)) < 1e-9);
      // Reduced graph: <p p^T> = U/2 and <q q^T> = U^-1/2.
      const Eigen::MatrixXd u = surface_code_U(lat, s);
      const int ne = lat.num_edges();
      CHECK((rec.state.covariance().bottomRightCorner(ne, ne) - 0.5 * u).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((rec.state.covariance().topLeftCorner(ne, ne) - 0.5 * u.inverse()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("nullifier excitation detects a non-code state") {
  const Lattice lat(2, 2, Boundary::toroidal);
  const auto vac = GaussianState::vacuum(lat.num_edges());
  CHECK(excitation(vac, vertex_nullifier(lat, 0, 1.0)) > 0.1);
}

TEST_CASE("open patch lines carry the GHZ structure") {
  const double s = 1.7;
  const Lattice lat(3, 3, Boundary::open);
  const auto rec = cluster_to_surface_code(build_canonical_cluster(lat, s), lat, s, OutcomeSource::zeros());
  const int ne = lat.num_edges();
  const Eigen::MatrixXd pp = 2.0 * rec.state.covariance().bottomRightCorner(ne, ne);
  for (int row = 0; row < 3; ++row) {
    const auto line = lat.primal_row(row);
    const int len = static_cast<int>(line.size());
    for (int i = 0; i < len; ++i) {
      for (int k = 0; k < len; ++k) {
        double expect = 0.0;
        if (i == k) expect = (i == 0 || i == len - 1) ? s * s + 1.0 / (s * s) : 2.0 * s * s + 1.0 / (s * s);
        if (std::abs(i - k) == 1) expect = s * s;
        CHECK(pp(line.edges[i], line.edges[k]) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zero outcomes give zero string shifts") {
  const Lattice lat(2, 4, Boundary::toroidal);
  const auto rec = cluster_to_surface_code(build_canonical_cluster(lat, 1.1), lat, 1.1, OutcomeSource::zeros());
  REQUIRE(rec.Q1.has_value());
  CHECK(*rec.Q1 == 0.0);
  CHECK(rec.Q2 == 0.0);
  CHECK(rec.state.mean().norm() == 0.0);
}

TEST_CASE("pattern mismatch") {
  const Lattice lat(2, 4, Boundary::toroidal);
  const Lattice other(2, 2, Boundary::toroidal);
  CHECK_THROWS_AS(cluster_to_surface_code(build_canonical_cluster(other, 1.0), lat, 1.0, OutcomeSource::zeros()),
                  PatternError);
}

TEST_CASE("string shift recomputed from the face outcomes") {
  const double s = 1.3;
  const Lattice lat(4, 4, Boundary::toroidal);
  RandomStream rng(21);
  const auto rec = cluster_to_surface_code(build_canonical_cluster(lat, s), lat, s, OutcomeSource::sampled(rng), 1);
  // Faces above and below horizontal edge (c, j) sit at cluster (2c, 2j +- 1).
  const auto line = lat.primal_row(1);
  double sum = 0.0;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const auto site = lat.edges()[line.edges[k]].site;
    const int h = lat.cluster_height();
    const double above = rec.q_outcomes.at(lat.cluster_node(site.x, (site.y + 1) % h));
    const double below = rec.q_outcomes.at(lat.cluster_node(site.x, (site.y - 1 + h) % h));
    sum += line.signs[k] * (above + below);
  }
  CHECK(rec.Q2 == doctest::Approx(s / std::sqrt(2.0 * line.size()) * sum).epsilon(1e-14));
  CHECK(rec.Q2 != 0.0);
}

TEST_CASE("string momentum mean equals the shift correction") {
  for (auto b : {Boundary::toroidal, Boundary::open}) {
    const double s = 1.4;
    const Lattice lat = b == Boundary::toroidal ? Lattice(2, 6, b) : Lattice(3, 3, b);
    const auto cluster = build_canonical_cluster(lat, s);
    for (int seed = 0; seed < 3; ++seed) {
      RandomStream rng(100 + seed);
      const auto rec = cluster_to_surface_code(cluster, lat, s, OutcomeSource::sampled(rng));
      const auto line = lat.primal_row(0);
      const auto mom = measurement_covariance(rec.state, {arc_observable(line)});
      CHECK(mom.means[0] == doctest::Approx(message_offset(rec.Q2, s)).epsilon(1e-9));
      CHECK(mom.covariance(0, 0) == doctest::Approx(0.5 / (s * s)).epsilon(1e-9));
      // Changing only the vertex outcomes leaves the string mean alone.
      std::map<int, double> forced = rec.q_outcomes;
      for (const auto& [node, value] : rec.p_outcomes) forced[node] = value + 3.0;
      const auto rec2 = cluster_to_surface_code(cluster, lat, s, OutcomeSource::fixed(forced));
      const auto mom2 = measurement_covariance(rec2.state, {arc_observable(line)});
      CHECK(mom2.means[0] == doctest::Approx(mom.means[0]).epsilon(1e-9));
    }
  }
}

TEST_CASE("GHZ line covariances") {
  for (double s : {0.7, 1.0, 2.5}) {
    const Lattice lat(1, 3, Boundary::open);
    const auto rec = cluster_to_surface_code(build_canonical_cluster(lat, s), lat, s, OutcomeSource::zeros());
    CHECK(rec.state.modes() == 4);
    const auto part = lattice::partition_wedges(lat, 2, 2);
    const auto mom = measurement_covariance(rec.state, arc_observables(part));
    CHECK(mom.covariance(0, 1) == doctest::Approx(-s * s / 4.0).epsilon(1e-12));
    CHECK(mom.covariance(0, 0) == doctest::Approx(s * s / 4.0 + 0.5 / (s * s)).epsilon(1e-12));
    const auto total = measurement_covariance(rec.state, {union_observable(part)});
    CHECK(total.covariance(0, 0) == doctest::Approx(0.5 / (s * s)).epsilon(1e-12));
  }
}

TEST_CASE("arc observable edge cases") {
  const auto vac = GaussianState::vacuum(2);
  const auto mom = measurement_covariance(vac, {ArcObservable{}});
  CHECK(mom.covariance(0, 0) == 0.0);
  CHECK_THROWS_AS(measurement_covariance(vac, {ArcObservable{{2}, {1}}}), IndexError);
}

TEST_CASE("string displacement") {
  const double s = 1.2;
  const Lattice lat(4, 8, Boundary::toroidal);
  const auto part = lattice::partition_wedges(lat, 4, 2);
  const auto rec = cluster_to_surface_code(build_canonical_cluster(lat, s), lat, s, OutcomeSource::zeros());
  const auto arcs = arc_observables(part);
  const auto before = measurement_covariance(rec.state, arcs);
  const auto total_before = measurement_covariance(rec.state, {union_observable(part)});

  const auto same = string_displacement(rec.state, part, 1, lat.dual_column(2), lat, 0.0);
  CHECK(same.mean() == rec.state.mean());

  for (int sender = 0; sender < 4; ++sender) {
    for (int offset = 0; offset < 2; ++offset) {
      const int col = part.arcs[sender].first_edge_col + offset;
      const double r = 2.5;
      const auto moved = string_displacement(rec.state, part, sender, lat.dual_column(col), lat, r);
      CHECK(moved.covariance() == rec.state.covariance());
      const auto after = measurement_covariance(moved, arcs);
      for (int j = 0; j < 4; ++j) {
        const double expect = j == sender ? std::sqrt(4.0) * r : 0.0;
        CHECK(after.means[j] - before.means[j] == doctest::Approx(expect).epsilon(1e-12));
      }
      const auto total = measurement_covariance(moved, {union_observable(part)});
      CHECK(total.means[0] - total_before.means[0] == doctest::Approx(r).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(string_displacement(rec.state, part, 0, lat.dual_column(3), lat, 1.0), DomainError);
}
