#include <cmath>

#include "doctest.h"
#include "loadstab/errors.hpp"
#include "loadstab/point_process.hpp"
#include "loadstab/rng.hpp"
#include "support/test_support.hpp"

using namespace loadstab;

TEST_CASE("ppp mean count matches the intensity") {
  const PppParams params{100.0};
  const Window window = Window::unit_square();
  const int seeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    sum += static_cast<double>(
        sample_ppp(params, window, static_cast<std::uint64_t>(s)).size());
  }
  const double mean = sum / seeds;
  const double expected = params.intensity * window.area();
  const double standard_error = std::sqrt(expected / seeds);
  CHECK(std::abs(mean - expected) < 3.0 * standard_error);
}

TEST_CASE("ppp points land inside the window") {
  const Window window{-2.0, 3.0, 1.0, 1.5};
  const PointSet pts = sample_ppp(PppParams{40.0}, window, 9);
  for (Eigen::Index k = 0; k < pts.size(); ++k) {
    CHECK(window.contains(pts.points(k, 0), pts.points(k, 1)));
  }
  CHECK(pts.seed == 9);
}

TEST_CASE("ppp rejects invalid parameters") {
  CHECK_THROWS_AS(sample_ppp(PppParams{-1.0}, Window::unit_square(), 1),
                  ParameterError);
  CHECK_THROWS_AS(sample_ppp(PppParams{0.0}, Window::unit_square(), 1),
                  ParameterError);
  // Degenerate window: zero area.
  CHECK_THROWS_AS(sample_ppp(PppParams{5.0}, Window{0.0, 0.0, 0.0, 1.0}, 1),
                  ParameterError);
}

TEST_CASE("ppp is deterministic in the seed") {
  const PointSet a = sample_ppp(PppParams{50.0}, Window::unit_square(), 7);
  const PointSet b = sample_ppp(PppParams{50.0}, Window::unit_square(), 7);
  REQUIRE(a.size() == b.size());
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pcp mean count matches parent intensity times mean daughters") {
  const PcpParams params{4.0, 0.05, 10.0};
  const Window window = Window::unit_square();
  const int seeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    sum += static_cast<double>(
        sample_pcp(params, window, static_cast<std::uint64_t>(s)).size());
  }
  const double mean = sum / seeds;
  const double expected =
      params.parent_intensity * window.area() * params.mean_daughters;
  // Var = lambda_p area (mu + mu^2) for a compound Poisson count.
  const double variance = params.parent_intensity * window.area() *
                          (params.mean_daughters +
                           params.mean_daughters * params.mean_daughters);
  const double standard_error = std::sqrt(variance / seeds);
  CHECK(std::abs(mean - expected) < 3.0 * standard_error);
}

TEST_CASE("pcp daughters collapse onto parents as the radius vanishes") {
  const PcpParams params{6.0, 1e-9, 8.0};
  const PcpSample sample =
      sample_pcp_detailed(params, Window::unit_square(), 3);
  for (Eigen::Index k = 0; k < sample.daughters.size(); ++k) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < sample.parents.rows(); ++p) {
      nearest = std::min(
          nearest, (sample.daughters.points.row(k) - sample.parents.row(p))
                       .norm());
    }
    CHECK(nearest <= 1e-9);
  }
}

TEST_CASE("pcp is deterministic in the seed") {
  const PcpParams params{4.0, 0.05, 10.0};
  const PointSet a = sample_pcp(params, Window::unit_square(), 3);
  const PointSet b = sample_pcp(params, Window::unit_square(), 3);
  REQUIRE(a.size() == b.size());
  if (a.size() > 0) {
    CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pcp gaussian kernel clips to the window") {
  const PcpParams params{4.0, 0.1, 10.0, ClusterKernel::Gaussian};
  const PointSet pts = sample_pcp(params, Window::unit_square(), 5);
  for (Eigen::Index k = 0; k < pts.size(); ++k) {
    CHECK(Window::unit_square().contains(pts.points(k, 0), pts.points(k, 1)));
  }
}

TEST_CASE("pcp gaussian kernel keeps the analytic mean count") {
  const PcpParams params{4.0, 0.05, 10.0, ClusterKernel::Gaussian};
  const Window window = Window::unit_square();
  const int seeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    sum += static_cast<double>(
        sample_pcp(params, window, 5000 + static_cast<std::uint64_t>(s))
            .size());
  }
  const double expected =
      params.parent_intensity * window.area() * params.mean_daughters;
  const double variance = params.parent_intensity * window.area() *
                          (params.mean_daughters +
                           params.mean_daughters * params.mean_daughters);
  CHECK(std::abs(sum / seeds - expected) <
        3.0 * std::sqrt(variance / seeds));
}

TEST_CASE("pcp rejects invalid parameters") {
  const Window w = Window::unit_square();
  CHECK_THROWS_AS(sample_pcp(PcpParams{0.0, 0.1, 5.0}, w, 1), ParameterError);
  CHECK_THROWS_AS(sample_pcp(PcpParams{1.0, -0.1, 5.0}, w, 1),
                  ParameterError);
  CHECK_THROWS_AS(sample_pcp(PcpParams{1.0, 0.1, 0.0}, w, 1), ParameterError);
}

TEST_CASE("connect_rgg builds the complete graph when everything is in range") {
  Eigen::MatrixX2d pts(5, 2);
  pts << 0.1, 0.1, 0.9, 0.1, 0.5, 0.5, 0.1, 0.9, 0.9, 0.9;
  const PointSet set{pts, Window::unit_square(), 0};
  const Network net = connect_rgg(set, ConnectivityParams{10.0, 1.0}, 1);
  CHECK(edge_list(net).size() == 20);  // N (N - 1) directed entries
  CHECK((net.adjacency - net.adjacency.transpose()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(net.adjacency.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("connect_rgg with zero radius yields no edges") {
  const PointSet pts = sample_ppp(PppParams{30.0}, Window::unit_square(), 4);
  const Network net = connect_rgg(pts, ConnectivityParams{0.0, 1.0}, 2);
  CHECK(edge_list(net).empty());
}

TEST_CASE("connect_rgg halves the edge count at P = 0.5") {
  const PointSet pts = sample_ppp(PppParams{100.0}, Window::unit_square(), 12);
  const ConnectivityParams all{0.2, 1.0};
  const ConnectivityParams half{0.2, 0.5};
  const auto full_edges = edge_list(connect_rgg(pts, all, 99)).size();
  const auto kept_edges = edge_list(connect_rgg(pts, half, 99)).size();
  REQUIRE(full_edges > 0);
  // Directed counts are twice the pair counts; binomial thinning at 3 sigma.
  const double pairs_full = static_cast<double>(full_edges) / 2.0;
  const double pairs_kept = static_cast<double>(kept_edges) / 2.0;
  const double sigma = std::sqrt(pairs_full * 0.25);
  CHECK(std::abs(pairs_kept - 0.5 * pairs_full) <= 3.0 * sigma);
}

TEST_CASE("connect_rgg validates parameters") {
  const PointSet pts = sample_ppp(PppParams{10.0}, Window::unit_square(), 4);
  CHECK_THROWS_AS(connect_rgg(pts, ConnectivityParams{-1.0, 0.5}, 1),
                  ParameterError);
  CHECK_THROWS_AS(connect_rgg(pts, ConnectivityParams{0.5, 1.5}, 1),
                  ParameterError);
  const PointSet empty{Eigen::MatrixX2d(0, 2), Window::unit_square(), 0};
  CHECK_THROWS_AS(connect_rgg(empty, ConnectivityParams{0.5, 0.5}, 1),
                  ParameterError);
}

TEST_CASE("connect_rgg is deterministic and symmetric") {
  const PointSet pts = sample_ppp(PppParams{60.0}, Window::unit_square(), 21);
  const ConnectivityParams conn{0.2, 0.6};
  const Network a = connect_rgg(pts, conn, 5);
  const Network b = connect_rgg(pts, conn, 5);
  CHECK((a.adjacency - b.adjacency).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.adjacency - a.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.positions.has_value());
}
