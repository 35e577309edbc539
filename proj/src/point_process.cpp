#include "loadstab/point_process.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "loadstab/errors.hpp"
#include "loadstab/rng.hpp"

namespace loadstab {

namespace {

void require_finite_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ParameterError(std::string(name) + " must be finite and > 0");
  }
}

Eigen::MatrixX2d uniform_points(Eigen::Index count, const Window& window,
                                SplitRng& rng) {
  Eigen::MatrixX2d points(count, 2);
  for (Eigen::Index k = 0; k < count; ++k) {
    points(k, 0) = rng.uniform(window.x_min, window.x_max);
    points(k, 1) = rng.uniform(window.y_min, window.y_max);
  }
  return points;
}

}  // namespace

void Window::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw ParameterError("Window: bounds must be finite");
  }
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw ParameterError("Window: requires x_max > x_min and y_max > y_min");
  }
}

PointSet sample_ppp(const PppParams& params, const Window& window,
                    std::uint64_t seed) {
  window.validate();
  require_finite_positive(params.intensity, "PppParams.intensity");

  SplitRng rng(seed);
  const std::int64_t count = rng.poisson(params.intensity * window.area());
  return PointSet{uniform_points(count, window, rng), window, seed};
}

PcpSample sample_pcp_detailed(const PcpParams& params, const Window& window,
                              std::uint64_t seed) {
  window.validate();
  require_finite_positive(params.parent_intensity,
                          "PcpParams.parent_intensity");
  require_finite_positive(params.cluster_radius, "PcpParams.cluster_radius");
  require_finite_positive(params.mean_daughters, "PcpParams.mean_daughters");

  SplitRng rng(seed);

  // Parents live on a dilated window so clusters centred just outside still
  // contribute daughters inside; restricted to the window the daughter
  // process is then stationary with intensity parent_intensity *
  // mean_daughters. The Gaussian kernel is unbounded; four standard
  // deviations of reach captures all but a ~6e-5 fraction per daughter.
  const double reach = params.kernel == ClusterKernel::UniformDisc
                           ? params.cluster_radius
                           : 4.0 * params.cluster_radius;
  const Window parent_window = window.dilated(reach);
  const std::int64_t parent_count =
      rng.poisson(params.parent_intensity * parent_window.area());
  const Eigen::MatrixX2d parents =
      uniform_points(parent_count, parent_window, rng);

  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(static_cast<std::size_t>(
      params.mean_daughters * std::max<std::int64_t>(parent_count, 1)));
  ys.reserve(xs.capacity());

  for (Eigen::Index p = 0; p < parents.rows(); ++p) {
    const std::int64_t offspring = rng.poisson(params.mean_daughters);
    for (std::int64_t k = 0; k < offspring; ++k) {
      double x;
      double y;
      if (params.kernel == ClusterKernel::UniformDisc) {
        const double r = params.cluster_radius * std::sqrt(rng.uniform());
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        x = parents(p, 0) + r * std::cos(phi);
        y = parents(p, 1) + r * std::sin(phi);
      } else {
        // Box-Muller; one normal pair per daughter.
        const double u = rng.uniform();
        const double v = rng.uniform();
        const double mag =
            params.cluster_radius * std::sqrt(-2.0 * std::log1p(-u));
        const double ang = 2.0 * std::numbers::pi * v;
        x = parents(p, 0) + mag * std::cos(ang);
        y = parents(p, 1) + mag * std::sin(ang);
      }
      if (window.contains(x, y)) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
  }

  Eigen::MatrixX2d daughters(static_cast<Eigen::Index>(xs.size()), 2);
  for (Eigen::Index k = 0; k < daughters.rows(); ++k) {
    daughters(k, 0) = xs[static_cast<std::size_t>(k)];
    daughters(k, 1) = ys[static_cast<std::size_t>(k)];
  }
  return PcpSample{parents, PointSet{std::move(daughters), window, seed}};
}

PointSet sample_pcp(const PcpParams& params, const Window& window,
                    std::uint64_t seed) {
  return sample_pcp_detailed(params, window, seed).daughters;
}

Network connect_rgg(const PointSet& points, const ConnectivityParams& conn,
                    std::uint64_t seed) {
  if (points.size() == 0) {
    throw ParameterError("connect_rgg: point set is empty");
  }
  if (!std::isfinite(conn.radius) || conn.radius < 0.0) {
    throw ParameterError("connect_rgg: radius must be finite and >= 0");
  }
  if (!std::isfinite(conn.connect_prob) || conn.connect_prob < 0.0 ||
      conn.connect_prob > 1.0) {
    throw ParameterError("connect_rgg: connect_prob must lie in [0, 1]");
  }

  SplitRng rng(seed);
  const Eigen::Index n = points.size();
  Network network;
  network.adjacency = Eigen::MatrixXd::Zero(n, n);
  network.positions = points.points;

  const double r2 = conn.radius * conn.radius;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 =
          (points.points.row(i) - points.points.row(j)).squaredNorm();
      if (d2 > r2) continue;
      // One coin per unordered pair; offloading relations are mutual.
      if (rng.bernoulli(conn.connect_prob)) {
        network.adjacency(i, j) = 1.0;
        network.adjacency(j, i) = 1.0;
      }
    }
  }
  return network;
}

}  // namespace loadstab
