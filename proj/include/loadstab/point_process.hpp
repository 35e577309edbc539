#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "loadstab/graph.hpp"

namespace loadstab {

/// Axis-aligned rectangular deployment region.
struct Window {
  double x_min;
  double x_max;
  double y_min;
  double y_max;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }

  Window dilated(double margin) const {
    return Window{x_min - margin, x_max + margin, y_min - margin,
                  y_max + margin};
  }

  void validate() const;

  static Window unit_square() { return Window{0.0, 1.0, 0.0, 1.0}; }
};

/// Planar site layout, one row per point, plus the seed that produced it.
struct PointSet {
  Eigen::MatrixX2d points;
  Window window;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.rows(); }
};

struct PppParams {
  double intensity;  // expected points per unit area
};

enum class ClusterKernel {
  UniformDisc,  // daughters uniform in the disc of radius cluster_radius
  Gaussian,     // daughters displaced N(0, cluster_radius^2) per axis
};

struct PcpParams {
  double parent_intensity;
  double cluster_radius;
  double mean_daughters;
  ClusterKernel kernel = ClusterKernel::UniformDisc;
};

struct ConnectivityParams {
  double radius;        // connect pairs within this Euclidean distance
  double connect_prob;  // independent per-pair connection probability
};

/// Homogeneous Poisson point process on the window: point count
/// Poisson(intensity * area), locations i.i.d. uniform. Deterministic in the
/// seed.
PointSet sample_ppp(const PppParams& params, const Window& window,
                    std::uint64_t seed);

/// Poisson cluster process: Poisson parents, Poisson(mean_daughters)
/// daughters per parent, displaced by the cluster kernel. Parents are drawn
/// on the window dilated by the kernel reach so the daughter process is
/// stationary across the window; daughters falling outside the window are
/// discarded; only daughters become nodes.
PointSet sample_pcp(const PcpParams& params, const Window& window,
                    std::uint64_t seed);

/// sample_pcp plus the parent layout, for diagnostics.
struct PcpSample {
  Eigen::MatrixX2d parents;
  PointSet daughters;
};
PcpSample sample_pcp_detailed(const PcpParams& params, const Window& window,
                              std::uint64_t seed);

/// Random geometric percolation: each unordered pair within distance
/// `radius` receives the symmetric pair of unit-weight directed edges with
/// independent probability `connect_prob`. No self-loops; the adjacency is
/// symmetric with zero diagonal. Deterministic in the seed.
Network connect_rgg(const PointSet& points, const ConnectivityParams& conn,
                    std::uint64_t seed);

}  // namespace loadstab
