#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "loadstab/errors.hpp"

namespace loadstab {

/// Directed, non-negatively weighted interaction network.
///
/// Convention throughout: adjacency(j, i) is the weight a_ji of the edge
/// j -> i, i.e. how strongly node i listens to node j. The diagonal is zero.
struct Network {
  Eigen::MatrixXd adjacency;
  std::optional<Eigen::MatrixX2d> positions;

  Eigen::Index node_count() const { return adjacency.rows(); }

  void validate() const {
    if (adjacency.rows() != adjacency.cols()) {
      throw ShapeError("Network: adjacency must be square");
    }
    if (!adjacency.allFinite()) {
      throw DataError("Network: adjacency has non-finite entries");
    }
    if ((adjacency.array() < 0.0).any()) {
      throw DataError("Network: adjacency has negative weights");
    }
    if (adjacency.rows() > 0 &&
        adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0) {
      throw DataError("Network: adjacency has self-loops");
    }
    if (positions && positions->rows() != adjacency.rows()) {
      throw ShapeError("Network: positions/adjacency size mismatch");
    }
  }
};

struct Edge {
  Eigen::Index from;
  Eigen::Index to;
  double weight;
};

/// Edges in (from, to) lexicographic order; the canonical iteration order for
/// anything that attaches per-edge state.
inline std::vector<Edge> edge_list(const Network& network) {
  std::vector<Edge> edges;
  const Eigen::Index n = network.node_count();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = network.adjacency(j, i);
      if (w != 0.0) edges.push_back({j, i, w});
    }
  }
  return edges;
}

/// Weighted in-degree w_i = sum_j a_ji (column sums of the adjacency).
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> in_degree(
    const Eigen::MatrixBase<Derived>& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw ShapeError("in_degree: adjacency must be square");
  }
  return adjacency.colwise().sum().transpose();
}

inline Eigen::VectorXd in_degree(const Network& network) {
  return in_degree(network.adjacency);
}

/// Weighted in-Laplacian  Lambda = diag(w) - A.  Its transpose annihilates
/// the all-ones vector: columns of Lambda sum to zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
in_laplacian(const Eigen::MatrixBase<Derived>& adjacency) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
      laplacian = -adjacency;
  laplacian.diagonal() += in_degree(adjacency);
  return laplacian;
}

inline Eigen::MatrixXd in_laplacian(const Network& network) {
  return in_laplacian(network.adjacency);
}

struct GershgorinDisc {
  double center;
  double radius;
};

enum class DiscMode { Rows, Columns };

/// Disc i is centred at M_ii with radius the absolute off-diagonal sum of
/// row i (Rows) or column i (Columns). Each disc contains at least one
/// eigenvalue; the union of discs contains all of them, in either mode.
template <typename Derived>
std::vector<GershgorinDisc> gershgorin_discs(
    const Eigen::MatrixBase<Derived>& m, DiscMode mode) {
  if (m.rows() != m.cols()) {
    throw ShapeError("gershgorin_discs: matrix must be square");
  }
  const Eigen::Index n = m.rows();
  std::vector<GershgorinDisc> discs;
  discs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double center = static_cast<double>(m(i, i));
    const double abs_sum = mode == DiscMode::Rows
                               ? m.row(i).cwiseAbs().sum()
                               : m.col(i).cwiseAbs().sum();
    discs.push_back({center, abs_sum - std::abs(center)});
  }
  return discs;
}

/// True when z is within tol of some disc in the union.
inline bool in_disc_union(std::complex<double> z,
                          const std::vector<GershgorinDisc>& discs,
                          double tol) {
  for (const auto& d : discs) {
    if (std::abs(z - std::complex<double>(d.center, 0.0)) <= d.radius + tol) {
      return true;
    }
  }
  return false;
}

}  // namespace loadstab
