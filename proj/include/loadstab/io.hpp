#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "loadstab/dynamics.hpp"
#include "loadstab/graph.hpp"
#include "loadstab/prob_stability.hpp"
#include "loadstab/spectral.hpp"
#include "loadstab/stability.hpp"

namespace loadstab {

/// A network plus the provenance needed to regenerate it:
/// { "n": int, "positions": [[x,y],...]?, "edges": [[j,i,weight],...],
///   "seed": int, "generator": {...} }.
/// Edge [j, i, w] is the directed edge j -> i of weight w, 0-based.
struct NetworkDocument {
  Network network;
  std::uint64_t seed = 0;
  nlohmann::json generator;
};

void write_network_json(const std::filesystem::path& path,
                        const NetworkDocument& doc);
NetworkDocument read_network_json(const std::filesystem::path& path);

/// Eigenvalues as "re,im" rows.
void write_spectrum_csv(const std::filesystem::path& path,
                        const Spectrum& spectrum);

/// Row- and column-mode discs as "mode,center,radius" rows.
void write_discs_csv(const std::filesystem::path& path,
                     const std::vector<GershgorinDisc>& row_discs,
                     const std::vector<GershgorinDisc>& col_discs);

/// Dense matrix dump, one row per line.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);

/// "t,x1,...,xn" rows.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory);

/// A flat JSON array of reals.
Eigen::VectorXd read_vector_json(const std::filesystem::path& path);

void write_verdict_json(const std::filesystem::path& path,
                        const StabilityVerdict& verdict);

void write_bound_json(const std::filesystem::path& path, double beta,
                      double b, double gamma, double c,
                      const StabilityBound& bound);

/// Node/edge scatter of a network with positions.
void write_network_svg(const std::filesystem::path& path,
                       const Network& network);

/// Eigenvalues in the complex plane with Gershgorin disc outlines.
void write_spectrum_svg(const std::filesystem::path& path,
                        const Spectrum& spectrum,
                        const std::vector<GershgorinDisc>& discs);

/// Shortest round-trip decimal form; the determinism anchor for all text
/// output.
std::string format_double(double value);

}  // namespace loadstab
