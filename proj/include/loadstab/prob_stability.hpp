#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "loadstab/graph.hpp"
#include "loadstab/rng.hpp"

namespace loadstab {

/// Uniform measurement noise: the scaling rate is observed as beta + zeta
/// with zeta ~ U[-b, b], each edge rate as gamma + xi with xi ~ U[-c, c].
struct NoiseModel {
  double beta_half_width = 0.0;   // b
  double gamma_half_width = 0.0;  // c

  void validate() const;
};

/// One concrete noise draw: zeta per node, xi per directed edge (stored at
/// xi(j, i) for the edge j -> i; zero where there is no edge).
struct PerturbationSample {
  Eigen::VectorXd zeta;
  Eigen::MatrixXd xi;
};

/// Draws zeta node-by-node then xi edge-by-edge in canonical edge order from
/// the supplied stream.
PerturbationSample sample_perturbation(const Network& network,
                                       const NoiseModel& noise, SplitRng& rng);

/// Perturbed Jacobian assembled entrywise:
///   J_ii = -beta - zeta_i - sum_j a_ji (gamma + xi_ji)
///   J_ij = a_ji (gamma + xi_ji), i != j.
/// With zero noise this is exactly -beta Id - gamma Lambda^T.
Eigen::MatrixXd assemble_perturbed_jacobian(const Network& network,
                                            double beta, double gamma,
                                            const PerturbationSample& sample);

/// One seeded draw; trial t of the Monte Carlo estimator uses seed
/// SplitRng::derive_seed(seed, t), so individual trials can be replayed.
Eigen::MatrixXd sample_perturbed_jacobian(const Network& network, double beta,
                                          double gamma,
                                          const NoiseModel& noise,
                                          std::uint64_t seed);

/// Rightmost point of each node's Gershgorin row disc under the sample:
///   s_i = -beta - zeta_i + sum_j a_ji (|gamma + xi_ji| - gamma - xi_ji).
/// max_i s_i < 0 certifies the sampled system stable.
Eigen::VectorXd gershgorin_margin(const Network& network, double beta,
                                  double gamma,
                                  const PerturbationSample& sample);

/// Continuous part of the density of Y = sum of n_terms variables, each 0
/// with probability (1 + gamma/c)/2 and U[0, 2(c - gamma)] otherwise
/// (requires c > gamma >= 0). The distribution also has an atom at 0 whose
/// mass irwin_hall_mixture_atom reports; continuous integral plus atom is 1.
double irwin_hall_mixture_pdf(double x, int n_terms, double gamma, double c);
double irwin_hall_mixture_atom(int n_terms, double gamma, double c);

/// P(s_i < 0) for a node of the given in-degree. Exact 1 when c <= gamma and
/// b < beta; the closed-form uniform tail when the coupling term is absent;
/// otherwise the convolution integral of the mixture density against the
/// uniform window, evaluated by quadrature to better than 1e-6 absolute.
double prob_s_negative(double beta, double b, double gamma, double c,
                       int degree);

struct McEstimate {
  double probability = 0.0;
  long trials = 0;
  double ci95_half_width = 0.0;
  std::uint64_t seed = 0;
};

struct StabilityBound {
  Eigen::VectorXd per_node_prob;
  double lower_bound = 0.0;
  std::optional<McEstimate> mc;
};

/// Lower bound on the probability that the perturbed system is stable:
/// product over nodes of P(s_i < 0), each node using its own in-degree.
/// Requires unit edge weights (the per-edge noise terms enter unscaled).
StabilityBound stability_lower_bound(const Network& network, double beta,
                                     double b, double gamma, double c);

/// Fraction of sampled perturbed Jacobians whose spectral abscissa is
/// negative, with a 95% normal-approximation confidence interval.
/// Deterministic in the seed regardless of thread count.
McEstimate mc_stability_probability(const Network& network, double beta,
                                    double gamma, const NoiseModel& noise,
                                    long trials, std::uint64_t seed);

}  // namespace loadstab
