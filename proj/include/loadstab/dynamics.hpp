#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "loadstab/graph.hpp"

namespace loadstab {

enum class DynamicsFamily { LinearLoad, GeneralScalar, CapacityTransformed };

/// Parametrization of the node self-dynamics f and pairwise coupling g.
///
/// LinearLoad fixes f(l) = beta (1 - l), g(x) = gamma x. GeneralScalar takes
/// caller-supplied twice-differentiable callables with g(0) = 0 (the one
/// machine-checked condition). CapacityTransformed is the image of the linear
/// family under the per-node inversion c_i = d_i / l_i.
struct DynamicsSpec {
  DynamicsFamily family = DynamicsFamily::LinearLoad;
  double beta = 0.0;
  double gamma = 0.0;
  std::function<double(double)> self_rate;      // f
  std::function<double(double)> coupling_rate;  // g
  Eigen::VectorXd demands;                      // capacity family only
  std::array<double, 2> root_bracket{0.0, 1.0};

  static DynamicsSpec linear_load(double beta, double gamma);
  static DynamicsSpec general(std::function<double(double)> f,
                              std::function<double(double)> g,
                              std::array<double, 2> root_bracket);
  static DynamicsSpec capacity(double beta, double gamma,
                               Eigen::VectorXd demands);
};

/// Fixed-step sample of a state trajectory; row k of `states` is the state
/// at times(k).
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
  DynamicsSpec spec;
  Network network;
};

struct EquilibriumReport {
  double r;  // root of f
  Eigen::VectorXd equilibrium;
  double residual;
};

/// Uniform equilibrium r*1 from the root of f (node_count < 0 infers the
/// state dimension: demands for the capacity family, a scalar otherwise).
/// GeneralScalar roots are located by bisection inside spec.root_bracket.
EquilibriumReport find_uniform_equilibrium(const DynamicsSpec& spec,
                                           Eigen::Index node_count = -1);

/// Right-hand side of the coupled system at one state; the exact field the
/// integrator steps.
Eigen::VectorXd vector_field(const DynamicsSpec& spec, const Network& network,
                             const Eigen::VectorXd& state);

/// Classical fixed-step 4th-order integration of
///   dl_i/dt = f(l_i) + sum_j a_ji g(l_j - l_i).
/// A CapacityTransformed spec dispatches to simulate_capacity.
Trajectory simulate(const DynamicsSpec& spec, const Network& network,
                    const Eigen::VectorXd& x0, double t_end, double dt);

/// Integration of the capacity-space field
///   dc_i/dt = beta c_i (1 - c_i/d_i)
///             + sum_j gamma a_ji c_i (1 - c_i d_j / (c_j d_i)).
/// States must stay strictly positive; a coordinate at or below the 1e-12
/// floor raises SingularityError (the field divides by c_j).
Trajectory simulate_capacity(const DynamicsSpec& spec, const Network& network,
                             const Eigen::VectorXd& c0, double t_end,
                             double dt);

/// Exponential contraction rate towards `equilibrium`, as a positive number:
/// least-squares slope of log ||x(t) - eq||_2 over the final half of the
/// samples. The tail window skips the fast transients so the slowest mode
/// dominates the fit.
double estimate_contraction_rate(const Trajectory& trajectory,
                                 const Eigen::VectorXd& equilibrium);

}  // namespace loadstab
