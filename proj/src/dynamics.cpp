#include "loadstab/dynamics.hpp"

#include <cmath>
#include <utility>

#include "loadstab/errors.hpp"
#include "loadstab/tolerances.hpp"

namespace loadstab {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw DataError(std::string(name) + " must be finite");
  }
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi) {
  if (!(lo < hi)) {
    throw ParameterError("find_uniform_equilibrium: empty root bracket");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw NumericError(
        "find_uniform_equilibrium: no sign change of f in the bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

using Rhs = std::function<void(double, const Eigen::VectorXd&,
                               Eigen::VectorXd&)>;

void load_rhs(const std::vector<Edge>& edges,
              const std::function<double(double)>& f,
              const std::function<double(double)>& g,
              const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
  for (Eigen::Index i = 0; i < x.size(); ++i) dx(i) = f(x(i));
  for (const Edge& e : edges) {
    dx(e.to) += e.weight * g(x(e.from) - x(e.to));
  }
}

void capacity_rhs(const std::vector<Edge>& edges, const Eigen::VectorXd& d,
                  double beta, double gamma, double t,
                  const Eigen::VectorXd& c, Eigen::VectorXd& dc) {
  if ((c.array() <= tol::kCapacityFloor).any()) {
    throw SingularityError(
        "simulate_capacity: capacity reached the singular floor", t);
  }
  dc = (beta * c.array() * (1.0 - c.array() / d.array())).matrix();
  for (const Edge& e : edges) {
    dc(e.to) += gamma * e.weight * c(e.to) *
                (1.0 - c(e.to) * d(e.from) / (c(e.from) * d(e.to)));
  }
}

Trajectory integrate_rk4(const Rhs& rhs, const Eigen::VectorXd& x0,
                         double t_end, double dt) {
  const Eigen::Index n = x0.size();
  const auto steps = static_cast<Eigen::Index>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1, n);
  traj.times(0) = 0.0;
  traj.states.row(0) = x0.transpose();

  Eigen::VectorXd x = x0;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), stage(n);
  for (Eigen::Index s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const double t_next = s + 1 == steps ? t_end : (s + 1) * dt;
    const double h = t_next - t;

    rhs(t, x, k1);
    stage = x + 0.5 * h * k1;
    rhs(t + 0.5 * h, stage, k2);
    stage = x + 0.5 * h * k2;
    rhs(t + 0.5 * h, stage, k3);
    stage = x + h * k3;
    rhs(t + h, stage, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!x.allFinite()) {
      throw DivergenceError("simulate: state became non-finite", t_next);
    }
    traj.times(s + 1) = t_next;
    traj.states.row(s + 1) = x.transpose();
  }
  return traj;
}

void validate_simulation_args(const Network& network,
                              const Eigen::VectorXd& x0, double t_end,
                              double dt) {
  network.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ParameterError("simulate: dt must be positive");
  }
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw ParameterError("simulate: t_end must be at least dt");
  }
  if (x0.size() != network.node_count()) {
    throw ShapeError("simulate: initial state size does not match network");
  }
  if (!x0.allFinite()) {
    throw DataError("simulate: initial state has non-finite entries");
  }
}

}  // namespace

DynamicsSpec DynamicsSpec::linear_load(double beta, double gamma) {
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  DynamicsSpec spec;
  spec.family = DynamicsFamily::LinearLoad;
  spec.beta = beta;
  spec.gamma = gamma;
  spec.self_rate = [beta](double l) { return beta * (1.0 - l); };
  spec.coupling_rate = [gamma](double x) { return gamma * x; };
  spec.root_bracket = {0.0, 1.0};
  return spec;
}

DynamicsSpec DynamicsSpec::general(std::function<double(double)> f,
                                   std::function<double(double)> g,
                                   std::array<double, 2> root_bracket) {
  if (!f || !g) {
    throw ParameterError("DynamicsSpec::general: f and g must be callable");
  }
  if (std::abs(g(0.0)) >= tol::kKernelZero) {
    throw ParameterError("DynamicsSpec::general: g(0) must vanish");
  }
  DynamicsSpec spec;
  spec.family = DynamicsFamily::GeneralScalar;
  spec.self_rate = std::move(f);
  spec.coupling_rate = std::move(g);
  spec.root_bracket = root_bracket;
  return spec;
}

DynamicsSpec DynamicsSpec::capacity(double beta, double gamma,
                                    Eigen::VectorXd demands) {
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  if (demands.size() == 0 || !demands.allFinite() ||
      (demands.array() <= 0.0).any()) {
    throw ParameterError(
        "DynamicsSpec::capacity: demands must be finite and positive");
  }
  DynamicsSpec spec;
  spec.family = DynamicsFamily::CapacityTransformed;
  spec.beta = beta;
  spec.gamma = gamma;
  spec.demands = std::move(demands);
  return spec;
}

EquilibriumReport find_uniform_equilibrium(const DynamicsSpec& spec,
                                           Eigen::Index node_count) {
  if (spec.family == DynamicsFamily::CapacityTransformed) {
    if (node_count >= 0 && node_count != spec.demands.size()) {
      throw ShapeError(
          "find_uniform_equilibrium: node_count does not match demands");
    }
    const double residual =
        (spec.beta * spec.demands.array() *
         (1.0 - spec.demands.array() / spec.demands.array()))
            .abs()
            .maxCoeff();
    return EquilibriumReport{1.0, spec.demands, residual};
  }

  double root;
  if (spec.family == DynamicsFamily::LinearLoad) {
    root = 1.0;  // beta (1 - l) vanishes exactly at l = 1
  } else {
    root = bisect_root(spec.self_rate, spec.root_bracket[0],
                       spec.root_bracket[1]);
  }
  const double residual = std::abs(spec.self_rate(root));
  if (!(residual < tol::kKernelZero)) {
    throw NumericError(
        "find_uniform_equilibrium: root residual exceeds 1e-12");
  }
  const Eigen::Index n = node_count < 0 ? 1 : node_count;
  return EquilibriumReport{root, Eigen::VectorXd::Constant(n, root),
                           residual};
}

Eigen::VectorXd vector_field(const DynamicsSpec& spec, const Network& network,
                             const Eigen::VectorXd& state) {
  network.validate();
  if (state.size() != network.node_count()) {
    throw ShapeError("vector_field: state size does not match network");
  }
  if (!state.allFinite()) {
    throw DataError("vector_field: non-finite state");
  }
  const auto edges = edge_list(network);
  Eigen::VectorXd rate(state.size());
  if (spec.family == DynamicsFamily::CapacityTransformed) {
    if (spec.demands.size() != network.node_count()) {
      throw ShapeError("vector_field: demands size does not match network");
    }
    capacity_rhs(edges, spec.demands, spec.beta, spec.gamma, 0.0, state,
                 rate);
  } else {
    load_rhs(edges, spec.self_rate, spec.coupling_rate, state, rate);
  }
  return rate;
}

Trajectory simulate(const DynamicsSpec& spec, const Network& network,
                    const Eigen::VectorXd& x0, double t_end, double dt) {
  if (spec.family == DynamicsFamily::CapacityTransformed) {
    return simulate_capacity(spec, network, x0, t_end, dt);
  }
  validate_simulation_args(network, x0, t_end, dt);

  const auto edges = edge_list(network);
  const auto& f = spec.self_rate;
  const auto& g = spec.coupling_rate;
  const Rhs rhs = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    load_rhs(edges, f, g, x, dx);
  };

  Trajectory traj = integrate_rk4(rhs, x0, t_end, dt);
  traj.spec = spec;
  traj.network = network;
  return traj;
}

Trajectory simulate_capacity(const DynamicsSpec& spec, const Network& network,
                             const Eigen::VectorXd& c0, double t_end,
                             double dt) {
  if (spec.family != DynamicsFamily::CapacityTransformed) {
    throw ParameterError("simulate_capacity: spec is not a capacity family");
  }
  validate_simulation_args(network, c0, t_end, dt);
  if (spec.demands.size() != network.node_count()) {
    throw ShapeError("simulate_capacity: demands size does not match network");
  }
  if ((c0.array() <= tol::kCapacityFloor).any()) {
    throw ParameterError(
        "simulate_capacity: initial capacities must be strictly positive");
  }

  const auto edges = edge_list(network);
  const Rhs rhs = [&](double t, const Eigen::VectorXd& c,
                      Eigen::VectorXd& dc) {
    capacity_rhs(edges, spec.demands, spec.beta, spec.gamma, t, c, dc);
  };

  Trajectory traj = integrate_rk4(rhs, c0, t_end, dt);
  traj.spec = spec;
  traj.network = network;
  return traj;
}

double estimate_contraction_rate(const Trajectory& trajectory,
                                 const Eigen::VectorXd& equilibrium) {
  const Eigen::Index samples = trajectory.times.size();
  if (samples < 4) {
    throw NumericError("estimate_contraction_rate: too few samples");
  }
  if (equilibrium.size() != trajectory.states.cols()) {
    throw ShapeError(
        "estimate_contraction_rate: equilibrium size does not match states");
  }

  Eigen::VectorXd deviation(samples);
  for (Eigen::Index k = 0; k < samples; ++k) {
    deviation(k) =
        (trajectory.states.row(k).transpose() - equilibrium).norm();
  }
  if (!(deviation(samples - 1) < deviation(0))) {
    throw NumericError(
        "estimate_contraction_rate: trajectory does not converge");
  }

  const Eigen::Index start = samples / 2;
  const Eigen::Index m = samples - start;
  if ((deviation.tail(m).array() <= tol::kKernelZero).any()) {
    throw NumericError(
        "estimate_contraction_rate: deviations below 1e-12 in fit window");
  }

  // Least-squares slope of log deviation against time over the tail window.
  const Eigen::VectorXd t = trajectory.times.tail(m);
  const Eigen::VectorXd y = deviation.tail(m).array().log();
  const double t_mean = t.mean();
  const double y_mean = y.mean();
  const double var = (t.array() - t_mean).square().sum();
  if (var <= 0.0) {
    throw NumericError("estimate_contraction_rate: degenerate time window");
  }
  const double slope =
      ((t.array() - t_mean) * (y.array() - y_mean)).sum() / var;
  return -slope;
}

}  // namespace loadstab
