#include "loadstab/prob_stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include "loadstab/errors.hpp"
#include "loadstab/spectral.hpp"
#include "loadstab/tolerances.hpp"

namespace loadstab {

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule make_legendre_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double prev = 1.0;
      double value = x;
      for (int m = 2; m <= order; ++m) {
        const double next = ((2.0 * m - 1.0) * x * value - (m - 1.0) * prev) /
                            static_cast<double>(m);
        prev = value;
        value = next;
      }
      derivative = order * (x * value - prev) / (x * x - 1.0);
      const double step = value / derivative;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.weights[i] = weight;
    rule.weights[order - 1 - i] = weight;
  }
  return rule;
}

const GaussRule& cached_rule(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, make_legendre_rule(order)).first;
  }
  return it->second;
}

double integrate_panel(const std::function<double(double)>& f, double lo,
                       double hi, const GaussRule& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / i;
  }
  return result;
}

/// Density of the sum of m standard uniforms at u.
double irwin_hall_unit_pdf(int m, double u) {
  if (u <= 0.0 || u >= static_cast<double>(m)) return 0.0;
  double factorial = 1.0;
  for (int i = 2; i < m; ++i) factorial *= i;  // (m - 1)!
  const int k_max = static_cast<int>(std::floor(u));
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    sum += sign * binomial(m, k) * std::pow(u - k, m - 1);
    sign = -sign;
  }
  return sum / factorial;
}

void validate_mixture_params(int n_terms, double gamma, double c,
                             const char* who) {
  if (!std::isfinite(gamma) || !std::isfinite(c)) {
    throw DataError(std::string(who) + ": non-finite parameters");
  }
  if (n_terms < 1) {
    throw ParameterError(std::string(who) + ": n_terms must be >= 1");
  }
  if (n_terms > 170) {
    // (n-1)! overflows double beyond this; far past desk scale anyway.
    throw ParameterError(std::string(who) + ": n_terms too large");
  }
  if (gamma < 0.0) {
    throw ParameterError(std::string(who) + ": gamma must be >= 0");
  }
  if (!(c > gamma)) {
    throw ParameterError(
        std::string(who) +
        ": requires c > gamma; for c <= gamma the sum is identically zero "
        "(deterministic branch)");
  }
}

double uniform_tail_prob(double beta, double b) {
  // P(zeta > -beta), zeta ~ U[-b, b].
  if (b == 0.0) return beta > 0.0 ? 1.0 : 0.0;
  return std::clamp((b + beta) / (2.0 * b), 0.0, 1.0);
}

}  // namespace

void NoiseModel::validate() const {
  if (!std::isfinite(beta_half_width) || !std::isfinite(gamma_half_width) ||
      beta_half_width < 0.0 || gamma_half_width < 0.0) {
    throw ParameterError("NoiseModel: half-widths must be finite and >= 0");
  }
}

PerturbationSample sample_perturbation(const Network& network,
                                       const NoiseModel& noise,
                                       SplitRng& rng) {
  network.validate();
  noise.validate();
  const Eigen::Index n = network.node_count();
  PerturbationSample sample;
  sample.zeta.resize(n);
  const double b = noise.beta_half_width;
  for (Eigen::Index i = 0; i < n; ++i) {
    sample.zeta(i) = rng.uniform(-b, b);
  }
  sample.xi = Eigen::MatrixXd::Zero(n, n);
  const double c = noise.gamma_half_width;
  for (const Edge& e : edge_list(network)) {
    sample.xi(e.from, e.to) = rng.uniform(-c, c);
  }
  return sample;
}

Eigen::MatrixXd assemble_perturbed_jacobian(const Network& network,
                                            double beta, double gamma,
                                            const PerturbationSample& sample) {
  network.validate();
  const Eigen::Index n = network.node_count();
  if (sample.zeta.size() != n || sample.xi.rows() != n ||
      sample.xi.cols() != n) {
    throw ShapeError(
        "assemble_perturbed_jacobian: sample dimensions do not match network");
  }
  if (!std::isfinite(beta) || !std::isfinite(gamma)) {
    throw DataError("assemble_perturbed_jacobian: non-finite rates");
  }

  // Noise-free part first, so b = c = 0 reproduces -beta Id - gamma Lambda^T
  // bit for bit; the noise terms are then added edge by edge.
  Eigen::MatrixXd jacobian =
      assemble_jacobian(-beta, gamma, in_laplacian(network));
  jacobian.diagonal() -= sample.zeta;
  for (const Edge& e : edge_list(network)) {
    const double xi = sample.xi(e.from, e.to);
    jacobian(e.to, e.from) += e.weight * xi;
    jacobian(e.to, e.to) -= e.weight * xi;
  }
  return jacobian;
}

Eigen::MatrixXd sample_perturbed_jacobian(const Network& network, double beta,
                                          double gamma,
                                          const NoiseModel& noise,
                                          std::uint64_t seed) {
  SplitRng rng(seed);
  const PerturbationSample sample = sample_perturbation(network, noise, rng);
  return assemble_perturbed_jacobian(network, beta, gamma, sample);
}

Eigen::VectorXd gershgorin_margin(const Network& network, double beta,
                                  double gamma,
                                  const PerturbationSample& sample) {
  network.validate();
  const Eigen::Index n = network.node_count();
  if (sample.zeta.size() != n || sample.xi.rows() != n ||
      sample.xi.cols() != n) {
    throw ShapeError("gershgorin_margin: sample dimensions do not match");
  }
  Eigen::VectorXd margin = (-beta - sample.zeta.array()).matrix();
  for (const Edge& e : edge_list(network)) {
    const double rate = gamma + sample.xi(e.from, e.to);
    margin(e.to) += e.weight * (std::abs(rate) - rate);
  }
  return margin;
}

double irwin_hall_mixture_pdf(double x, int n_terms, double gamma, double c) {
  validate_mixture_params(n_terms, gamma, c, "irwin_hall_mixture_pdf");
  if (!std::isfinite(x)) {
    throw DataError("irwin_hall_mixture_pdf: non-finite x");
  }
  const double scale = 2.0 * (c - gamma);
  const double u = x / scale;
  if (u <= 0.0 || u >= static_cast<double>(n_terms)) return 0.0;

  const double p_uniform = 0.5 * (1.0 - gamma / c);
  const double p_zero = 1.0 - p_uniform;
  double density = 0.0;
  for (int m = 1; m <= n_terms; ++m) {
    if (u >= static_cast<double>(m)) continue;
    const double weight = binomial(n_terms, m) * std::pow(p_uniform, m) *
                          std::pow(p_zero, n_terms - m);
    density += weight * irwin_hall_unit_pdf(m, u) / scale;
  }
  return density;
}

double irwin_hall_mixture_atom(int n_terms, double gamma, double c) {
  validate_mixture_params(n_terms, gamma, c, "irwin_hall_mixture_atom");
  return std::pow(0.5 * (1.0 + gamma / c), n_terms);
}

double prob_s_negative(double beta, double b, double gamma, double c,
                       int degree) {
  if (!std::isfinite(beta) || !std::isfinite(b) || !std::isfinite(gamma) ||
      !std::isfinite(c)) {
    throw DataError("prob_s_negative: non-finite inputs");
  }
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw ParameterError("prob_s_negative: requires beta > 0 and gamma > 0");
  }
  if (b < 0.0 || c < 0.0) {
    throw ParameterError("prob_s_negative: half-widths must be >= 0");
  }
  if (degree < 0) {
    throw ParameterError("prob_s_negative: degree must be >= 0");
  }

  if (c <= gamma) {
    // gamma + xi cannot turn negative, so Y == 0 and s = -beta - zeta.
    return b < beta ? 1.0 : uniform_tail_prob(beta, b);
  }
  if (degree == 0) {
    return uniform_tail_prob(beta, b);
  }

  const double scale = 2.0 * (c - gamma);
  const double y_max = degree * scale;
  const double atom = irwin_hall_mixture_atom(degree, gamma, c);

  const auto zeta_tail = [&](double y) {  // P(zeta > y - beta)
    if (b == 0.0) return y < beta ? 1.0 : 0.0;
    return std::clamp((b + beta - y) / (2.0 * b), 0.0, 1.0);
  };

  double prob = atom * zeta_tail(0.0);

  // P(s < 0) = E[ P(zeta > Y - beta) ]. The integrand is piecewise
  // polynomial with knots at multiples of the uniform span and a kink where
  // the zeta window opens; Gauss-Legendre on each smooth panel is exact.
  const double y_hi = std::min(y_max, beta + b);
  if (y_hi > 0.0) {
    std::vector<double> cuts{0.0, y_hi};
    for (int k = 1; k <= degree; ++k) {
      const double knot = k * scale;
      if (knot < y_hi) cuts.push_back(knot);
    }
    const double kink = beta - b;
    if (kink > 0.0 && kink < y_hi) cuts.push_back(kink);
    std::sort(cuts.begin(), cuts.end());

    const GaussRule& rule = cached_rule(degree / 2 + 3);
    const auto integrand = [&](double y) {
      return irwin_hall_mixture_pdf(y, degree, gamma, c) * zeta_tail(y);
    };
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      if (cuts[p + 1] - cuts[p] <= 0.0) continue;
      prob += integrate_panel(integrand, cuts[p], cuts[p + 1], rule);
    }
  }
  return std::clamp(prob, 0.0, 1.0);
}

StabilityBound stability_lower_bound(const Network& network, double beta,
                                     double b, double gamma, double c) {
  network.validate();
  const Eigen::Index n = network.node_count();
  for (const Edge& e : edge_list(network)) {
    if (std::abs(e.weight - 1.0) > tol::kKernelZero) {
      throw DataError(
          "stability_lower_bound: requires unit edge weights (the per-edge "
          "noise terms enter the margin unscaled)");
    }
  }

  StabilityBound bound;
  bound.per_node_prob.resize(n);
  const Eigen::VectorXd w = in_degree(network);
  double product = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int degree = static_cast<int>(std::llround(w(i)));
    const double p = prob_s_negative(beta, b, gamma, c, degree);
    bound.per_node_prob(i) = p;
    product *= p;
  }
  bound.lower_bound = product;
  return bound;
}

McEstimate mc_stability_probability(const Network& network, double beta,
                                    double gamma, const NoiseModel& noise,
                                    long trials, std::uint64_t seed) {
  network.validate();
  noise.validate();
  if (!std::isfinite(beta) || !std::isfinite(gamma)) {
    throw DataError("mc_stability_probability: non-finite rates");
  }
  if (trials < 1) {
    throw ParameterError("mc_stability_probability: trials must be >= 1");
  }

  const auto is_stable_trial = [&](long t) {
    const Eigen::MatrixXd jacobian = sample_perturbed_jacobian(
        network, beta, gamma, noise,
        SplitRng::derive_seed(seed, static_cast<std::uint64_t>(t)));
    return spectral_abscissa(eigenvalues(jacobian)) < 0.0;
  };

  const long hw = std::max(1u, std::thread::hardware_concurrency());
  const long workers = std::min<long>(hw, trials);
  std::vector<long> counts(static_cast<std::size_t>(workers), 0);
  if (workers == 1) {
    long count = 0;
    for (long t = 0; t < trials; ++t) count += is_stable_trial(t) ? 1 : 0;
    counts[0] = count;
  } else {
    // Per-trial substreams keep the tally independent of the partition.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (trials + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const long lo = w * chunk;
        const long hi = std::min(trials, lo + chunk);
        long count = 0;
        for (long t = lo; t < hi; ++t) count += is_stable_trial(t) ? 1 : 0;
        counts[static_cast<std::size_t>(w)] = count;
      });
    }
    for (auto& th : pool) th.join();
  }

  long stable = 0;
  for (long c : counts) stable += c;
  const double p = static_cast<double>(stable) / static_cast<double>(trials);
  const double se =
      std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
  return McEstimate{p, trials, 1.96 * se, seed};
}

}  // namespace loadstab
