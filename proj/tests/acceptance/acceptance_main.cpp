// Acceptance suite: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line. Exit status is the number of failures.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "loadstab/dynamics.hpp"
#include "loadstab/graph.hpp"
#include "loadstab/point_process.hpp"
#include "loadstab/prob_stability.hpp"
#include "loadstab/rng.hpp"
#include "loadstab/spectral.hpp"
#include "loadstab/stability.hpp"
#include "loadstab/tolerances.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;
using namespace loadstab;
using namespace loadstab::testing;

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Every generated Laplacian spectrum lies in the closed right half-plane
//    and contains zero: 20 PPP + 20 PCP networks.
bool laplacian_spectrum_nonnegative(std::string& detail) {
  const Window window = Window::unit_square();
  const ConnectivityParams conn{0.15, 0.8};
  double worst_min_re = 1e300;
  double worst_zero_gap = 0.0;
  int checked = 0;

  const auto check_network = [&](const PointSet& points,
                                 std::uint64_t edge_seed) {
    if (points.size() == 0) return;  // nothing to analyze
    const Network net = connect_rgg(points, conn, edge_seed);
    const Spectrum s = eigenvalues(in_laplacian(net));
    worst_min_re = std::min(worst_min_re, s.eigenvalues.real().minCoeff());
    worst_zero_gap =
        std::max(worst_zero_gap, s.eigenvalues.cwiseAbs().minCoeff());
    ++checked;
  };

  int collected = 0;
  for (std::uint64_t seed = 1; collected < 20 && seed < 200; ++seed) {
    const PointSet pts = sample_ppp(PppParams{100.0}, window,
                                    SplitRng::derive_seed(seed, 0));
    if (pts.size() == 0) continue;
    check_network(pts, SplitRng::derive_seed(seed, 1));
    ++collected;
  }
  collected = 0;
  for (std::uint64_t seed = 1; collected < 20 && seed < 200; ++seed) {
    const PointSet pts =
        sample_pcp(PcpParams{4.0, 0.08, 25.0}, window,
                   SplitRng::derive_seed(seed ^ 0x9000, 0));
    if (pts.size() == 0) continue;
    check_network(pts, SplitRng::derive_seed(seed ^ 0x9000, 1));
    ++collected;
  }

  detail = fmt("min Re %.2e, worst |lambda_0| %.2e over 40 networks",
               worst_min_re, worst_zero_gap);
  return checked == 40 && worst_min_re >= -tol::kContainment &&
         worst_zero_gap <= tol::kContainment;
}

// ---------------------------------------------------------------------------
// 2. Default regime (f' < 0, gamma >= 0): spectrally stable on every draw and
//    the classifier agrees with the spectral oracle on all of them.
bool default_case_stability(std::string& detail) {
  SplitRng rng(20240001);
  double worst_abscissa = -1e300;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_index(23));
    const Network net =
        random_symmetric_network(rng, n, rng.uniform(0.15, 0.9));
    const double beta = rng.uniform(0.01, 5.0);
    const double gamma = rng.uniform(0.0, 5.0);

    const Eigen::MatrixXd lap = in_laplacian(net);
    const double abscissa =
        spectral_abscissa(eigenvalues(assemble_jacobian({-beta, gamma, lap})));
    worst_abscissa = std::max(worst_abscissa, abscissa);
    if (!(abscissa < 0.0)) {
      detail = fmt("abscissa %.3e not negative", abscissa);
      return false;
    }

    const double rho =
        std::max(0.0, spectral_abscissa(eigenvalues(lap)));
    const StabilityVerdict verdict = classify(-beta, gamma, rho);
    const bool oracle = verify_by_spectrum(assemble_jacobian({-beta, gamma, lap}));
    if (verdict.outcome != Outcome::Stable || !oracle) {
      detail = "classifier/oracle disagreement in the default regime";
      return false;
    }
  }
  detail = fmt("500 draws, worst abscissa %.3e", worst_abscissa);
  return true;
}

// ---------------------------------------------------------------------------
// 3. On the triangle (rho = 3), with f' = -1, the oracle flips exactly at
//    |gamma| = 1/3 along the sweep [-1, -0.01].
bool rho_threshold_sharpness(std::string& detail) {
  const Eigen::MatrixXd lap = in_laplacian(triangle_network());
  const auto stable_at = [&](double gamma_mag) {
    return verify_by_spectrum(assemble_jacobian({-1.0, -gamma_mag, lap}));
  };

  int flips = 0;
  bool prev = stable_at(0.01);
  for (int k = 1; k <= 400; ++k) {
    const bool now = stable_at(0.01 + (1.0 - 0.01) * k / 400.0);
    if (now != prev) ++flips;
    prev = now;
  }
  double lo = 0.01, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (stable_at(mid) ? lo : hi) = mid;
  }
  const double flip = 0.5 * (lo + hi);
  detail = fmt("flip at |gamma| = %.6f (expected 1/3), %d sign change",
               flip, static_cast<double>(flips));
  return flips == 1 && std::abs(flip - 1.0 / 3.0) < 1e-3;
}

// ---------------------------------------------------------------------------
// 4. Fitted contraction rate equals beta within 5% on 10 random connected
//    networks with gamma > 0.
bool contraction_rate_matches_beta(std::string& detail) {
  SplitRng rng(20240004);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Network net;
    // Keep the mixing gap well above beta so the tail isolates the slow mode.
    while (true) {
      net = random_connected_network(rng, 8 + rng.uniform_index(9), 0.6);
      Eigen::VectorXd re =
          eigenvalues(in_laplacian(net)).eigenvalues.real();
      std::sort(re.data(), re.data() + re.size());
      if (re(1) >= 1.0) break;
    }
    const Eigen::Index n = net.node_count();
    const double beta = rng.uniform(0.3, 1.0);
    const double gamma = rng.uniform(1.0, 3.0);

    Eigen::VectorXd x0(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x0(i) = 1.3 + rng.uniform(-0.2, 0.2);
    }
    const auto traj = simulate(DynamicsSpec::linear_load(beta, gamma), net,
                               x0, 10.0, 1e-3);
    const double rate =
        estimate_contraction_rate(traj, Eigen::VectorXd::Ones(n));
    worst_rel = std::max(worst_rel, std::abs(rate - beta) / beta);
  }
  detail = fmt("worst relative rate error %.3f%%", 100.0 * worst_rel);
  return worst_rel < 0.05;
}

// ---------------------------------------------------------------------------
// 5. Load-space trajectories mapped through c = d / l match capacity-space
//    trajectories within 1e-5 relative; capacities converge to the demands.
bool transform_equivalence(std::string& detail) {
  SplitRng rng(20240005);
  double worst_rel = 0.0;
  double worst_conv = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(7));
    const Network net = random_symmetric_network(rng, n, 0.5);
    Eigen::VectorXd d(n), l0(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      d(i) = rng.uniform(0.5, 3.0);
      l0(i) = rng.uniform(0.4, 2.0);
    }
    const double beta = rng.uniform(0.5, 2.0);
    const double gamma = rng.uniform(0.1, 1.0);

    const auto load_traj = simulate(DynamicsSpec::linear_load(beta, gamma),
                                    net, l0, 5.0, 1e-3);
    const Eigen::VectorXd c0 = (d.array() / l0.array()).matrix();
    const auto cap_traj = simulate_capacity(
        DynamicsSpec::capacity(beta, gamma, d), net, c0, 20.0, 1e-3);

    for (Eigen::Index k = 0; k < load_traj.times.size(); ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double mapped = d(i) / load_traj.states(k, i);
        const double direct = cap_traj.states(k, i);
        worst_rel = std::max(worst_rel,
                             std::abs(mapped - direct) / std::abs(direct));
      }
    }
    const Eigen::Index last = cap_traj.times.size() - 1;
    worst_conv = std::max(
        worst_conv,
        (cap_traj.states.row(last).transpose() - d).cwiseAbs().maxCoeff());
  }
  detail = fmt("worst relative gap %.2e, worst final |c - d| %.2e", worst_rel,
               worst_conv);
  return worst_rel < 1e-5 && worst_conv < 1e-3;
}

// ---------------------------------------------------------------------------
// 6. Central finite differences of the simulated field at the uniform
//    equilibrium reproduce the assembled Jacobian entrywise (linear family
//    and a cubic/tanh family).
bool linearization_consistency(std::string& detail) {
  SplitRng rng(20240006);
  double worst = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.uniform_index(5));
    const Network net = random_symmetric_network(rng, n, 0.6);
    const Eigen::MatrixXd lap = in_laplacian(net);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const double h = 1e-6;

    const auto lin = DynamicsSpec::linear_load(1.2, 0.7);
    const Eigen::MatrixXd fd_lin = fd_jacobian(
        [&](const Eigen::VectorXd& x) { return vector_field(lin, net, x); },
        ones, h);
    worst = std::max(
        worst,
        (fd_lin - assemble_jacobian({-1.2, 0.7, lap})).cwiseAbs().maxCoeff());

    const double gamma = 0.8;
    const auto cubic = DynamicsSpec::general(
        [](double l) { return 1.0 - l * l * l; },
        [gamma](double x) { return gamma * std::tanh(x); }, {0.0, 2.0});
    const Eigen::MatrixXd fd_cubic = fd_jacobian(
        [&](const Eigen::VectorXd& x) { return vector_field(cubic, net, x); },
        ones, h);
    worst = std::max(
        worst, (fd_cubic - assemble_jacobian({-3.0, gamma, lap}))
                   .cwiseAbs()
                   .maxCoeff());
  }
  detail = fmt("worst entrywise gap %.2e", worst);
  return worst < 1e-5;
}

// ---------------------------------------------------------------------------
// 7. The analytic lower bound never exceeds the Monte Carlo stability
//    estimate (plus two binomial standard errors), 50 random configurations;
//    in the small-error regime both are exactly one.
bool probabilistic_bound_validity(std::string& detail) {
  SplitRng rng(20240007);
  double min_slack = 1e300;
  for (int cfg = 0; cfg < 50; ++cfg) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.uniform_index(7));
    const Network net = random_symmetric_network(rng, n, 0.5);
    const double beta = rng.uniform(0.3, 2.0);
    const double b = rng.uniform(0.0, 1.2 * beta);
    const double gamma = rng.uniform(0.05, 1.0);
    const double c = gamma + rng.uniform(0.05, 1.25);

    const StabilityBound bound = stability_lower_bound(net, beta, b, gamma, c);
    const McEstimate mc = mc_stability_probability(
        net, beta, gamma, NoiseModel{b, c}, 10000,
        90000 + static_cast<std::uint64_t>(cfg));
    const double se = mc.ci95_half_width / 1.96;
    const double slack = mc.probability + 2.0 * se - bound.lower_bound;
    min_slack = std::min(min_slack, slack);
    if (slack < 0.0) {
      detail = fmt("bound %.4f above estimate %.4f", bound.lower_bound,
                   mc.probability);
      return false;
    }
  }

  for (int cfg = 0; cfg < 5; ++cfg) {
    const Network net = random_symmetric_network(rng, 6, 0.5);
    const double beta = rng.uniform(0.5, 2.0);
    const double b = rng.uniform(0.0, 0.8 * beta);
    const double gamma = rng.uniform(0.3, 1.0);
    const double c = gamma * rng.uniform(0.0, 1.0);  // c <= gamma
    const StabilityBound bound = stability_lower_bound(net, beta, b, gamma, c);
    const McEstimate mc = mc_stability_probability(
        net, beta, gamma, NoiseModel{b, c}, 10000,
        95000 + static_cast<std::uint64_t>(cfg));
    if (bound.lower_bound != 1.0 || mc.probability != 1.0) {
      detail = "small-error regime not exactly certain";
      return false;
    }
  }
  detail = fmt("50 noisy + 5 exact configs, min slack %.4f", min_slack);
  return true;
}

// ---------------------------------------------------------------------------
// 8. Mixture density: unit mass on a (gamma, c) x n_terms grid and sup-norm
//    agreement with large-sample empirical histograms.
bool mixture_density_checks(std::string& detail) {
  double worst_mass_gap = 0.0;
  for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double dc : {0.2, 0.5, 0.8, 1.2, 1.6}) {
      const double c = gamma + dc;
      for (int n = 1; n <= 6; ++n) {
        const double hi = 2.0 * n * (c - gamma);
        const double mass =
            adaptive_simpson(
                [&](double x) {
                  return irwin_hall_mixture_pdf(x, n, gamma, c);
                },
                0.0, hi, 1e-10) +
            irwin_hall_mixture_atom(n, gamma, c);
        worst_mass_gap = std::max(worst_mass_gap, std::abs(mass - 1.0));
      }
    }
  }
  if (worst_mass_gap >= 1e-6) {
    detail = fmt("normalization off by %.2e", worst_mass_gap);
    return false;
  }

  struct Cfg {
    double gamma, c;
    int n;
  };
  double worst_sup = 0.0;
  std::uint64_t seed = 881;
  for (const Cfg& cfg : {Cfg{0.5, 1.0, 4}, Cfg{0.0, 1.0, 2},
                         Cfg{0.25, 0.75, 6}}) {
    SplitRng rng(seed++);
    const long samples = 1000000;
    const double support = 2.0 * cfg.n * (cfg.c - cfg.gamma);
    const double width = support / 40.0;
    std::vector<long> counts(40, 0);
    for (long s = 0; s < samples; ++s) {
      double y = 0.0;
      for (int k = 0; k < cfg.n; ++k) {
        const double rate = cfg.gamma + rng.uniform(-cfg.c, cfg.c);
        y += std::abs(rate) - rate;
      }
      if (y > 0.0) {
        ++counts[std::min<std::size_t>(39, static_cast<std::size_t>(
                                               y / width))];
      }
    }
    for (int bin = 0; bin < 40; ++bin) {
      const double lo = bin * width;
      const double empirical =
          static_cast<double>(counts[static_cast<std::size_t>(bin)]) /
          (samples * width);
      const double expected =
          adaptive_simpson(
              [&](double x) {
                return irwin_hall_mixture_pdf(x, cfg.n, cfg.gamma, cfg.c);
              },
              lo, lo + width, 1e-10) /
          width;
      worst_sup = std::max(worst_sup, std::abs(empirical - expected));
    }
  }
  detail = fmt("mass gap %.2e, histogram sup-norm %.4f", worst_mass_gap,
               worst_sup);
  return worst_sup < 0.01;
}

// ---------------------------------------------------------------------------
// 9. Gershgorin containment in both modes for 200 random matrices
//    (Laplacians and perturbed Jacobians).
bool gershgorin_containment(std::string& detail) {
  SplitRng rng(20240009);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(11));
    const Eigen::MatrixXd m =
        in_laplacian(random_weighted_digraph(rng, n, 0.5, 2.5));
    const auto rows = gershgorin_discs(m, DiscMode::Rows);
    const auto cols = gershgorin_discs(m, DiscMode::Columns);
    for (const auto z : eigenvalues(m).eigenvalues) {
      if (!in_disc_union(z, rows, tol::kContainment) ||
          !in_disc_union(z, cols, tol::kContainment)) {
        detail = "Laplacian eigenvalue escaped the disc union";
        return false;
      }
    }
    ++checked;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(9));
    const Network net = random_symmetric_network(rng, n, 0.5);
    const Eigen::MatrixXd m = sample_perturbed_jacobian(
        net, rng.uniform(0.2, 2.0), rng.uniform(0.1, 1.0),
        NoiseModel{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.5)},
        rng.next_u64());
    const auto rows = gershgorin_discs(m, DiscMode::Rows);
    const auto cols = gershgorin_discs(m, DiscMode::Columns);
    for (const auto z : eigenvalues(m).eigenvalues) {
      if (!in_disc_union(z, rows, tol::kContainment) ||
          !in_disc_union(z, cols, tol::kContainment)) {
        detail = "perturbed Jacobian eigenvalue escaped the disc union";
        return false;
      }
    }
    ++checked;
  }
  detail = fmt("%.0f matrices contained in both modes",
               static_cast<double>(checked));
  return checked == 200;
}

// ---------------------------------------------------------------------------
// 10. End-to-end CLI determinism: the full pipeline repeated with one seed
//     produces byte-identical files.
bool cli_determinism(std::string& detail) {
  const char* cli = LOADSTAB_CLI_PATH;
  const fs::path root =
      fs::temp_directory_path() /
      ("loadstab_accept_" +
       std::to_string(SplitRng(std::random_device{}()).next_u64()));
  fs::create_directories(root);

  const auto run = [&](const std::string& args) {
    const int status =
        std::system((std::string(cli) + " " + args + " > /dev/null").c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const auto pipeline = [&](const fs::path& dir) {
    const std::string net = (dir / "network.json").string();
    return run("generate --lambda 100 --radius 0.15 --connect-prob 0.8 "
               "--seed 42 --svg --out " + dir.string()) &&
           run("spectrum --network " + net + " --svg --laplacian-csv --out " +
               dir.string()) &&
           run("classify --network " + net + " --beta 1 --gamma 0.5 --out " +
               dir.string()) &&
           run("simulate --network " + net +
               " --beta 1 --gamma 0.5 --t-end 2 --dt 0.01 --out " +
               dir.string()) &&
           run("probbound --network " + net +
               " --beta 1 --gamma 0.5 -b 0.2 -c 0.8 --trials 300 --seed 9 "
               "--out " + dir.string());
  };

  bool ok = pipeline(root / "a") && pipeline(root / "b");
  int compared = 0;
  if (ok) {
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      const fs::path other = root / "b" / entry.path().filename();
      if (!fs::exists(other) ||
          slurp(entry.path()) != slurp(other)) {
        detail = "mismatch in " + entry.path().filename().string();
        ok = false;
        break;
      }
      ++compared;
    }
    if (ok && compared < 10) {
      detail = fmt("only %.0f files produced", static_cast<double>(compared));
      ok = false;
    }
  } else {
    detail = "pipeline command failed";
  }
  if (ok) {
    detail = fmt("%.0f files byte-identical across reruns",
                 static_cast<double>(compared));
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string&);
  };
  const std::vector<Criterion> criteria = {
      {"laplacian-spectrum-nonnegativity", laplacian_spectrum_nonnegative},
      {"default-case-stability", default_case_stability},
      {"rho-threshold-sharpness", rho_threshold_sharpness},
      {"contraction-rate", contraction_rate_matches_beta},
      {"transform-equivalence", transform_equivalence},
      {"linearization-consistency", linearization_consistency},
      {"probabilistic-bound-validity", probabilistic_bound_validity},
      {"mixture-density", mixture_density_checks},
      {"gershgorin-containment", gershgorin_containment},
      {"cli-determinism", cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %2zu %-4s %-34s (%s; %.1fs)\n", i + 1,
                ok ? "PASS" : "FAIL", criteria[i].name, detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
