#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loadstab/dynamics.hpp"
#include "loadstab/errors.hpp"
#include "loadstab/graph.hpp"
#include "loadstab/io.hpp"
#include "loadstab/point_process.hpp"
#include "loadstab/prob_stability.hpp"
#include "loadstab/rng.hpp"
#include "loadstab/spectral.hpp"
#include "loadstab/stability.hpp"

namespace fs = std::filesystem;
using namespace loadstab;

namespace {

// Exit codes: 1 usage/parameter, 2 data/shape, 3 numeric/divergence.
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

CLI::Validator closed_unit_interval(const std::string& name) {
  return CLI::Validator(
      [name](std::string& value) -> std::string {
        double v{};
        try {
          v = std::stod(value);
        } catch (...) {
          return name + " must be a number";
        }
        if (!(v >= 0.0 && v <= 1.0)) {
          return name + " must lie in [0, 1]";
        }
        return {};
      },
      name + " in [0,1]");
}

CLI::Validator strictly_positive(const std::string& name) {
  return CLI::Validator(
      [name](std::string& value) -> std::string {
        double v{};
        try {
          v = std::stod(value);
        } catch (...) {
          return name + " must be a number";
        }
        if (!(v > 0.0)) return name + " must be > 0";
        return {};
      },
      name + " > 0");
}

struct GenerateOpts {
  std::string process = "ppp";
  double lambda = 100.0;
  double parent_lambda = 4.0;
  double cluster_radius = 0.05;
  double mean_daughters = 10.0;
  bool thomas = false;
  std::vector<double> window{0.0, 1.0, 0.0, 1.0};
  double radius = 0.15;
  double connect_prob = 1.0;
  std::uint64_t seed = 1;
  std::string out = ".";
  bool svg = false;
};

struct SpectrumOpts {
  std::string network;
  std::string out = ".";
  bool svg = false;
  bool laplacian_csv = false;
};

struct ClassifyOpts {
  std::string network;
  double beta = 0.0;
  double gamma = 0.0;
  double fprime = 0.0;
  bool has_beta = false;
  bool has_fprime = false;
  std::string out = ".";
};

struct SimulateOpts {
  std::string network;
  std::string family = "linear";
  double beta = 1.0;
  double gamma = 0.5;
  double t_end = 10.0;
  double dt = 1e-3;
  std::string x0_file;
  double x0_value = 0.5;
  std::string demands_file;
  std::string out = ".";
};

struct ProbboundOpts {
  std::string network;
  double beta = 1.0;
  double gamma = 0.5;
  double noise_b = 0.0;
  double noise_c = 0.0;
  long trials = 10000;
  std::uint64_t seed = 1;
  std::string out = ".";
};

fs::path ensure_out_dir(const std::string& dir) {
  fs::path path(dir);
  fs::create_directories(path);
  return path;
}

int run_generate(const GenerateOpts& o) {
  const Window window{o.window[0], o.window[1], o.window[2], o.window[3]};
  // Substreams per stage: one master seed reproduces points and edges.
  const std::uint64_t point_seed = SplitRng::derive_seed(o.seed, 0);
  const std::uint64_t edge_seed = SplitRng::derive_seed(o.seed, 1);

  PointSet points{};
  nlohmann::json generator;
  generator["window"] = o.window;
  generator["radius"] = o.radius;
  generator["connect_prob"] = o.connect_prob;
  if (o.process == "ppp") {
    points = sample_ppp(PppParams{o.lambda}, window, point_seed);
    generator["process"] = "ppp";
    generator["lambda"] = o.lambda;
  } else {
    PcpParams params{o.parent_lambda, o.cluster_radius, o.mean_daughters,
                     o.thomas ? ClusterKernel::Gaussian
                              : ClusterKernel::UniformDisc};
    points = sample_pcp(params, window, point_seed);
    generator["process"] = "pcp";
    generator["parent_lambda"] = o.parent_lambda;
    generator["cluster_radius"] = o.cluster_radius;
    generator["mean_daughters"] = o.mean_daughters;
    generator["kernel"] = o.thomas ? "gaussian" : "uniform-disc";
  }

  const Network network =
      connect_rgg(points, ConnectivityParams{o.radius, o.connect_prob},
                  edge_seed);
  const fs::path out = ensure_out_dir(o.out);
  write_network_json(out / "network.json",
                     NetworkDocument{network, o.seed, generator});
  if (o.svg) write_network_svg(out / "network.svg", network);

  std::cout << "generate: " << network.node_count() << " nodes, "
            << edge_list(network).size() << " directed edges -> "
            << (out / "network.json").string() << '\n';
  return 0;
}

int run_spectrum(const SpectrumOpts& o) {
  const NetworkDocument doc = read_network_json(o.network);
  const Eigen::MatrixXd laplacian = in_laplacian(doc.network);
  const Spectrum spectrum = eigenvalues(laplacian);
  const auto row_discs = gershgorin_discs(laplacian, DiscMode::Rows);
  const auto col_discs = gershgorin_discs(laplacian, DiscMode::Columns);

  const fs::path out = ensure_out_dir(o.out);
  write_spectrum_csv(out / "eigenvalues.csv", spectrum);
  write_discs_csv(out / "gershgorin.csv", row_discs, col_discs);
  if (o.laplacian_csv) write_matrix_csv(out / "laplacian.csv", laplacian);
  if (o.svg) write_spectrum_svg(out / "spectrum.svg", spectrum, col_discs);

  std::cout << "spectrum: " << spectrum.eigenvalues.size()
            << " eigenvalues, abscissa "
            << format_double(spectral_abscissa(spectrum)) << " -> "
            << (out / "eigenvalues.csv").string() << '\n';
  return 0;
}

int run_classify(const ClassifyOpts& o) {
  if (!o.has_beta && !o.has_fprime) {
    throw ParameterError("classify: provide --beta (linear family) or "
                         "--fprime (general dynamics)");
  }
  const double fprime = o.has_fprime ? o.fprime : -o.beta;
  const NetworkDocument doc = read_network_json(o.network);
  double rho = spectral_abscissa(eigenvalues(in_laplacian(doc.network)));
  rho = std::max(rho, 0.0);  // abscissa is >= 0 up to eigensolver noise

  const StabilityVerdict verdict = classify(fprime, o.gamma, rho);
  const fs::path out = ensure_out_dir(o.out);
  write_verdict_json(out / "verdict.json", verdict);

  std::cout << "classify: " << to_string(verdict.outcome) << " ("
            << to_string(verdict.scenario) << "), rho "
            << format_double(rho) << " -> "
            << (out / "verdict.json").string() << '\n';
  return 0;
}

int run_simulate(const SimulateOpts& o) {
  const NetworkDocument doc = read_network_json(o.network);
  const Eigen::Index n = doc.network.node_count();

  DynamicsSpec spec;
  if (o.family == "linear") {
    spec = DynamicsSpec::linear_load(o.beta, o.gamma);
  } else {
    if (o.demands_file.empty()) {
      throw ParameterError("simulate: capacity family needs --demands");
    }
    spec = DynamicsSpec::capacity(o.beta, o.gamma,
                                  read_vector_json(o.demands_file));
  }

  const Eigen::VectorXd x0 = o.x0_file.empty()
                                 ? Eigen::VectorXd::Constant(n, o.x0_value)
                                 : read_vector_json(o.x0_file);
  const Trajectory traj = simulate(spec, doc.network, x0, o.t_end, o.dt);
  const fs::path out = ensure_out_dir(o.out);
  write_trajectory_csv(out / "trajectory.csv", traj);

  const EquilibriumReport eq = find_uniform_equilibrium(spec, n);
  nlohmann::json j;
  j["equilibrium"] = std::vector<double>(
      eq.equilibrium.data(), eq.equilibrium.data() + eq.equilibrium.size());
  j["equilibrium_residual"] = eq.residual;
  try {
    const double rate = estimate_contraction_rate(traj, eq.equilibrium);
    j["status"] = "ok";
    j["rate"] = rate;
  } catch (const NumericError& e) {
    j["status"] = "not-converged";
    j["reason"] = e.what();
  }
  j["final_deviation"] =
      (traj.states.row(traj.times.size() - 1).transpose() - eq.equilibrium)
          .norm();
  {
    std::ofstream jo(out / "contraction.json", std::ios::binary);
    jo << j.dump(2) << '\n';
  }

  std::cout << "simulate: " << traj.times.size() << " samples -> "
            << (out / "trajectory.csv").string() << '\n';
  return 0;
}

int run_probbound(const ProbboundOpts& o) {
  const NetworkDocument doc = read_network_json(o.network);
  StabilityBound bound =
      stability_lower_bound(doc.network, o.beta, o.noise_b, o.gamma,
                            o.noise_c);
  bound.mc = mc_stability_probability(
      doc.network, o.beta, o.gamma, NoiseModel{o.noise_b, o.noise_c},
      o.trials, o.seed);

  const fs::path out = ensure_out_dir(o.out);
  write_bound_json(out / "bound.json", o.beta, o.noise_b, o.gamma, o.noise_c,
                   bound);

  std::cout << "probbound: lower bound "
            << format_double(bound.lower_bound) << ", mc "
            << format_double(bound.mc->probability) << " -> "
            << (out / "bound.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "loadstab: stability of load-balancing dynamics on interaction "
      "networks (generation, spectra, classification, simulation, "
      "probabilistic bounds)"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI config file; command-line flags take precedence");
  app.allow_config_extras(false);

  GenerateOpts gen;
  auto* cmd_gen = app.add_subcommand(
      "generate", "Sample a spatial point process and percolate a network");
  cmd_gen->fallthrough();  // lets --config reach the root parser
  cmd_gen->add_option("--process", gen.process, "Point process")
      ->check(CLI::IsMember({"ppp", "pcp"}))
      ->capture_default_str();
  cmd_gen->add_option("--lambda", gen.lambda, "PPP intensity (nodes/area)")
      ->check(strictly_positive("lambda"))
      ->capture_default_str();
  cmd_gen
      ->add_option("--parent-lambda", gen.parent_lambda,
                   "PCP parent intensity")
      ->check(strictly_positive("parent-lambda"))
      ->capture_default_str();
  cmd_gen
      ->add_option("--cluster-radius", gen.cluster_radius,
                   "PCP cluster radius")
      ->check(strictly_positive("cluster-radius"))
      ->capture_default_str();
  cmd_gen
      ->add_option("--mean-daughters", gen.mean_daughters,
                   "PCP mean daughters per parent")
      ->check(strictly_positive("mean-daughters"))
      ->capture_default_str();
  cmd_gen->add_flag("--thomas", gen.thomas,
                    "Gaussian cluster kernel instead of uniform disc");
  cmd_gen
      ->add_option("--window", gen.window,
                   "Region as x_min x_max y_min y_max")
      ->expected(4)
      ->capture_default_str();
  cmd_gen->add_option("--radius,-R", gen.radius, "Percolation radius R")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_gen
      ->add_option("--connect-prob,-P", gen.connect_prob,
                   "Connection probability P")
      ->check(closed_unit_interval("P"))
      ->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "Master RNG seed")
      ->envname("LOADSTAB_SEED")
      ->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "Output directory")
      ->capture_default_str();
  cmd_gen->add_flag("--svg", gen.svg, "Also write network.svg");

  SpectrumOpts spc;
  auto* cmd_spc = app.add_subcommand(
      "spectrum", "In-Laplacian eigenvalues and Gershgorin discs");
  cmd_spc->fallthrough();
  cmd_spc->add_option("--network", spc.network, "Network JSON path")
      ->required();
  cmd_spc->add_option("--out", spc.out, "Output directory")
      ->capture_default_str();
  cmd_spc->add_flag("--svg", spc.svg, "Also write spectrum.svg");
  cmd_spc->add_flag("--laplacian-csv", spc.laplacian_csv,
                    "Also dump the dense Laplacian as CSV");

  ClassifyOpts cls;
  auto* cmd_cls = app.add_subcommand(
      "classify", "Stability verdict from f'(r), gamma and the Laplacian");
  cmd_cls->fallthrough();
  cmd_cls->add_option("--network", cls.network, "Network JSON path")
      ->required();
  auto* opt_beta = cmd_cls->add_option(
      "--beta", cls.beta, "Scaling rate beta of the linear family (f' = -beta)");
  auto* opt_fprime = cmd_cls->add_option(
      "--fprime", cls.fprime, "f'(r) directly, overriding --beta");
  cmd_cls->add_option("--gamma", cls.gamma, "Coupling slope gamma = g'(0)")
      ->required();
  cmd_cls->add_option("--out", cls.out, "Output directory")
      ->capture_default_str();

  SimulateOpts sim;
  auto* cmd_sim =
      app.add_subcommand("simulate", "Integrate the coupled load dynamics");
  cmd_sim->fallthrough();
  cmd_sim->add_option("--network", sim.network, "Network JSON path")
      ->required();
  cmd_sim->add_option("--family", sim.family, "Dynamics family")
      ->check(CLI::IsMember({"linear", "capacity"}))
      ->capture_default_str();
  cmd_sim->add_option("--beta", sim.beta, "Scaling rate beta")
      ->capture_default_str();
  cmd_sim->add_option("--gamma", sim.gamma, "Offloading rate gamma")
      ->capture_default_str();
  cmd_sim->add_option("--t-end", sim.t_end, "Integration horizon")
      ->check(strictly_positive("t-end"))
      ->capture_default_str();
  cmd_sim->add_option("--dt", sim.dt, "Fixed step size")
      ->check(strictly_positive("dt"))
      ->capture_default_str();
  cmd_sim->add_option("--x0", sim.x0_file,
                      "Initial state as a JSON array file");
  cmd_sim
      ->add_option("--x0-value", sim.x0_value,
                   "Constant initial state when --x0 is absent")
      ->capture_default_str();
  cmd_sim->add_option("--demands", sim.demands_file,
                      "Demands JSON array (capacity family)");
  cmd_sim->add_option("--out", sim.out, "Output directory")
      ->capture_default_str();

  ProbboundOpts prb;
  auto* cmd_prb = app.add_subcommand(
      "probbound",
      "Probabilistic stability lower bound under uniform measurement noise");
  cmd_prb->fallthrough();
  cmd_prb->add_option("--network", prb.network, "Network JSON path")
      ->required();
  cmd_prb->add_option("--beta", prb.beta, "Scaling rate beta")
      ->check(strictly_positive("beta"))
      ->capture_default_str();
  cmd_prb->add_option("--gamma", prb.gamma, "Offloading rate gamma")
      ->check(strictly_positive("gamma"))
      ->capture_default_str();
  cmd_prb
      ->add_option("--noise-b,-b", prb.noise_b,
                   "Half-width b of the beta noise")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_prb
      ->add_option("--noise-c,-c", prb.noise_c,
                   "Half-width c of the gamma noise")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_prb->add_option("--trials", prb.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_prb->add_option("--seed", prb.seed, "Monte Carlo master seed")
      ->envname("LOADSTAB_SEED")
      ->capture_default_str();
  cmd_prb->add_option("--out", prb.out, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  cls.has_beta = opt_beta->count() > 0;
  cls.has_fprime = opt_fprime->count() > 0;

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_spc->parsed()) return run_spectrum(spc);
    if (cmd_cls->parsed()) return run_classify(cls);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_prb->parsed()) return run_probbound(prb);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
