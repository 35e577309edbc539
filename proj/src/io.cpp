#include "loadstab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "loadstab/errors.hpp"

namespace loadstab {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  return out;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open for reading: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

struct SvgCanvas {
  double x_lo, x_hi, y_lo, y_hi;
  double size = 640.0;
  double margin = 40.0;

  double px(double x) const {
    return margin + (x - x_lo) / (x_hi - x_lo) * (size - 2.0 * margin);
  }
  // SVG y grows downward.
  double py(double y) const {
    return size - margin - (y - y_lo) / (y_hi - y_lo) * (size - 2.0 * margin);
  }
  double scale() const {
    return (size - 2.0 * margin) / std::max(x_hi - x_lo, y_hi - y_lo);
  }
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_network_json(const std::filesystem::path& path,
                        const NetworkDocument& doc) {
  doc.network.validate();
  json j;
  j["n"] = doc.network.node_count();
  if (doc.network.positions) {
    json positions = json::array();
    for (Eigen::Index k = 0; k < doc.network.positions->rows(); ++k) {
      positions.push_back(
          {(*doc.network.positions)(k, 0), (*doc.network.positions)(k, 1)});
    }
    j["positions"] = std::move(positions);
  }
  json edges = json::array();
  for (const Edge& e : edge_list(doc.network)) {
    edges.push_back({e.from, e.to, e.weight});
  }
  j["edges"] = std::move(edges);
  j["seed"] = doc.seed;
  if (!doc.generator.is_null()) j["generator"] = doc.generator;

  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

NetworkDocument read_network_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  NetworkDocument doc;
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    if (n < 0) throw DataError("network JSON: n must be >= 0");
    doc.network.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw DataError("network JSON: edge entries must be [j, i, weight]");
      }
      const auto from = e[0].get<Eigen::Index>();
      const auto to = e[1].get<Eigen::Index>();
      const auto weight = e[2].get<double>();
      if (from < 0 || from >= n || to < 0 || to >= n) {
        throw DataError("network JSON: edge index out of range");
      }
      if (from == to) throw DataError("network JSON: self-loop");
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw DataError("network JSON: edge weight must be finite and >= 0");
      }
      if (doc.network.adjacency(from, to) != 0.0) {
        throw DataError("network JSON: duplicate edge");
      }
      doc.network.adjacency(from, to) = weight;
    }
    if (j.contains("positions")) {
      const auto& positions = j.at("positions");
      if (static_cast<Eigen::Index>(positions.size()) != n) {
        throw DataError("network JSON: positions size does not match n");
      }
      Eigen::MatrixX2d p(n, 2);
      for (Eigen::Index k = 0; k < n; ++k) {
        p(k, 0) = positions[k].at(0).get<double>();
        p(k, 1) = positions[k].at(1).get<double>();
      }
      doc.network.positions = std::move(p);
    }
    if (j.contains("seed")) doc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("generator")) doc.generator = j.at("generator");
  } catch (const json::exception& e) {
    throw DataError("network JSON " + path.string() + ": " + e.what());
  }
  doc.network.validate();
  return doc;
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const Spectrum& spectrum) {
  auto out = open_out(path);
  out << "re,im\n";
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    out << format_double(spectrum.eigenvalues(i).real()) << ','
        << format_double(spectrum.eigenvalues(i).imag()) << '\n';
  }
}

void write_discs_csv(const std::filesystem::path& path,
                     const std::vector<GershgorinDisc>& row_discs,
                     const std::vector<GershgorinDisc>& col_discs) {
  auto out = open_out(path);
  out << "mode,center,radius\n";
  for (const auto& d : row_discs) {
    out << "row," << format_double(d.center) << ','
        << format_double(d.radius) << '\n';
  }
  for (const auto& d : col_discs) {
    out << "col," << format_double(d.center) << ','
        << format_double(d.radius) << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory) {
  auto out = open_out(path);
  out << 't';
  for (Eigen::Index c = 0; c < trajectory.states.cols(); ++c) {
    out << ",x" << (c + 1);
  }
  out << '\n';
  for (Eigen::Index r = 0; r < trajectory.times.size(); ++r) {
    out << format_double(trajectory.times(r));
    for (Eigen::Index c = 0; c < trajectory.states.cols(); ++c) {
      out << ',' << format_double(trajectory.states(r, c));
    }
    out << '\n';
  }
}

Eigen::VectorXd read_vector_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.is_array()) {
    throw DataError("vector JSON must be a flat array: " + path.string());
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  try {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
  } catch (const json::exception& e) {
    throw DataError("vector JSON " + path.string() + ": " + e.what());
  }
  return v;
}

void write_verdict_json(const std::filesystem::path& path,
                        const StabilityVerdict& verdict) {
  json evidence;
  evidence["fprime_r"] = verdict.evidence.fprime_r;
  evidence["gamma"] = verdict.evidence.gamma;
  evidence["rho"] = verdict.evidence.rho;
  if (verdict.evidence.threshold_compared) {
    evidence["self_magnitude"] = verdict.evidence.self_magnitude;
    evidence["coupling_magnitude"] = verdict.evidence.coupling_magnitude;
  }
  json j;
  j["outcome"] = to_string(verdict.outcome);
  j["scenario"] = to_string(verdict.scenario);
  j["evidence"] = std::move(evidence);

  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_bound_json(const std::filesystem::path& path, double beta,
                      double b, double gamma, double c,
                      const StabilityBound& bound) {
  json j;
  j["beta"] = beta;
  j["beta_half_width"] = b;
  j["gamma"] = gamma;
  j["gamma_half_width"] = c;
  j["per_node_prob"] = std::vector<double>(
      bound.per_node_prob.data(),
      bound.per_node_prob.data() + bound.per_node_prob.size());
  j["lower_bound"] = bound.lower_bound;
  if (bound.mc) {
    json mc;
    mc["probability"] = bound.mc->probability;
    mc["trials"] = bound.mc->trials;
    mc["ci95_half_width"] = bound.mc->ci95_half_width;
    mc["seed"] = bound.mc->seed;
    j["mc"] = std::move(mc);
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_network_svg(const std::filesystem::path& path,
                       const Network& network) {
  if (!network.positions) {
    throw DataError("write_network_svg: network has no positions");
  }
  const auto& p = *network.positions;
  SvgCanvas canvas{p.col(0).minCoeff(), p.col(0).maxCoeff(),
                   p.col(1).minCoeff(), p.col(1).maxCoeff()};
  if (canvas.x_hi <= canvas.x_lo) canvas.x_hi = canvas.x_lo + 1.0;
  if (canvas.y_hi <= canvas.y_lo) canvas.y_hi = canvas.y_lo + 1.0;

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"640\" viewBox=\"0 0 640 640\">\n"
      << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  for (const Edge& e : edge_list(network)) {
    if (e.from > e.to) continue;  // one segment per mutual pair
    out << "<line x1=\"" << format_double(canvas.px(p(e.from, 0)))
        << "\" y1=\"" << format_double(canvas.py(p(e.from, 1))) << "\" x2=\""
        << format_double(canvas.px(p(e.to, 0))) << "\" y2=\""
        << format_double(canvas.py(p(e.to, 1)))
        << "\" stroke=\"#999999\" stroke-width=\"0.8\"/>\n";
  }
  for (Eigen::Index k = 0; k < p.rows(); ++k) {
    out << "<circle cx=\"" << format_double(canvas.px(p(k, 0))) << "\" cy=\""
        << format_double(canvas.py(p(k, 1)))
        << "\" r=\"2.5\" fill=\"#1f6feb\"/>\n";
  }
  out << "</svg>\n";
}

void write_spectrum_svg(const std::filesystem::path& path,
                        const Spectrum& spectrum,
                        const std::vector<GershgorinDisc>& discs) {
  double x_lo = -1.0, x_hi = 1.0, y_lo = -1.0, y_hi = 1.0;
  for (const auto& d : discs) {
    x_lo = std::min(x_lo, d.center - d.radius);
    x_hi = std::max(x_hi, d.center + d.radius);
    y_lo = std::min(y_lo, -d.radius);
    y_hi = std::max(y_hi, d.radius);
  }
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    x_lo = std::min(x_lo, spectrum.eigenvalues(i).real());
    x_hi = std::max(x_hi, spectrum.eigenvalues(i).real());
    y_lo = std::min(y_lo, spectrum.eigenvalues(i).imag());
    y_hi = std::max(y_hi, spectrum.eigenvalues(i).imag());
  }
  // Square data window so disc outlines stay circular on screen.
  const double span =
      1.05 * std::max(x_hi - x_lo, y_hi - y_lo) + 1e-12;
  const double x_mid = 0.5 * (x_lo + x_hi);
  const double y_mid = 0.5 * (y_lo + y_hi);
  SvgCanvas canvas{x_mid - 0.5 * span, x_mid + 0.5 * span, y_mid - 0.5 * span,
                   y_mid + 0.5 * span};

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"640\" viewBox=\"0 0 640 640\">\n"
      << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << format_double(canvas.px(canvas.x_lo)) << "\" y1=\""
      << format_double(canvas.py(0.0)) << "\" x2=\""
      << format_double(canvas.px(canvas.x_hi)) << "\" y2=\""
      << format_double(canvas.py(0.0))
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << format_double(canvas.px(0.0)) << "\" y1=\""
      << format_double(canvas.py(canvas.y_lo)) << "\" x2=\""
      << format_double(canvas.px(0.0)) << "\" y2=\""
      << format_double(canvas.py(canvas.y_hi))
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  for (const auto& d : discs) {
    out << "<circle cx=\"" << format_double(canvas.px(d.center)) << "\" cy=\""
        << format_double(canvas.py(0.0)) << "\" r=\""
        << format_double(d.radius * canvas.scale())
        << "\" fill=\"none\" stroke=\"#d0a000\" stroke-width=\"0.8\"/>\n";
  }
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    out << "<circle cx=\""
        << format_double(canvas.px(spectrum.eigenvalues(i).real()))
        << "\" cy=\""
        << format_double(canvas.py(spectrum.eigenvalues(i).imag()))
        << "\" r=\"3\" fill=\"#c03535\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace loadstab
