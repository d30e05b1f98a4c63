// io.hpp
//
// Serialization of results: JSON objects (nlohmann/json), CSV tables with
// 17 significant digits, and small log-log SVG plots.

#pragma once

#include "energy.hpp"
#include "fields.hpp"
#include "mesh.hpp"
#include "recovery.hpp"
#include "solver.hpp"
#include "study.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodlimit {

using json = nlohmann::json;

/// Raised when an output file cannot be written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a hash, hex encoded. Stable across platforms.
inline std::string config_hash(const std::string &text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string &path, const std::string &content) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open " + path + " for writing");
  os << content;
  if (!os)
    throw IoError("failed writing " + path);
}

/// CSV table; the first line declares the config hash as a comment.
class CsvTable {
public:
  CsvTable(std::string hash, std::vector<std::string> header)
      : hash_(std::move(hash)), header_(std::move(header)) {}

  void add(const std::vector<double> &row) { rows_.push_back(row); }

  std::string str() const {
    std::ostringstream os;
    os << "# config_hash=" << hash_ << "\n";
    for (std::size_t i = 0; i < header_.size(); ++i)
      os << (i ? "," : "") << header_[i];
    os << "\n";
    for (const auto &r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i)
        os << (i ? "," : "") << fmt17(r[i]);
      os << "\n";
    }
    return os.str();
  }
  void write(const std::string &path) const { write_text(path, str()); }

private:
  std::string hash_;
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline void write_json(const std::string &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

inline json to_json(const EnergyBreakdown &e) {
  return {{"normal", e.normal},
          {"trace", e.trace},
          {"shear_inplane", e.shear_inplane},
          {"shear_axial", e.shear_axial},
          {"damage_local", e.damage_local},
          {"damage_grad_transverse", e.damage_grad_transverse},
          {"damage_grad_axial", e.damage_grad_axial},
          {"total", e.total}};
}

inline const std::vector<std::string> &energy_csv_header() {
  static const std::vector<std::string> h = {
      "normal", "trace", "shear_inplane", "shear_axial", "damage_local",
      "damage_grad_transverse", "damage_grad_axial", "total"};
  return h;
}

inline std::vector<double> energy_csv_row(const EnergyBreakdown &e) {
  return {e.normal,       e.trace, e.shear_inplane, e.shear_axial, e.damage_local,
          e.damage_grad_transverse, e.damage_grad_axial, e.total};
}

inline json to_json(const SolveReport &r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"energy", to_json(r.energy)},
          {"energy_trace", r.energy_trace},
          {"alpha_update", r.alpha_update},
          {"u_residual", r.u_residual},
          {"alpha_stationarity", r.alpha_stationarity},
          {"cg_iterations", r.cg_iterations},
          {"pgd_iterations", r.pgd_iterations},
          {"inner_failure", r.inner_failure}};
}

/// Per-iteration energy trace as CSV.
inline CsvTable trace_csv(const SolveReport &r, const std::string &hash) {
  CsvTable t(hash, {"iteration", "energy", "alpha_update"});
  for (std::size_t i = 0; i < r.energy_trace.size(); ++i)
    t.add({double(i), r.energy_trace[i], i == 0 ? 0.0 : r.alpha_update[i - 1]});
  return t;
}

inline json to_json(const DiagnosticsRecord &d) {
  return {{"u3_l2", d.u3_l2},
          {"axial_strain", d.axial_strain},
          {"lateral_x", d.lateral_x},
          {"lateral_y", d.lateral_y},
          {"shear", d.shear},
          {"alpha_transverse", d.alpha_transverse},
          {"alpha_axial", d.alpha_axial}};
}

inline json to_json(const Prop1Remainders &r) {
  return {{"deviatoric", r.deviatoric}, {"poisson", r.poisson}, {"variance", r.variance}};
}

inline json to_json(const StudyRecord &r) {
  return {{"delta", r.delta},
          {"e3d_min", r.e3d_min},
          {"e1d_min", r.e1d_min},
          {"gap", r.gap},
          {"diagnostics", to_json(r.diag)},
          {"prop1_remainders", to_json(r.prop1)},
          {"u3_average_l2", r.u3_average_l2},
          {"alpha_transverse_normalized", r.alpha_transverse_normalized},
          {"alpha_transverse_bound", r.alpha_transverse_bound},
          {"iters", r.iters},
          {"converged", r.converged}};
}

inline json to_json(const StudySummary &s) {
  return {{"gap_nonincreasing", s.gap_nonincreasing},
          {"residuals_nonincreasing", s.residuals_nonincreasing},
          {"shear_halved", s.shear_halved},
          {"alpha_transverse_halved", s.alpha_transverse_halved},
          {"remainders_nonnegative", s.remainders_nonnegative},
          {"poisson_decreases", s.poisson_decreases},
          {"transverse_bound_holds", s.transverse_bound_holds},
          {"all_converged", s.all_converged}};
}

inline CsvTable study_csv(const std::vector<StudyRecord> &recs, const std::string &hash) {
  CsvTable t(hash, {"delta", "e3d_min", "e1d_min", "gap", "u3_l2", "axial_strain",
                    "lateral_x", "lateral_y", "shear", "alpha_transverse", "alpha_axial",
                    "deviatoric", "poisson", "variance", "u3_average_l2",
                    "alpha_transverse_normalized", "alpha_transverse_bound", "iters",
                    "converged"});
  for (const auto &r : recs)
    t.add({r.delta, r.e3d_min, r.e1d_min, r.gap, r.diag.u3_l2, r.diag.axial_strain,
           r.diag.lateral_x, r.diag.lateral_y, r.diag.shear, r.diag.alpha_transverse,
           r.diag.alpha_axial, r.prop1.deviatoric, r.prop1.poisson, r.prop1.variance,
           r.u3_average_l2, r.alpha_transverse_normalized, r.alpha_transverse_bound,
           double(r.iters), r.converged ? 1.0 : 0.0});
  return t;
}

inline CsvTable limsup_csv(const std::vector<LimsupRow> &rows, const std::string &hash) {
  CsvTable t(hash, {"delta", "k", "E3d", "E1d", "gap", "bound", "strain_l2_error",
                    "strain_derivative_sup"});
  for (const auto &r : rows)
    t.add({r.delta, double(r.k), r.e3d, r.e1d, r.gap, r.extra, r.err_l2, r.dv_inf});
  return t;
}

/// Slice profiles (z, u3bar, alphabar) of a 1D field on a uniform grid.
inline CsvTable profile_csv(const Field1D &g, const std::string &hash) {
  CsvTable t(hash, {"z", "u3bar", "alphabar"});
  for (std::size_t i = 0; i < g.size(); ++i)
    t.add({double(i) / double(g.size() - 1), g.u3bar[i], g.alphabar[i]});
  return t;
}

/// Slice profiles of a 3D field (cross-section means of u3 and alpha).
inline CsvTable profile_csv(const Field3D &f, const CylinderMesh &mesh, const std::string &hash) {
  Field1D g;
  g.u3bar = slice_average(f.u3, mesh);
  g.alphabar = slice_average(f.alpha, mesh);
  return profile_csv(g, hash);
}

inline json to_json(const Field1D &g) { return {{"u3bar", g.u3bar}, {"alphabar", g.alphabar}}; }

inline json to_json(const Field3D &f) {
  return {{"delta", f.delta}, {"u1", f.u1}, {"u2", f.u2}, {"u3", f.u3}, {"alpha", f.alpha}};
}

/// Debug dump: node coordinates, hexahedra (8 node ids, x fastest) and the
/// node sets of the two end planes.
inline json mesh_json(const CylinderMesh &mesh) {
  json nodes = json::array(), cells = json::array();
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    const auto x = mesh.node_xyz(n);
    nodes.push_back({x[0], x[1], x[2]});
  }
  for (int layer = 0; layer < mesh.nz(); ++layer)
    for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
      const auto ids = mesh.cell_nodes(c, layer);
      cells.push_back(std::vector<std::size_t>(ids.begin(), ids.end()));
    }
  return {{"nxy", mesh.nxy()},
          {"nz", mesh.nz()},
          {"measure", mesh.measure()},
          {"nodes", nodes},
          {"cells", cells},
          {"tags", {{"z0", mesh.bottom_nodes()}, {"z1", mesh.top_nodes()}}}};
}

/// Minimal log-log line plot.
class LogLogPlot {
public:
  LogLogPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add_series(std::string name, std::vector<double> x, std::vector<double> y) {
    series_.push_back({std::move(name), std::move(x), std::move(y)});
  }

  std::string svg(const std::string &hash) const {
    const double W = 640, H = 440, left = 80, right = 170, top = 40, bottom = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto &s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!(s.x[i] > 0.0) || !(std::abs(s.y[i]) > 0.0))
          continue;
        xmin = std::min(xmin, std::log10(s.x[i]));
        xmax = std::max(xmax, std::log10(s.x[i]));
        ymin = std::min(ymin, std::log10(std::abs(s.y[i])));
        ymax = std::max(ymax, std::log10(std::abs(s.y[i])));
      }
    if (xmin > xmax) {
      xmin = ymin = -1;
      xmax = ymax = 0;
    }
    if (xmax - xmin < 1e-12) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * (W - left - right); };
    auto py = [&](double ly) { return H - bottom - (ly - ymin) / (ymax - ymin) * (H - top - bottom); };
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<!-- config_hash=" << hash << " -->\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 - 100 << "\" y=\"24\" font-size=\"16\">" << title_ << "</text>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right
       << "\" height=\"" << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = int(std::ceil(xmin)); d <= int(std::floor(xmax)); ++d)
      os << "<text x=\"" << px(d) - 12 << "\" y=\"" << H - bottom + 18
         << "\" font-size=\"11\">1e" << d << "</text>\n";
    for (int d = int(std::ceil(ymin)); d <= int(std::floor(ymax)); ++d)
      os << "<text x=\"" << 30 << "\" y=\"" << py(d) + 4 << "\" font-size=\"11\">1e" << d
         << "</text>\n";
    os << "<text x=\"" << W / 2 - 40 << "\" y=\"" << H - 15 << "\" font-size=\"13\">" << xlabel_
       << "</text>\n<text x=\"12\" y=\"" << top - 10 << "\" font-size=\"13\">" << ylabel_
       << "</text>\n";
    for (std::size_t k = 0; k < series_.size(); ++k) {
      const auto &s = series_[k];
      const char *col = colors[k % 7];
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0.0 && std::abs(s.y[i]) > 0.0)
          os << px(std::log10(s.x[i])) << "," << py(std::log10(std::abs(s.y[i]))) << " ";
      os << "\"/>\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0.0 && std::abs(s.y[i]) > 0.0)
          os << "<circle cx=\"" << px(std::log10(s.x[i])) << "\" cy=\""
             << py(std::log10(std::abs(s.y[i]))) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      os << "<text x=\"" << W - right + 10 << "\" y=\"" << top + 16 + 18 * k
         << "\" font-size=\"12\" fill=\"" << col << "\">" << s.name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
  }

  void write(const std::string &path, const std::string &hash) const {
    write_text(path, svg(hash));
  }

private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
  };
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

} // namespace rodlimit
