// mesh.hpp
//
// Structured discretizations of the rescaled rod: a voxelized unit cylinder
// (trilinear hexahedra, 2x2x2 Gauss) and the unit interval (linear elements,
// 2-point Gauss).

#pragma once

#include "material.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rodlimit {

inline constexpr double kGaussOffset = 0.21132486540518711775; // (1 - 1/sqrt 3)/2

/// Reference tables shared by every hexahedron of a mesh (all cells have the
/// same shape, so shape values and physical gradients are computed once).
struct HexQuadrature {
  static constexpr int kPoints = 8;
  static constexpr int kNodes = 8;
  // Local offsets of the quadrature points inside the cell, in [0,1]^3.
  std::array<std::array<double, 3>, kPoints> local{};
  std::array<std::array<double, kNodes>, kPoints> N{};
  // dN[q][n][d] = d N_n / d x_d at point q, physical coordinates.
  std::array<std::array<std::array<double, 3>, kNodes>, kPoints> dN{};
  double weight = 0.0; // physical weight per point (cell volume / 8)
};

/// Unit cylinder x^2 + y^2 < 1, 0 < z < 1, approximated by the hexahedra of
/// a tensor grid on [-1,1]^2 x [0,1] whose centres lie strictly inside the
/// unit disk. Nodes are numbered plane by plane: node = level * n_plane + p.
class CylinderMesh {
public:
  CylinderMesh(int nxy, int nz) : nxy_(nxy), nz_(nz) {
    if (nxy < 4 || nz < 2)
      throw ParameterError("build_cylinder: need nxy >= 4 and nz >= 2");
    hxy_ = 2.0 / nxy;
    hz_ = 1.0 / nz;

    std::vector<int> grid_to_plane((nxy + 1) * (nxy + 1), -1);
    for (int j = 0; j < nxy; ++j)
      for (int i = 0; i < nxy; ++i) {
        const double cx = -1.0 + (i + 0.5) * hxy_;
        const double cy = -1.0 + (j + 0.5) * hxy_;
        if (cx * cx + cy * cy < 1.0) {
          cells2d_.push_back({i, j, {}});
          for (int b = 0; b < 4; ++b)
            grid_to_plane[(j + b / 2) * (nxy + 1) + i + b % 2] = 0;
        }
      }
    for (int j = 0; j <= nxy; ++j)
      for (int i = 0; i <= nxy; ++i) {
        int &slot = grid_to_plane[j * (nxy + 1) + i];
        if (slot < 0)
          continue;
        slot = int(plane_xy_.size());
        plane_xy_.push_back({-1.0 + i * hxy_, -1.0 + j * hxy_});
      }
    for (auto &c : cells2d_)
      for (int b = 0; b < 4; ++b)
        c.corner[b] = grid_to_plane[(c.j + b / 2) * (nxy + 1) + c.i + b % 2];

    plane_weight_.assign(plane_xy_.size(), 0.0);
    for (const auto &c : cells2d_)
      for (int b = 0; b < 4; ++b)
        plane_weight_[c.corner[b]] += 0.25 * hxy_ * hxy_;

    area_ = double(cells2d_.size()) * hxy_ * hxy_;
    measure_ = area_ * 1.0;
    build_quadrature();
  }

  struct Cell2D {
    int i, j;                  // grid indices of the lower-left corner
    std::array<int, 4> corner; // plane node ids, order (0,0),(1,0),(0,1),(1,1)
  };

  int nxy() const { return nxy_; }
  int nz() const { return nz_; }
  double hxy() const { return hxy_; }
  double hz() const { return hz_; }

  std::size_t plane_nodes() const { return plane_xy_.size(); }
  std::size_t plane_cells() const { return cells2d_.size(); }
  std::size_t num_nodes() const { return plane_nodes() * (nz_ + 1); }
  std::size_t num_cells() const { return plane_cells() * nz_; }

  /// Discrete volume |Omega_h|.
  double measure() const { return measure_; }
  /// Discrete cross-section area (the stand-in for pi).
  double cross_section_area() const { return area_; }

  const std::vector<Cell2D> &cells2d() const { return cells2d_; }
  const std::array<double, 2> &plane_xy(std::size_t p) const { return plane_xy_[p]; }
  /// Integral of the bilinear hat function of plane node p over the section.
  double plane_weight(std::size_t p) const { return plane_weight_[p]; }

  std::size_t node(std::size_t plane, int level) const {
    return std::size_t(level) * plane_nodes() + plane;
  }
  std::array<double, 3> node_xyz(std::size_t n) const {
    const auto &xy = plane_xy_[n % plane_nodes()];
    return {xy[0], xy[1], double(n / plane_nodes()) * hz_};
  }
  int node_level(std::size_t n) const { return int(n / plane_nodes()); }

  /// Node ids of a cell in lexicographic (x fastest, then y, then z) order.
  std::array<std::size_t, 8> cell_nodes(std::size_t cell2d, int layer) const {
    const auto &c = cells2d_[cell2d];
    std::array<std::size_t, 8> ids{};
    for (int b = 0; b < 8; ++b)
      ids[b] = node(c.corner[b % 4], layer + b / 4);
    return ids;
  }
  /// Physical coordinates of quadrature point q of a cell.
  std::array<double, 3> qp_xyz(std::size_t cell2d, int layer, int q) const {
    const auto &c = cells2d_[cell2d];
    const auto &l = quad_.local[q];
    return {-1.0 + (c.i + l[0]) * hxy_, -1.0 + (c.j + l[1]) * hxy_, (layer + l[2]) * hz_};
  }

  const HexQuadrature &quadrature() const { return quad_; }

  std::vector<std::size_t> bottom_nodes() const { return level_nodes(0); }
  std::vector<std::size_t> top_nodes() const { return level_nodes(nz_); }

private:
  std::vector<std::size_t> level_nodes(int level) const {
    std::vector<std::size_t> out(plane_nodes());
    for (std::size_t p = 0; p < plane_nodes(); ++p)
      out[p] = node(p, level);
    return out;
  }

  void build_quadrature() {
    const double g[2] = {kGaussOffset, 1.0 - kGaussOffset};
    const double h[3] = {hxy_, hxy_, hz_};
    for (int q = 0; q < 8; ++q) {
      const std::array<double, 3> xi = {g[q % 2], g[(q / 2) % 2], g[q / 4]};
      quad_.local[q] = xi;
      for (int n = 0; n < 8; ++n) {
        const int b[3] = {n % 2, (n / 2) % 2, n / 4};
        double f[3], df[3];
        for (int d = 0; d < 3; ++d) {
          f[d] = b[d] ? xi[d] : 1.0 - xi[d];
          df[d] = (b[d] ? 1.0 : -1.0) / h[d];
        }
        quad_.N[q][n] = f[0] * f[1] * f[2];
        quad_.dN[q][n] = {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
      }
    }
    quad_.weight = hxy_ * hxy_ * hz_ / 8.0;
  }

  int nxy_, nz_;
  double hxy_, hz_;
  double area_ = 0.0, measure_ = 0.0;
  std::vector<Cell2D> cells2d_;
  std::vector<std::array<double, 2>> plane_xy_;
  std::vector<double> plane_weight_;
  HexQuadrature quad_;
};

inline CylinderMesh build_cylinder(int nxy, int nz) { return CylinderMesh(nxy, nz); }

/// Uniform mesh of (0,1) with linear elements.
class IntervalMesh {
public:
  explicit IntervalMesh(int nz) : nz_(nz) {
    if (nz < 2)
      throw ParameterError("build_interval: need nz >= 2");
    h_ = 1.0 / nz;
    nodes_.resize(nz + 1);
    for (int i = 0; i <= nz; ++i)
      nodes_[i] = i * h_;
    nodes_.back() = 1.0;
  }

  int nz() const { return nz_; }
  double h() const { return h_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const std::vector<double> &nodes() const { return nodes_; }

  // 2-point Gauss on each element: local coordinate and weight.
  static constexpr std::array<double, 2> gauss_local() {
    return {kGaussOffset, 1.0 - kGaussOffset};
  }
  double gauss_weight() const { return 0.5 * h_; }

private:
  int nz_;
  double h_;
  std::vector<double> nodes_;
};

inline IntervalMesh build_interval(int nz) { return IntervalMesh(nz); }

} // namespace rodlimit
