#ifndef HATA_GEOMETRY_HPP
#define HATA_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hata/address.hpp"
#include "hata/error.hpp"

namespace hata {

using Complex = std::complex<double>;

/// The IFS parameter alpha of F_1(z) = alpha*conj(z), F_2(z) = (1-|alpha|^2)*conj(z) + |alpha|^2.
class IfsParams {
public:
  IfsParams() : IfsParams(default_alpha()) {}

  explicit IfsParams(Complex alpha) : alpha_(alpha), abs2_(std::norm(alpha)) {
    const double a = std::abs(alpha);
    const double b = std::abs(Complex(1.0) - alpha);
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
      throw ConfigError("alpha must satisfy 0 < |alpha| < 1 and 0 < |1 - alpha| < 1");
    // On the real axis the two cells overlap and the set collapses onto [0,1].
    if (alpha.imag() == 0.0) throw ConfigError("alpha must not be real");
  }

  static Complex default_alpha() { return {0.5, std::sqrt(3.0) / 6.0}; }

  Complex alpha() const { return alpha_; }
  double abs2() const { return abs2_; }
  /// Contraction ratios |alpha| and 1 - |alpha|^2.
  double ratio1() const { return std::sqrt(abs2_); }
  double ratio2() const { return 1.0 - abs2_; }

  Complex apply(int map, Complex z) const {
    return map == 1 ? alpha_ * std::conj(z) : (1.0 - abs2_) * std::conj(z) + abs2_;
  }

  /// p_0 = alpha, p_1 = 0, p_2 = 1.
  Complex corner_point(int corner) const {
    switch (corner) {
      case 0: return alpha_;
      case 1: return {0.0, 0.0};
      default: return {1.0, 0.0};
    }
  }

private:
  Complex alpha_;
  double abs2_;
};

/// F_{w_1} o ... o F_{w_m}(p_corner).
inline Complex coordinate(const Address& a, const IfsParams& p) {
  Complex z = p.corner_point(a.corner);
  for (int k = 0; k < a.level; ++k) z = p.apply(((a.digits >> k) & 1u) ? 2 : 1, z);
  return z;
}

struct Vertex {
  Address address; // canonical
  Complex z;
  bool boundary = false;
  bool on_unit_interval = false;
  int birth_level = 0;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double conductance = 0.0;
  std::size_t cell = 0;
};

struct Cell {
  std::uint64_t word = 0;
  std::array<std::size_t, 3> vertex{}; // p_{w0}, p_{w1}, p_{w2}
  double resistance = 1.0;             // r_w
};

/// Level-m approximation V_m of the Hata set.
///
/// Vertices are numbered by vertex_index(), so V_m is a prefix of V_{m+1}
/// and indices 0, 1, 2 are the boundary points alpha, 0, 1.  Edge 2k is
/// (p_{w0}, p_{w1}) and edge 2k+1 is (p_{w1}, p_{w2}) of cell k.
class VertexGraph {
public:
  int level = 0;
  double h = 2.0;
  IfsParams params;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Cell> cells;

  std::size_t size() const { return vertices.size(); }
  std::size_t degree(std::size_t v) const { return adj_start_[v + 1] - adj_start_[v]; }

  /// Incident edge indices of `v`.
  std::span<const std::size_t> incident(std::size_t v) const {
    return {adj_edges_.data() + adj_start_[v], degree(v)};
  }

  std::size_t neighbor(std::size_t edge, std::size_t v) const {
    return edges[edge].u == v ? edges[edge].v : edges[edge].u;
  }

  std::size_t index_of(const Address& a) const {
    const std::size_t i = vertex_index(canonicalize(a));
    if (i >= vertices.size()) throw ConfigError("address " + a.to_string() + " is not in V_m");
    return i;
  }

  void build_adjacency() {
    adj_start_.assign(vertices.size() + 1, 0);
    for (const Edge& e : edges) {
      ++adj_start_[e.u + 1];
      ++adj_start_[e.v + 1];
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) adj_start_[i + 1] += adj_start_[i];
    adj_edges_.assign(2 * edges.size(), 0);
    std::vector<std::size_t> fill(adj_start_.begin(), adj_start_.end() - 1);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      adj_edges_[fill[edges[k].u]++] = k;
      adj_edges_[fill[edges[k].v]++] = k;
    }
  }

private:
  std::vector<std::size_t> adj_start_;
  std::vector<std::size_t> adj_edges_;
};

/// Numeric on-axis test.  The threshold shrinks with the smallest cell
/// diameter at the graph level.
inline bool on_unit_interval(Complex z, const IfsParams& p, int level) {
  const double scale = std::pow(std::min(p.ratio1(), p.ratio2()), level);
  const double tol = 1e-9 * scale;
  return std::abs(z.imag()) <= tol && z.real() >= -1e-12 && z.real() <= 1.0 + 1e-12;
}

inline void check_structure_parameter(double h) {
  if (!(h > 1.0) || !std::isfinite(h)) throw ConfigError("h must exceed 1");
}

inline VertexGraph build_graph(int m, const IfsParams& p, double h) {
  if (m < 0 || m > kMaxLevel) throw ConfigError("level must be in [0, " + std::to_string(kMaxLevel) + "]");
  check_structure_parameter(h);
  const double r1 = 1.0 / h;
  const double r2 = 1.0 - 1.0 / (h * h);

  VertexGraph g;
  g.level = m;
  g.h = h;
  g.params = p;
  g.vertices.resize(vertex_count(m));
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    Vertex& v = g.vertices[i];
    v.address = address_at(i);
    v.z = coordinate(v.address, p);
    v.boundary = i < 3;
    v.birth_level = v.address.level;
    v.on_unit_interval = on_unit_interval(v.z, p, m);
  }

  const std::uint64_t ncells = std::uint64_t{1} << m;
  g.cells.reserve(ncells);
  g.edges.reserve(2 * ncells);
  for (std::uint64_t w = 0; w < ncells; ++w) {
    Cell c;
    c.word = w;
    c.vertex = cell_vertices(m, w);
    for (int k = m - 1; k >= 0; --k) c.resistance *= ((w >> k) & 1u) ? r2 : r1;
    const std::size_t id = g.cells.size();
    g.edges.push_back({c.vertex[0], c.vertex[1], h / c.resistance, id});
    g.edges.push_back({c.vertex[1], c.vertex[2], 1.0 / c.resistance, id});
    g.cells.push_back(c);
  }
  g.build_adjacency();
  return g;
}

} // namespace hata

#endif // HATA_GEOMETRY_HPP
