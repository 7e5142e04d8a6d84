#ifndef HATA_HARMONIC_HPP
#define HATA_HARMONIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hata/address.hpp"
#include "hata/error.hpp"
#include "hata/harmonic_structure.hpp"

namespace hata {

enum class FunctionTag { harmonic, spline, eigenfunction, generic };

/// Real function on V_level, indexed by vertex_index().
struct VertexFunction {
  int level = 0;
  std::vector<double> values;
  FunctionTag tag = FunctionTag::generic;

  double sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
  }
};

/// One step of piecewise-harmonic refinement V_m -> V_{m+1}:
///   u(p_{w10}) = (1 - 1/h^2) u(p_{w1}) + (1/h^2) u(p_{w2}),  u(p_{w20}) = u(p_{w10}).
/// Every cell owns its two new vertices.
inline VertexFunction extend_once(const VertexFunction& u, const HarmonicStructure& s) {
  const int m = u.level;
  if (u.values.size() != vertex_count(m)) throw ConfigError("vertex function size does not match its level");
  if (m + 1 > kMaxLevel) throw ConfigError("cannot extend beyond the maximum level");
  VertexFunction out;
  out.level = m + 1;
  out.tag = u.tag;
  out.values.resize(vertex_count(m + 1));
  std::copy(u.values.begin(), u.values.end(), out.values.begin());
  const double t = s.theta();
  const std::size_t first_new = vertex_count(m);
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << m); ++w) {
    const auto cv = cell_vertices(m, w);
    const double v10 = std::fma(t, u.values[cv[2]] - u.values[cv[1]], u.values[cv[1]]);
    out.values[first_new + 2 * w] = v10;     // (w1, 0)
    out.values[first_new + 2 * w + 1] = v10; // (w2, 0)
  }
  return out;
}

/// Harmonic function on V_m with boundary values b = (u(alpha), u(0), u(1)).
inline VertexFunction harmonic_from_boundary(const std::array<double, 3>& b, int m,
                                             const HarmonicStructure& s) {
  if (m < 0 || m > kMaxLevel) throw ConfigError("level out of range");
  VertexFunction u{0, {b[0], b[1], b[2]}, FunctionTag::harmonic};
  while (u.level < m) u = extend_once(u, s);
  return u;
}

/// Piecewise-harmonic extension of level-m data to level `target`.
inline VertexFunction extend_data(const VertexFunction& u, int target, const HarmonicStructure& s) {
  if (target <= u.level) throw ConfigError("target level must exceed the data level");
  VertexFunction out = u;
  while (out.level < target) out = extend_once(out, s);
  return out;
}

/// Level-m harmonic spline psi_p^m: 1 at `vertex`, 0 at the other points of V_m.
inline VertexFunction harmonic_spline(int m, std::size_t vertex) {
  VertexFunction u{m, std::vector<double>(vertex_count(m), 0.0), FunctionTag::spline};
  u.values.at(vertex) = 1.0;
  return u;
}

/// max over V_m \ V_0 of |H_m u(p)|.
inline double check_harmonicity(const VertexFunction& u, const LaplacianMatrix& H) {
  if (u.values.size() != H.size()) throw ConfigError("function and Laplacian levels differ");
  double r = 0.0;
  for (std::size_t i = H.boundary_count; i < H.size(); ++i) r = std::max(r, std::abs(H.apply_row(i, u.values)));
  return r;
}

} // namespace hata

#endif // HATA_HARMONIC_HPP
