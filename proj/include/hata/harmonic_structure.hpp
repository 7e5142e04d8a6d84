#ifndef HATA_HARMONIC_STRUCTURE_HPP
#define HATA_HARMONIC_STRUCTURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hata/error.hpp"
#include "hata/geometry.hpp"

namespace hata {

/// The (D, r) harmonic structure with parameter h > 1.
struct HarmonicStructure {
  double h = 2.0;
  double r1 = 0.5;
  double r2 = 0.75;
  /// Boundary Laplacian in the basis {chi_alpha, chi_0, chi_1}.
  std::array<std::array<double, 3>, 3> D{};

  explicit HarmonicStructure(double h_) : h(h_) {
    check_structure_parameter(h_);
    r1 = 1.0 / h;
    r2 = 1.0 - 1.0 / (h * h);
    D = {{{-h, h, 0.0}, {h, -(h + 1.0), 1.0}, {0.0, 1.0, -1.0}}};
  }

  double r(int map) const { return map == 1 ? r1 : r2; }
  /// Weight 1/h^2 of the far endpoint in harmonic extension.
  double theta() const { return 1.0 / (h * h); }
};

/// Sparse symmetric graph Laplacian H_m (off-diagonals >= 0, rows sum to zero).
class LaplacianMatrix {
public:
  int level = 0;
  std::vector<double> diagonal;
  std::vector<std::size_t> row_start;
  std::vector<std::size_t> column;
  std::vector<double> value;
  std::size_t boundary_count = 3;

  std::size_t size() const { return diagonal.size(); }
  std::size_t interior_size() const { return size() - boundary_count; }
  bool is_boundary(std::size_t i) const { return i < boundary_count; }

  double entry(std::size_t i, std::size_t j) const {
    if (i == j) return diagonal[i];
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
      if (column[k] == j) return value[k];
    return 0.0;
  }

  double apply_row(std::size_t i, std::span<const double> f) const {
    double s = diagonal[i] * f[i];
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) s += value[k] * f[column[k]];
    return s;
  }

  std::vector<double> apply(std::span<const double> f) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = apply_row(i, f);
    return out;
  }

  /// Row-major dense copy; for tests and small problems.
  std::vector<double> dense() const {
    const std::size_t n = size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + i] = diagonal[i];
      for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) a[i * n + column[k]] = value[k];
    }
    return a;
  }
};

/// H_m[u][v] = conductance(u, v), H_m[u][u] = -(sum of incident conductances).
inline LaplacianMatrix assemble_laplacian(const VertexGraph& g) {
  LaplacianMatrix H;
  H.level = g.level;
  const std::size_t n = g.size();
  H.diagonal.assign(n, 0.0);
  H.row_start.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) H.row_start[v + 1] = H.row_start[v] + g.degree(v);
  H.column.resize(H.row_start[n]);
  H.value.resize(H.row_start[n]);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t k = H.row_start[v];
    for (std::size_t e : g.incident(v)) {
      const double c = g.edges[e].conductance;
      H.column[k] = g.neighbor(e, v);
      H.value[k] = c;
      H.diagonal[v] -= c;
      ++k;
    }
  }
  return H;
}

namespace detail {

/// Root of a^d + b^d = 1 for a, b in (0, 1): bisection down to a bracket of
/// width 1e-14, then one Newton step.
inline double similarity_root(double a, double b) {
  auto f = [&](double d) { return std::pow(a, d) + std::pow(b, d) - 1.0; };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("dimension equation has no bracketed root");
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double d = 0.5 * (lo + hi);
  const double df = std::pow(a, d) * std::log(a) + std::pow(b, d) * std::log(b);
  const double polished = d - f(d) / df;
  if (std::abs(f(polished)) <= std::abs(f(d))) d = polished;
  if (std::abs(f(d)) >= 1e-13)
    throw NumericalError("dimension root residual " + std::to_string(f(d)) + " exceeds 1e-13");
  return d;
}

} // namespace detail

/// Hausdorff dimension in the effective resistance metric:
/// the root of (1/h)^d + (1 - 1/h^2)^d = 1.
inline double resistance_dimension(double h) {
  check_structure_parameter(h);
  return detail::similarity_root(1.0 / h, 1.0 - 1.0 / (h * h));
}

/// Root of |alpha|^D + (1 - |alpha|^2)^D = 1.
inline double euclidean_dimension(const IfsParams& p) {
  return detail::similarity_root(p.ratio1(), p.ratio2());
}

} // namespace hata

#endif // HATA_HARMONIC_STRUCTURE_HPP
