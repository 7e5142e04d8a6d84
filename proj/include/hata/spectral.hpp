#ifndef HATA_SPECTRAL_HPP
#define HATA_SPECTRAL_HPP

// Dirichlet eigenproblem -H u = lambda diag(mu) u on V_m \ V_0.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hata/address.hpp"
#include "hata/error.hpp"
#include "hata/geometry.hpp"
#include "hata/harmonic.hpp"
#include "hata/harmonic_structure.hpp"
#include "hata/measure.hpp"

namespace hata {

/// Connected components of the interior graph (boundary vertices removed).
struct InteriorComponents {
  std::vector<int> id;                            // -1 on boundary vertices
  std::vector<std::vector<std::size_t>> members;  // ascending vertex indices
  int primary = -1;                               // component holding |alpha|^2
};

inline InteriorComponents interior_components(const VertexGraph& g) {
  InteriorComponents c;
  c.id.assign(g.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t start = 3; start < g.size(); ++start) {
    if (c.id[start] != -1) continue;
    const int label = static_cast<int>(c.members.size());
    c.members.emplace_back();
    c.id[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      c.members.back().push_back(v);
      for (std::size_t e : g.incident(v)) {
        const std::size_t n = g.neighbor(e, v);
        if (n < 3 || c.id[n] != -1) continue;
        c.id[n] = label;
        stack.push_back(n);
      }
    }
    std::sort(c.members.back().begin(), c.members.back().end());
  }
  // |alpha|^2 = p_{10} is vertex 3 whenever m >= 1.
  if (g.size() > 3) c.primary = c.id[3];
  return c;
}

enum class Support { primary, derived, indeterminate };

inline const char* to_string(Support s) {
  switch (s) {
    case Support::primary: return "primary";
    case Support::derived: return "derived";
    default: return "indeterminate";
  }
}

struct Pairing {
  std::size_t primary = 0; // index into the eigenvalue list
  double predicted = 0.0;  // lambda_d * r1 * mu1
  double mismatch = 0.0;   // |predicted - lambda_p| / lambda_p
};

struct SpectralResult {
  int level = 0;
  std::vector<double> eigenvalues;               // ascending
  std::vector<std::vector<double>> eigenvectors; // on all of V_m, zero on V_0
  std::vector<double> residuals;                 // ||-H u - lambda mu u||_inf
  std::vector<double> mass;                      // mu_p^m
  std::vector<int> component;                    // component id per vertex
  int primary_component = -1;

  // Filled by classify_support.
  std::vector<Support> labels;
  std::vector<double> primary_fraction; // share of the mu-norm in L
  std::vector<bool> clustered;
  // Filled by pair_spectrum.
  std::vector<std::optional<Pairing>> pairing;

  std::size_t size() const { return eigenvalues.size(); }

  VertexFunction eigenfunction(std::size_t k) const {
    return {level, eigenvectors.at(k), FunctionTag::eigenfunction};
  }
};

namespace detail {

struct BlockPair {
  double lambda;
  int block;
  std::vector<double> vector; // block-local, standard-form eigenvector
};

/// Smallest `count` eigenpairs of the block D^{-1/2} (-H_BB) D^{-1/2}.
inline std::vector<BlockPair> solve_block(const LaplacianMatrix& H, const std::vector<double>& mass,
                                          const std::vector<std::size_t>& members,
                                          const std::vector<int>& component, int block,
                                          std::size_t count) {
  const auto n = static_cast<lapack_int>(members.size());
  const auto k = static_cast<lapack_int>(std::min<std::size_t>(count, members.size()));
  if (k == 0) return {};
  std::vector<double> scale(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) scale[i] = 1.0 / std::sqrt(mass[members[i]]);
  std::vector<std::size_t> local(H.size(), 0);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;

  // Column-major; only the upper triangle is referenced.
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t j = 0; j < members.size(); ++j) {
    const std::size_t v = members[j];
    a[j * n + j] = -H.diagonal[v] * scale[j] * scale[j];
    for (std::size_t q = H.row_start[v]; q < H.row_start[v + 1]; ++q) {
      const std::size_t u = H.column[q];
      if (u < H.boundary_count || component[u] != block) continue;
      const std::size_t i = local[u];
      if (i < j) a[j * n + i] = -H.value[q] * scale[i] * scale[j];
    }
  }

  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, k,
                     LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != k)
    throw NumericalError("dsyevr failed (info " + std::to_string(info) + ")");

  std::vector<BlockPair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (lapack_int c = 0; c < k; ++c) {
    BlockPair p{w[c], block, std::vector<double>(members.size())};
    for (std::size_t i = 0; i < members.size(); ++i) p.vector[i] = z[static_cast<std::size_t>(c) * n + i] * scale[i];
    out.push_back(std::move(p));
  }
  return out;
}

/// Exact solver for (-H - sigma diag(mu)) x = b on one interior component.
/// The component is a tree, so eliminating leaves first produces no fill.
class TreeShiftSolver {
public:
  TreeShiftSolver(const LaplacianMatrix& H, const std::vector<double>& mass,
                  const std::vector<std::size_t>& members, const std::vector<int>& component, int block)
      : H_(H), mass_(mass), members_(members) {
    local_.assign(H.size(), kNone);
    for (std::size_t i = 0; i < members.size(); ++i) local_[members[i]] = i;
    parent_.assign(members.size(), kNone);
    coupling_.assign(members.size(), 0.0);
    order_.reserve(members.size());
    std::vector<bool> seen(members.size(), false);
    order_.push_back(0);
    seen[0] = true;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const std::size_t v = order_[head];
      const std::size_t gv = members[v];
      for (std::size_t q = H.row_start[gv]; q < H.row_start[gv + 1]; ++q) {
        const std::size_t gu = H.column[q];
        if (gu < H.boundary_count || component[gu] != block) continue;
        const std::size_t u = local_[gu];
        if (seen[u]) continue;
        seen[u] = true;
        parent_[u] = v;
        coupling_[u] = -H.value[q]; // entry of -H between u and its parent
        order_.push_back(u);
      }
    }
    if (order_.size() != members.size()) throw NumericalError("interior component is not connected");
  }

  /// x = (-H - sigma M)^{-1} b, all vectors block-local.
  std::vector<double> solve(double sigma, const std::vector<double>& b) const {
    const std::size_t n = members_.size();
    std::vector<double> pivot(n);
    std::vector<double> y(b);
    for (std::size_t i = 0; i < n; ++i) pivot[i] = -H_.diagonal[members_[i]] - sigma * mass_[members_[i]];
    for (std::size_t k = n; k-- > 1;) {
      const std::size_t c = order_[k];
      double& pc = pivot[c];
      if (std::abs(pc) < 1e-300) pc = std::copysign(1e-300, pc);
      const std::size_t p = parent_[c];
      pivot[p] -= coupling_[c] * coupling_[c] / pc;
      y[p] -= coupling_[c] * y[c] / pc;
    }
    std::vector<double> x(n);
    const std::size_t root = order_[0];
    if (std::abs(pivot[root]) < 1e-300) pivot[root] = std::copysign(1e-300, pivot[root]);
    x[root] = y[root] / pivot[root];
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t c = order_[k];
      x[c] = (y[c] - coupling_[c] * x[parent_[c]]) / pivot[c];
    }
    return x;
  }

  /// (x^T(-H)x / x^T M x, and -H x) restricted to the block.
  double rayleigh(const std::vector<double>& x) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const std::size_t g = members_[i];
      double s = -H_.diagonal[g] * x[i];
      for (std::size_t q = H_.row_start[g]; q < H_.row_start[g + 1]; ++q) {
        const std::size_t j = local_[H_.column[q]];
        if (j != kNone) s -= H_.value[q] * x[j];
      }
      num += s * x[i];
      den += mass_[g] * x[i] * x[i];
    }
    return num / den;
  }

  double mass_norm(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) s += mass_[members_[i]] * x[i] * x[i];
    return std::sqrt(s);
  }

  double mass_inner(const std::vector<double>& x, const std::vector<double>& y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) s += mass_[members_[i]] * x[i] * y[i];
    return s;
  }

  const std::vector<double>& mass() const { return mass_; }
  const std::vector<std::size_t>& members() const { return members_; }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const LaplacianMatrix& H_;
  const std::vector<double>& mass_;
  const std::vector<std::size_t>& members_;
  std::vector<std::size_t> local_;
  std::vector<std::size_t> parent_;
  std::vector<double> coupling_;
  std::vector<std::size_t> order_;
};

/// Rayleigh quotient iteration from the dense solver's pair.  The dense
/// solve is accurate only relative to the norm of the scaled operator, which
/// grows like (conductance / mass) at the finest cells; a couple of exact
/// shifted solves bring the pointwise residual down to rounding level.
inline void polish_pair(const TreeShiftSolver& solver, double& lambda, std::vector<double>& x) {
  for (int it = 0; it < 2; ++it) {
    std::vector<double> rhs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = solver.mass()[solver.members()[i]] * x[i];
    std::vector<double> y = solver.solve(lambda, rhs);
    const double norm = solver.mass_norm(y);
    if (!(norm > 0.0) || !std::isfinite(norm)) return;
    for (double& v : y) v /= norm;
    // Stay on the same eigenvector; a drift means the shift sat between two pairs.
    if (std::abs(solver.mass_inner(x, y)) < 0.99) return;
    x = std::move(y);
    lambda = solver.rayleigh(x);
  }
}

} // namespace detail

/// The `count` smallest Dirichlet eigenpairs.
///
/// The interior operator is block diagonal over the interior components, so
/// each block is reduced to standard form by the diag(mu)^{-1/2} similarity
/// and solved densely; the blocks' spectra are then merged.  Eigenvectors are
/// normalized so that sum_p mu_p u(p)^2 = 1 and the largest-magnitude entry
/// is positive.
inline SpectralResult solve_dirichlet(const VertexGraph& g, const LaplacianMatrix& H,
                                      const MeasureWeights& w, std::size_t count) {
  if (H.size() != g.size() || w.per_vertex.size() != g.size())
    throw ConfigError("graph, Laplacian and measure levels differ");
  const std::size_t interior = g.size() - 3;
  if (count > interior)
    throw ConfigError("eigen count " + std::to_string(count) + " exceeds interior dimension " +
                      std::to_string(interior));

  const InteriorComponents comps = interior_components(g);
  SpectralResult r;
  r.level = g.level;
  r.mass = w.per_vertex;
  r.component = comps.id;
  r.primary_component = comps.primary;
  if (count == 0) return r;

  std::vector<detail::BlockPair> pairs;
  for (std::size_t b = 0; b < comps.members.size(); ++b) {
    auto part = detail::solve_block(H, w.per_vertex, comps.members[b], comps.id, static_cast<int>(b), count);
    if (part.empty()) continue;
    const detail::TreeShiftSolver solver(H, w.per_vertex, comps.members[b], comps.id, static_cast<int>(b));
    for (auto& p : part) {
      detail::polish_pair(solver, p.lambda, p.vector);
      pairs.push_back(std::move(p));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    return x.lambda < y.lambda || (x.lambda == y.lambda && x.block < y.block);
  });
  pairs.resize(count);

  for (const auto& p : pairs) {
    std::vector<double> u(g.size(), 0.0);
    const auto& members = comps.members[static_cast<std::size_t>(p.block)];
    std::size_t big = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      u[members[i]] = p.vector[i];
      if (std::abs(p.vector[i]) > std::abs(p.vector[big])) big = i;
    }
    if (p.vector[big] < 0.0)
      for (double& x : u) x = -x;

    double res = 0.0;
    double sup = 0.0;
    for (std::size_t i = 3; i < g.size(); ++i) {
      res = std::max(res, std::abs(-H.apply_row(i, u) - p.lambda * w.per_vertex[i] * u[i]));
      sup = std::max(sup, std::abs(u[i]));
    }
    if (!(p.lambda > 0.0) || res > 1e-8 * p.lambda * sup) {
      std::ostringstream msg;
      msg << "eigenpair " << r.size() + 1 << " (lambda " << p.lambda << ") residual " << res
          << " exceeds 1e-8 * lambda * ||u||";
      throw NumericalError(msg.str());
    }
    r.eigenvalues.push_back(p.lambda);
    r.eigenvectors.push_back(std::move(u));
    r.residuals.push_back(res);
  }
  return r;
}

/// Label each eigenvector by where its mu-mass lives.
inline const std::vector<Support>& classify_support(SpectralResult& r, double tolerance = 1e-8) {
  const std::size_t n = r.size();
  r.labels.assign(n, Support::indeterminate);
  r.primary_fraction.assign(n, 0.0);
  r.clustered.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& u = r.eigenvectors[k];
    double in_l = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double q = r.mass[i] * u[i] * u[i];
      total += q;
      if (r.component[i] == r.primary_component) in_l += q;
    }
    const double frac = total > 0.0 ? in_l / total : 0.0;
    r.primary_fraction[k] = frac;
    if (frac >= 1.0 - tolerance)
      r.labels[k] = Support::primary;
    else if (frac <= tolerance)
      r.labels[k] = Support::derived;

    const double lam = r.eigenvalues[k];
    const bool near_prev = k > 0 && lam - r.eigenvalues[k - 1] < 1e-6 * lam;
    const bool near_next = k + 1 < n && r.eigenvalues[k + 1] - lam < 1e-6 * lam;
    r.clustered[k] = near_prev || near_next;
  }
  return r.labels;
}

/// Pull a function on V_m back to K_1: the result on V_{m+1} is u o F_1^{-1}
/// on K_1 and zero elsewhere.  Points are moved by stripping the leading
/// letter 1 of their address.
inline VertexFunction transport_to_first_cell(const VertexFunction& u) {
  const int m = u.level;
  VertexFunction out{m + 1, std::vector<double>(vertex_count(m + 1), 0.0), u.tag};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const Address a = address_at(i);
    Address pre;
    if (a.level == 0) {
      if (a.corner == 2) continue; // the point 1 is not in K_1
      pre = {0, 0, a.corner == 0 ? 2 : 1}; // alpha = p_{12}, 0 = p_{11}
    } else {
      if (a.letter(0) != 1) continue;
      pre = {a.level - 1, a.digits & ((std::uint64_t{1} << (a.level - 1)) - 1), a.corner};
    }
    out.values[i] = u.values[vertex_index(canonicalize(pre))];
  }
  return out;
}

struct DerivedEigenfunction {
  VertexFunction function;
  double predicted_eigenvalue = 0.0;
};

/// chi_{K_1} * phi o F_1^{-1} for a primary eigenfunction phi, with the
/// eigenvalue lambda / (r_1 mu_1) it should carry.
inline DerivedEigenfunction derive_eigenfunction(const SpectralResult& r, std::size_t k,
                                                 const HarmonicStructure& s, const MeasureWeights& w) {
  if (k >= r.size()) throw ConfigError("eigen index out of range");
  if (r.labels.size() != r.size() || r.labels[k] != Support::primary)
    throw ConfigError("eigenfunction " + std::to_string(k + 1) + " is not classified primary");
  return {transport_to_first_cell(r.eigenfunction(k)), r.eigenvalues[k] / (s.r1 * w.mu1)};
}

/// u^T(-H)u / u^T diag(mu) u over the interior.
inline double rayleigh_quotient(const VertexFunction& u, const LaplacianMatrix& H, const MeasureWeights& w) {
  if (u.values.size() != H.size() || w.per_vertex.size() != H.size())
    throw ConfigError("function, Laplacian and measure levels differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = H.boundary_count; i < H.size(); ++i) {
    // Boundary values enter H u, so zero them as the Dirichlet condition requires.
    double s = H.diagonal[i] * u.values[i];
    for (std::size_t q = H.row_start[i]; q < H.row_start[i + 1]; ++q)
      if (!H.is_boundary(H.column[q])) s += H.value[q] * u.values[H.column[q]];
    num += -s * u.values[i];
    den += w.per_vertex[i] * u.values[i] * u.values[i];
  }
  if (den == 0.0) throw ConfigError("Rayleigh quotient of the zero function");
  return num / den;
}

/// For each derived eigenvalue, the primary one closest to lambda_d * r_1 * mu_1.
/// Diagnostic only: mismatches are reported, never asserted.
inline const std::vector<std::optional<Pairing>>& pair_spectrum(SpectralResult& r, const HarmonicStructure& s,
                                                                const MeasureWeights& w) {
  if (r.labels.size() != r.size()) classify_support(r);
  r.pairing.assign(r.size(), std::nullopt);
  const double factor = s.r1 * w.mu1;
  for (std::size_t d = 0; d < r.size(); ++d) {
    if (r.labels[d] != Support::derived) continue;
    const double predicted = r.eigenvalues[d] * factor;
    std::optional<Pairing> best;
    for (std::size_t p = 0; p < r.size(); ++p) {
      if (r.labels[p] != Support::primary) continue;
      const double mis = std::abs(predicted - r.eigenvalues[p]) / r.eigenvalues[p];
      if (!best || mis < best->mismatch) best = Pairing{p, predicted, mis};
    }
    r.pairing[d] = best;
  }
  return r.pairing;
}

} // namespace hata

#endif // HATA_SPECTRAL_HPP
