#ifndef HATA_TRACE_HPP
#define HATA_TRACE_HPP

// Restrictions of vertex functions to the main edge [0,1] and the
// diagnostics run on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hata/address.hpp"
#include "hata/error.hpp"
#include "hata/geometry.hpp"
#include "hata/harmonic.hpp"

namespace hata {

inline constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct TracePoint {
  double x = 0.0;
  double value = 0.0;
  int birth_level = 0;
  std::size_t vertex = 0;
  // For a middle point q = p_{w10}: the vertices p_{w1} (left) and p_{w2} (right).
  std::size_t left_parent = kNoParent;
  std::size_t right_parent = kNoParent;
};

struct TraceSeries {
  int level = 0;
  std::vector<TracePoint> points; // strictly increasing x, from 0 to 1

  /// Trace position of each vertex index (kNoParent when off the axis).
  std::unordered_map<std::size_t, std::size_t> position_index() const {
    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < points.size(); ++i) pos.emplace(points[i].vertex, i);
    return pos;
  }
};

/// On-axis vertices of `g` with the values of `u`, sorted by x.
inline TraceSeries restrict_to_interval(const VertexFunction& u, const VertexGraph& g) {
  if (u.values.size() != g.size()) throw ConfigError("function and graph levels differ");
  TraceSeries t;
  t.level = g.level;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vertex& v = g.vertices[i];
    if (!v.on_unit_interval) continue;
    TracePoint p{v.z.real(), u.values[i], v.birth_level, i};
    if (v.birth_level > 0) {
      // Canonical (w1, 0) is p_{w10}, flanked by p_{w1} and p_{w2}.
      const Address& a = v.address;
      if (a.corner != 0 || a.last_letter() != 1)
        throw NumericalError("on-axis vertex " + a.to_string() + " is not a middle point p_{w10}");
      const Address cell{a.level - 1, a.digits >> 1, 0};
      p.left_parent = vertex_index(canonicalize({cell.level, cell.digits, 1}));
      p.right_parent = vertex_index(canonicalize({cell.level, cell.digits, 2}));
      if (!g.vertices[p.left_parent].on_unit_interval || !g.vertices[p.right_parent].on_unit_interval)
        throw NumericalError("on-axis vertex " + a.to_string() + " has an off-axis parent");
    }
    t.points.push_back(p);
  }
  std::sort(t.points.begin(), t.points.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return t;
}

struct ThetaEntry {
  double x = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  int level = 0; // birth level of the middle point
  bool excluded = false;
  std::size_t vertex = 0;
};

struct ThetaReport {
  double reference = 0.0; // 1/h^2
  std::vector<ThetaEntry> entries;
  double max_deviation = 0.0; // over non-excluded entries
  std::size_t excluded_count = 0;
};

/// theta(q) = (u(q) - u(x)) / (u(y) - u(x)) at every middle point q born at
/// level >= `min_level` (default: only the points born at the trace level).
/// Points with |u(y) - u(x)| < 1e-9 ||u||_inf are excluded and counted.
inline ThetaReport theta_analysis(const TraceSeries& t, const VertexFunction& u, double h,
                                  std::optional<int> min_level = std::nullopt) {
  const int from = min_level.value_or(t.level);
  const double cutoff = 1e-9 * u.sup_norm();
  ThetaReport r;
  r.reference = 1.0 / (h * h);
  for (const TracePoint& p : t.points) {
    if (p.left_parent == kNoParent || p.birth_level < from) continue;
    ThetaEntry e;
    e.x = p.x;
    e.level = p.birth_level;
    e.vertex = p.vertex;
    const double ux = u.values[p.left_parent];
    const double uy = u.values[p.right_parent];
    if (!(std::abs(uy - ux) >= cutoff) || cutoff == 0.0) {
      e.excluded = true;
      ++r.excluded_count;
    } else {
      e.theta = (u.values[p.vertex] - ux) / (uy - ux);
      r.max_deviation = std::max(r.max_deviation, std::abs(e.theta - r.reference));
    }
    r.entries.push_back(e);
  }
  return r;
}

struct MonotonicityResult {
  bool nondecreasing = true;
  std::optional<std::size_t> first_violation; // index i with value[i] < value[i-1]
};

inline MonotonicityResult monotonicity_check(const TraceSeries& t) {
  for (std::size_t i = 1; i < t.points.size(); ++i)
    if (t.points[i].value < t.points[i - 1].value) return {false, i};
  return {};
}

/// Residual of the two-branch system satisfied by the trace f of the
/// harmonic function with boundary data chi_1:
///   f(|alpha|^2 x) = f(x) / h^2,   f(F_2 x) = (1 - 1/h^2) f(x) + 1/h^2.
/// Points of `coarse` (level m-2) are carried into `fine` (level m) by
/// prefixing their address with "11" or "2".
inline double functional_equation_check(const TraceSeries& fine, const TraceSeries& coarse, double h) {
  if (fine.level != coarse.level + 2) throw ConfigError("fine trace must be two levels above the coarse one");
  auto is_chi1 = [](const TraceSeries& t) {
    return t.points.size() >= 2 && t.points.front().value == 0.0 && t.points.back().value == 1.0;
  };
  if (!is_chi1(fine) || !is_chi1(coarse))
    throw ConfigError("functional equation applies to the trace with boundary data (0, 0, 1)");

  const auto pos = fine.position_index();
  auto value_at = [&](const Address& a) {
    const auto it = pos.find(vertex_index(canonicalize(a)));
    if (it == pos.end()) throw NumericalError("transported point " + a.to_string() + " is not on the fine trace");
    return fine.points[it->second].value;
  };
  const double t = 1.0 / (h * h);
  double residual = 0.0;
  for (const TracePoint& p : coarse.points) {
    const Address a = address_at(p.vertex);
    const double left = value_at(a.prepend("11"));
    const double right = value_at(a.prepend("2"));
    residual = std::max(residual, std::abs(left - t * p.value));
    residual = std::max(residual, std::abs(right - ((1.0 - t) * p.value + t)));
  }
  return residual;
}

} // namespace hata

#endif // HATA_TRACE_HPP
