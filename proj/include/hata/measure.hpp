#ifndef HATA_MEASURE_HPP
#define HATA_MEASURE_HPP

#include <array>
#include <cmath>
#include <vector>

#include "hata/geometry.hpp"
#include "hata/harmonic_structure.hpp"

namespace hata {

/// Self-similar measure with cell weights mu_1 = r_1^d, mu_2 = r_2^d and the
/// spline integrals mu_p^m of the working level.
struct MeasureWeights {
  double d = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::array<double, 3> mu0{}; // (mu_alpha^0, mu_0^0, mu_1^0), indexed by corner
  int level = 0;
  std::vector<double> per_vertex;
};

/// Integrals of the three level-0 harmonic splines.
inline std::array<double, 3> mu_zero(const HarmonicStructure& s, double mu1, double mu2) {
  const double hh = s.h * s.h - 1.0;
  const double den = mu1 * mu2 + hh * mu1 + mu2;
  return {mu1 * mu2 / den, hh * mu1 / den, mu2 / den};
}

inline std::array<double, 3> mu_zero(const HarmonicStructure& s) {
  const double d = resistance_dimension(s.h);
  return mu_zero(s, std::pow(s.r1, d), std::pow(s.r2, d));
}

/// mu_p^m = sum over cells w containing p of mu_w * mu^0_{corner of p in w}.
inline std::vector<double> mu_vertex(const VertexGraph& g, double mu1, double mu2,
                                     const std::array<double, 3>& mu0) {
  std::vector<double> acc(g.size(), 0.0);
  for (const Cell& c : g.cells) {
    double mw = 1.0;
    for (int k = g.level - 1; k >= 0; --k) mw *= ((c.word >> k) & 1u) ? mu2 : mu1;
    for (int i = 0; i < 3; ++i) acc[c.vertex[i]] += mw * mu0[i];
  }
  return acc;
}

inline MeasureWeights make_measure(const VertexGraph& g, const HarmonicStructure& s) {
  MeasureWeights w;
  w.d = resistance_dimension(s.h);
  w.mu1 = std::pow(s.r1, w.d);
  w.mu2 = std::pow(s.r2, w.d);
  w.mu0 = mu_zero(s, w.mu1, w.mu2);
  w.level = g.level;
  w.per_vertex = mu_vertex(g, w.mu1, w.mu2, w.mu0);
  return w;
}

} // namespace hata

#endif // HATA_MEASURE_HPP
