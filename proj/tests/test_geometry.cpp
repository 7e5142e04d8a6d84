#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hata/hata.hpp"
#include "oracles.hpp"

namespace {

using hata::Address;
using hata::Complex;

TEST(Address, ParseAndPrint) {
  const Address a = hata::parse_address("121:2");
  EXPECT_EQ(a.level, 3);
  EXPECT_EQ(a.word(), "121");
  EXPECT_EQ(a.corner, 2);
  EXPECT_EQ(a.to_string(), "121:2");
  EXPECT_EQ(hata::parse_address(":1").level, 0);
  EXPECT_THROW(hata::parse_address("13:0"), hata::ConfigError);
  EXPECT_THROW(hata::parse_address("12:3"), hata::ConfigError);
  EXPECT_THROW(hata::parse_address("12"), hata::ConfigError);
}

TEST(Address, PrependAndAppend) {
  const Address a = hata::make_address("21", 0);
  EXPECT_EQ(a.prepend("11").word(), "1121");
  EXPECT_EQ(a.append(2).word(), "212");
  EXPECT_EQ(a.letter(0), 2);
  EXPECT_EQ(a.last_letter(), 1);
}

TEST(Address, CanonicalExamples) {
  auto canon = [](const char* s) { return hata::canonicalize(hata::parse_address(s)).to_string(); };
  EXPECT_EQ(canon("1:2"), ":0");   // alpha = p_{12}
  EXPECT_EQ(canon("11:1"), ":1");  // 0 = p_{11}
  EXPECT_EQ(canon("22:2"), ":2");  // 1 = p_{22}
  EXPECT_EQ(canon("2:1"), "1:0");  // |alpha|^2 = p_{10} = p_{21}
  EXPECT_EQ(canon("112:2"), "1:0"); // F_1 F_1 F_2(1) = F_1(alpha)
  EXPECT_EQ(canon("221:0"), "221:0");
  EXPECT_EQ(canon("2211:1"), "21:0"); // p_{w11} = p_{w1} twice, then p_{w21} = p_{w10}
}

TEST(Address, CanonicalFormIsIdempotentAndGeometric) {
  const hata::IfsParams p;
  for (int m = 0; m <= 12; ++m) {
    const std::uint64_t n = std::uint64_t{1} << m;
    for (std::uint64_t w = 0; w < n; w += (m > 8 ? 7 : 1)) {
      for (int c = 0; c < 3; ++c) {
        const Address a{m, w, c};
        const Address k = hata::canonicalize(a);
        EXPECT_EQ(hata::canonicalize(k), k);
        EXPECT_LE(k.level, m);
        if (k.level > 0) EXPECT_EQ(k.corner, 0);
        EXPECT_LT(std::abs(hata::coordinate(a, p) - hata::coordinate(k, p)), 1e-12) << a.to_string();
      }
    }
  }
}

TEST(Address, CoordinatesAgreeOverAlphaGrid) {
  // Equal canonical forms must give equal points for every admissible alpha.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(0.05, 0.95), im(0.05, 0.6);
  int tested = 0;
  while (tested < 20) {
    const Complex a(re(rng), im(rng));
    if (std::abs(a) >= 1.0 || std::abs(1.0 - a) >= 1.0) continue;
    ++tested;
    const hata::IfsParams p(a);
    for (std::uint64_t w = 0; w < 64; ++w)
      for (int c = 0; c < 3; ++c) {
        const Address x{6, w, c};
        EXPECT_LT(std::abs(hata::coordinate(x, p) - hata::coordinate(hata::canonicalize(x), p)), 1e-12);
      }
  }
}

TEST(Address, IndexRoundTrip) {
  for (int m = 0; m <= 10; ++m) {
    for (std::size_t i = 0; i < hata::vertex_count(m); ++i) {
      const Address a = hata::address_at(i);
      EXPECT_EQ(hata::canonicalize(a), a);
      EXPECT_EQ(hata::vertex_index(a), i);
      EXPECT_LE(a.level, m);
    }
  }
}

TEST(Geometry, CoordinateExamples) {
  const hata::IfsParams p;
  const Complex z = hata::coordinate(hata::make_address("2", 0), p);
  EXPECT_NEAR(z.real(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(z.imag(), -std::sqrt(3.0) / 9.0, 1e-12);
  EXPECT_NEAR(z.real(), 0.66667, 5e-6);
  EXPECT_NEAR(z.imag(), -0.19245, 5e-6);
  EXPECT_LT(std::abs(hata::coordinate(hata::make_address("1", 0), p) - Complex(1.0 / 3.0, 0.0)), 1e-15);
  EXPECT_LT(std::abs(hata::coordinate(hata::make_address("1", 2), p) - p.alpha()), 1e-15);
  EXPECT_NEAR(p.abs2(), 1.0 / 3.0, 1e-15);
}

TEST(Geometry, RejectsInadmissibleAlpha) {
  EXPECT_THROW(hata::IfsParams(Complex(1.2, 0.3)), hata::ConfigError);
  EXPECT_THROW(hata::IfsParams(Complex(0.0, 0.0)), hata::ConfigError);
  EXPECT_THROW(hata::IfsParams(Complex(0.5, 0.0)), hata::ConfigError);
  EXPECT_THROW(hata::IfsParams(Complex(-0.1, 0.5)), hata::ConfigError); // |1 - alpha| >= 1
  EXPECT_NO_THROW(hata::IfsParams(Complex(0.4, 0.3)));
  EXPECT_THROW(hata::build_graph(2, hata::IfsParams(), 1.0), hata::ConfigError);
  EXPECT_THROW(hata::build_graph(-1, hata::IfsParams(), 2.0), hata::ConfigError);
}

TEST(Graph, VertexAndBoundaryCounts) {
  const hata::IfsParams p;
  for (int m = 0; m <= 12; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    EXPECT_EQ(g.size(), (std::size_t{1} << (m + 1)) + 1);
    EXPECT_EQ(g.edges.size(), std::size_t{1} << (m + 1));
    EXPECT_EQ(g.cells.size(), std::size_t{1} << m);
    std::size_t boundary = 0;
    for (const auto& v : g.vertices) boundary += v.boundary;
    EXPECT_EQ(boundary, 3u);
    EXPECT_TRUE(g.vertices[0].boundary && g.vertices[1].boundary && g.vertices[2].boundary);
  }
}

TEST(Graph, MatchesCoordinateOracle) {
  const hata::IfsParams p;
  for (int m = 0; m <= 7; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    const auto s = oracle::point_set(m, p.alpha());
    ASSERT_EQ(s.points.size(), g.size()) << "m=" << m;
    // Every vertex coordinate is a distinct oracle point.
    std::set<std::size_t> seen;
    for (const auto& v : g.vertices) seen.insert(s.find(v.z));
    EXPECT_EQ(seen.size(), g.size());
    // Cells agree corner by corner.
    for (std::size_t k = 0; k < g.cells.size(); ++k)
      for (int c = 0; c < 3; ++c)
        EXPECT_EQ(s.find(g.vertices[g.cells[k].vertex[c]].z), s.cells[k][c]);
  }
}

TEST(Graph, IsATreeWithTwoInteriorComponents) {
  const hata::IfsParams p;
  for (int m = 2; m <= 10; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    // Connected with |E| = |V| - 1.
    std::vector<bool> seen(g.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto e : g.incident(v)) {
        const auto n = g.neighbor(e, v);
        if (!seen[n]) {
          seen[n] = true;
          ++count;
          stack.push_back(n);
        }
      }
    }
    EXPECT_EQ(count, g.size());
    const auto comps = hata::interior_components(g);
    ASSERT_EQ(comps.members.size(), 2u);
    EXPECT_EQ(comps.id[3], comps.primary);
    EXPECT_EQ(comps.members[0].size() + comps.members[1].size(), g.size() - 3);
  }
}

TEST(Graph, DegreeHistogramMatchesOracle) {
  const hata::IfsParams p;
  for (int m = 0; m <= 7; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    const auto s = oracle::point_set(m, p.alpha());
    std::vector<std::set<std::size_t>> adj(s.points.size());
    for (const auto& c : s.cells) {
      adj[c[0]].insert(c[1]);
      adj[c[1]].insert(c[0]);
      adj[c[1]].insert(c[2]);
      adj[c[2]].insert(c[1]);
    }
    std::map<std::size_t, std::size_t> want, got;
    for (const auto& a : adj) ++want[a.size()];
    for (std::size_t v = 0; v < g.size(); ++v) ++got[g.degree(v)];
    EXPECT_EQ(got, want) << "m=" << m;
    for (const auto& [deg, n] : got) EXPECT_TRUE(deg == 1 || deg == 2 || deg == 3) << deg;
    if (m >= 1) EXPECT_EQ(g.degree(1), 2u); // the point 0
  }
}

TEST(Graph, LeavesAreLoneCornersOfOneCell) {
  // Degree one exactly when p lies in a single cell, as p_{w0} or p_{w2}.
  const hata::IfsParams p;
  for (int m = 1; m <= 9; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    std::vector<int> cells(g.size(), 0);
    std::vector<int> corner(g.size(), -1);
    for (const auto& c : g.cells)
      for (int k = 0; k < 3; ++k) {
        ++cells[c.vertex[k]];
        corner[c.vertex[k]] = k;
      }
    for (std::size_t v = 0; v < g.size(); ++v) {
      const bool lone_end = cells[v] == 1 && corner[v] != 1;
      EXPECT_EQ(g.degree(v) == 1, lone_end) << "m=" << m << " v=" << g.vertices[v].address.to_string();
      EXPECT_LE(cells[v], 2);
    }
  }
}

TEST(Graph, LevelsAreNested) {
  const hata::IfsParams p;
  auto coarse = hata::build_graph(0, p, 2.0);
  for (int m = 1; m <= 10; ++m) {
    const auto fine = hata::build_graph(m, p, 2.0);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      EXPECT_EQ(fine.vertices[i].address, coarse.vertices[i].address);
      EXPECT_LT(std::abs(fine.vertices[i].z - coarse.vertices[i].z), 1e-13);
    }
    for (std::size_t i = coarse.size(); i < fine.size(); ++i) EXPECT_EQ(fine.vertices[i].birth_level, m);
    coarse = fine;
  }
}

TEST(Graph, OnAxisVerticesMatchIntervalOracle) {
  const hata::IfsParams p;
  for (int m = 0; m <= 12; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    std::vector<double> xs;
    for (const auto& v : g.vertices)
      if (v.on_unit_interval) xs.push_back(v.z.real());
    std::sort(xs.begin(), xs.end());
    const auto want = oracle::interval_points(m, p.abs2());
    ASSERT_EQ(xs.size(), want.size()) << "m=" << m;
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(xs[i], want[i], 1e-12);
  }
}

TEST(Graph, OnAxisVerticesFormThePathFromZeroToOne) {
  const hata::IfsParams p;
  for (int m = 1; m <= 10; ++m) {
    const auto g = hata::build_graph(m, p, 2.0);
    // Walk the unique tree path from vertex 1 (the point 0) to vertex 2 (the point 1).
    std::vector<std::size_t> parent(g.size(), g.size());
    std::vector<std::size_t> queue{1};
    parent[1] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto e : g.incident(queue[q])) {
        const auto n = g.neighbor(e, queue[q]);
        if (parent[n] == g.size()) {
          parent[n] = queue[q];
          queue.push_back(n);
        }
      }
    std::set<std::size_t> path;
    for (std::size_t v = 2; v != 1; v = parent[v]) path.insert(v);
    path.insert(1);
    std::set<std::size_t> on_axis;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (g.vertices[v].on_unit_interval) on_axis.insert(v);
    EXPECT_EQ(on_axis, path) << "m=" << m;
  }
}

TEST(Graph, LevelOneConductances) {
  const auto g = hata::build_graph(1, hata::IfsParams(), 2.0);
  std::multiset<double> got;
  for (const auto& e : g.edges) got.insert(std::round(e.conductance * 1e12) / 1e12);
  // h/r1, 1/r1, h/r2, 1/r2 with r1 = 1/2, r2 = 3/4.
  const std::multiset<double> want{std::round(4.0 * 1e12) / 1e12, std::round(2.0 * 1e12) / 1e12,
                                   std::round(8.0 / 3.0 * 1e12) / 1e12, std::round(4.0 / 3.0 * 1e12) / 1e12};
  EXPECT_EQ(got, want);
}

} // namespace
