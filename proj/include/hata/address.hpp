#ifndef HATA_ADDRESS_HPP
#define HATA_ADDRESS_HPP

// Symbolic vertex names p_{wi} = F_w(p_i) and the identifications of the
// Hata tree set.  Corners: 0 -> alpha, 1 -> 0, 2 -> 1.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "hata/error.hpp"

namespace hata {

/// Largest level supported by the packed word representation and the vertex
/// numbering.  2^(24+1)+1 vertices is already far beyond a dense solve.
inline constexpr int kMaxLevel = 24;

/// A word over {1,2} plus a corner index.
///
/// Letters are packed into `digits`, first letter in the most significant of
/// the `level` low bits; bit value 0 encodes map F_1 and 1 encodes F_2.  For
/// words of equal length, numeric order of `digits` is lexicographic order.
struct Address {
  int level = 0;
  std::uint64_t digits = 0;
  int corner = 0;

  /// Letter (1 or 2) at position `pos` counted from the front of the word.
  int letter(int pos) const { return ((digits >> (level - 1 - pos)) & 1u) ? 2 : 1; }
  int last_letter() const { return (digits & 1u) ? 2 : 1; }

  Address append(int map) const {
    return {level + 1, (digits << 1) | (map == 2 ? 1u : 0u), corner};
  }

  /// Prefix the word by `prefix` (a word over {1,2} as text, e.g. "11").
  Address prepend(std::string_view prefix) const {
    Address out = *this;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
      if (*it == '2') out.digits |= (std::uint64_t{1} << out.level);
      ++out.level;
    }
    return out;
  }

  std::string word() const {
    std::string s;
    s.reserve(static_cast<std::size_t>(level));
    for (int i = 0; i < level; ++i) s.push_back(letter(i) == 2 ? '2' : '1');
    return s;
  }

  /// "12:0" style name.
  std::string to_string() const { return word() + ":" + std::to_string(corner); }

  friend bool operator==(const Address&, const Address&) = default;

  // Level first, then word, then corner.
  friend std::strong_ordering operator<=>(const Address& a, const Address& b) {
    if (auto c = a.level <=> b.level; c != 0) return c;
    if (auto c = a.digits <=> b.digits; c != 0) return c;
    return a.corner <=> b.corner;
  }
};

inline Address make_address(std::string_view word, int corner) {
  if (corner < 0 || corner > 2) throw ConfigError("address corner must be 0, 1 or 2");
  if (word.size() > static_cast<std::size_t>(kMaxLevel) + 2)
    throw ConfigError("address word too long");
  Address a{0, 0, corner};
  for (char c : word) {
    if (c != '1' && c != '2') throw ConfigError("address word must use letters 1 and 2");
    a = a.append(c == '2' ? 2 : 1);
  }
  return a;
}

/// Parse "12:0".
inline Address parse_address(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 2 != text.size())
    throw ConfigError("address must look like <word>:<corner>");
  return make_address(text.substr(0, colon), text[colon + 1] - '0');
}

/// Canonical representative of the point named by `raw`.
///
/// Identifications used (all as equalities of points):
///   (w1, 0) == (w2, 1),  (w, 0) == (w1, 2),  (w, 1) == (w1, 1),  (w, 2) == (w2, 2).
/// The result lives at the birth level of the point (its `level`), and among
/// the representatives at that level it is the lexicographically smallest.
inline Address canonicalize(Address a) {
  while (a.level > 0) {
    const int last = a.last_letter();
    if (a.corner == 1 && last == 1) {
      // p_{w11} = p_{w1}
    } else if (a.corner == 2 && last == 2) {
      // p_{w22} = p_{w2}
    } else if (a.corner == 2 && last == 1) {
      a.corner = 0; // p_{w12} = p_{w0}
    } else {
      break;
    }
    a.digits >>= 1;
    --a.level;
  }
  // At the birth level the only remaining pair is p_{w21} = p_{w10}.
  if (a.level > 0 && a.corner == 1 && a.last_letter() == 2) {
    a.digits &= ~std::uint64_t{1};
    a.corner = 0;
  }
  return a;
}

inline int birth_level(const Address& a) { return canonicalize(a).level; }

inline std::size_t vertex_count(int level) {
  return (std::size_t{1} << (level + 1)) + 1;
}

/// Position of a canonical address in the vertex numbering shared by all
/// levels: the three boundary points first, then the points born at level 1,
/// 2, ... with (w1, 0) and (w2, 0) adjacent and ordered by w.  The vertices
/// of V_m are exactly the indices below vertex_count(m).
inline std::size_t vertex_index(const Address& canonical) {
  if (canonical.level == 0) return static_cast<std::size_t>(canonical.corner);
  const std::size_t born_before = (std::size_t{1} << canonical.level) - 2;
  return 3 + born_before + static_cast<std::size_t>(canonical.digits);
}

/// Inverse of vertex_index.
inline Address address_at(std::size_t index) {
  if (index < 3) return {0, 0, static_cast<int>(index)};
  const std::size_t j = index - 3;
  int level = 1;
  while (j >= (std::size_t{1} << (level + 1)) - 2) ++level;
  return {level, static_cast<std::uint64_t>(j - ((std::size_t{1} << level) - 2)), 0};
}

/// Vertex indices of the cell K_w (corners 0, 1, 2) for w in W_level.
inline std::array<std::size_t, 3> cell_vertices(int level, std::uint64_t word) {
  std::array<std::size_t, 3> out{};
  for (int c = 0; c < 3; ++c) out[c] = vertex_index(canonicalize({level, word, c}));
  return out;
}

} // namespace hata

#endif // HATA_ADDRESS_HPP
