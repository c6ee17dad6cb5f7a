#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

#include "perciso/errors.hpp"

// Planar conventions for Z^2, its dual and its medial graph.
//
//   * Angle convention: E = 0 deg, N = 90, W = 180, S = 270; counter-clockwise
//     means increasing angle.
//   * Faces are indexed by their lower-left lattice corner.  The dual site for
//     face f sits at f + (1/2, 1/2) in the plane but is stored in integer face
//     coordinates.
//   * EdgeKey canonicalizes an unordered edge by its lexicographically smaller
//     endpoint, which for Z^2 is always the left/bottom one.

namespace perciso {

struct Site {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Site&, const Site&) = default;
  friend constexpr Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr int linf(Site s) {
  int ax = s.x < 0 ? -s.x : s.x;
  int ay = s.y < 0 ? -s.y : s.y;
  return ax > ay ? ax : ay;
}

inline constexpr int l1(Site s) {
  int ax = s.x < 0 ? -s.x : s.x;
  int ay = s.y < 0 ? -s.y : s.y;
  return ax + ay;
}

inline constexpr bool adjacent(Site a, Site b) { return l1(a - b) == 1; }

enum class Direction : std::uint8_t { E = 0, N = 1, W = 2, S = 3 };

inline constexpr std::array<Direction, 4> all_directions{
    Direction::E, Direction::N, Direction::W, Direction::S};

inline constexpr int index_of(Direction d) { return static_cast<int>(d); }

inline constexpr Direction direction_from_index(int i) {
  return static_cast<Direction>(((i % 4) + 4) % 4);
}

inline constexpr Direction ccw_next(Direction d) {
  return direction_from_index(index_of(d) + 1);
}

inline constexpr Direction cw_next(Direction d) {
  return direction_from_index(index_of(d) + 3);
}

inline constexpr Direction reverse(Direction d) {
  return direction_from_index(index_of(d) + 2);
}

inline constexpr Site unit(Direction d) {
  switch (d) {
    case Direction::E: return {1, 0};
    case Direction::N: return {0, 1};
    case Direction::W: return {-1, 0};
    case Direction::S: return {0, -1};
  }
  return {};
}

inline constexpr Direction direction_between(Site from, Site to) {
  Site d = to - from;
  if (d == Site{1, 0}) return Direction::E;
  if (d == Site{0, 1}) return Direction::N;
  if (d == Site{-1, 0}) return Direction::W;
  if (d == Site{0, -1}) return Direction::S;
  throw DomainError("direction_between: sites are not adjacent");
}

struct DirectedEdge {
  Site from;
  Direction dir = Direction::E;
  constexpr Site head() const { return from + unit(dir); }
  constexpr DirectedEdge reversed() const { return {head(), reverse(dir)}; }
  friend constexpr auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

enum class Axis : std::uint8_t { horizontal = 0, vertical = 1 };

struct EdgeKey {
  Site origin;  // left/bottom endpoint
  Axis axis = Axis::horizontal;
  constexpr Site other() const {
    return axis == Axis::horizontal ? origin + Site{1, 0} : origin + Site{0, 1};
  }
  friend constexpr auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

inline constexpr EdgeKey key_of(DirectedEdge e) {
  switch (e.dir) {
    case Direction::E: return {e.from, Axis::horizontal};
    case Direction::W: return {e.from + Site{-1, 0}, Axis::horizontal};
    case Direction::N: return {e.from, Axis::vertical};
    case Direction::S: return {e.from + Site{0, -1}, Axis::vertical};
  }
  return {};
}

inline constexpr EdgeKey key_between(Site a, Site b) {
  return key_of(DirectedEdge{a, direction_between(a, b)});
}

// Oriented dual edge, stored as the primal edge it crosses plus the plane
// direction it points in (N/S across a horizontal edge, E/W across a vertical
// one).  The orientation rule is left-face to right-face of the primal edge.
struct DualEdge {
  EdgeKey crossed;
  Direction dir = Direction::N;
  friend constexpr auto operator<=>(const DualEdge&, const DualEdge&) = default;
};

inline constexpr DualEdge dual_of(DirectedEdge e) {
  switch (e.dir) {
    case Direction::E:
      return {EdgeKey{e.from, Axis::horizontal}, Direction::S};
    case Direction::W:
      return {EdgeKey{e.from + Site{-1, 0}, Axis::horizontal}, Direction::N};
    case Direction::N:
      return {EdgeKey{e.from, Axis::vertical}, Direction::E};
    case Direction::S:
      return {EdgeKey{e.from + Site{0, -1}, Axis::vertical}, Direction::W};
  }
  return {};
}

// The same dual edge as a directed edge of the dual lattice in integer face
// coordinates (face (a,b) is the dual site at (a+1/2, b+1/2)).
inline constexpr DirectedEdge as_dual_lattice_edge(DualEdge d) {
  const Site o = d.crossed.origin;
  if (d.crossed.axis == Axis::horizontal) {
    // crossing dual edge runs vertically at x = o.x + 1/2 through y = o.y
    return d.dir == Direction::N ? DirectedEdge{{o.x, o.y - 1}, Direction::N}
                                 : DirectedEdge{{o.x, o.y}, Direction::S};
  }
  // crossing dual edge runs horizontally at y = o.y + 1/2 through x = o.x
  return d.dir == Direction::E ? DirectedEdge{{o.x - 1, o.y}, Direction::E}
                               : DirectedEdge{{o.x, o.y}, Direction::W};
}

// Dual of a dual edge, back on the primal lattice.  Composing with dual_of
// gives the reversal of the original edge.
inline constexpr DirectedEdge dual_of(DualEdge d) {
  const Site o = d.crossed.origin;
  if (d.crossed.axis == Axis::horizontal) {
    return d.dir == Direction::S ? DirectedEdge{{o.x + 1, o.y}, Direction::W}
                                 : DirectedEdge{{o.x, o.y}, Direction::E};
  }
  return d.dir == Direction::E ? DirectedEdge{{o.x, o.y + 1}, Direction::S}
                               : DirectedEdge{{o.x, o.y}, Direction::N};
}

// Directions emanating from a path vertex strictly between the edge back to
// the previous vertex and the edge on to the next one, in CCW order.  These
// are the right-boundary directions of the pivot.
struct BoundaryDirs {
  std::array<Direction, 3> dirs{};
  int count = 0;
  const Direction* begin() const { return dirs.data(); }
  const Direction* end() const { return dirs.data() + count; }
};

inline constexpr BoundaryDirs right_boundary_dirs(Direction back, Direction fwd) {
  BoundaryDirs out;
  for (int i = 1; i <= 3; ++i) {
    Direction d = direction_from_index(index_of(back) + i);
    if (d == fwd) break;
    out.dirs[out.count++] = d;
  }
  return out;
}

// --- medial graph -----------------------------------------------------------
//
// Medial vertices are the edges of Z^2; within each unit face the four of them
// form a directed 4-cycle oriented clockwise (and hence counter-clockwise
// around each lattice vertex).

using Face = Site;  // lower-left corner

inline constexpr std::array<Face, 2> faces_of(EdgeKey k) {
  if (k.axis == Axis::horizontal)
    return {Face{k.origin.x, k.origin.y}, Face{k.origin.x, k.origin.y - 1}};
  return {Face{k.origin.x, k.origin.y}, Face{k.origin.x - 1, k.origin.y}};
}

// Edges of a face in clockwise cycle order: left, top, right, bottom.
inline constexpr std::array<EdgeKey, 4> face_cycle(Face f) {
  return {EdgeKey{{f.x, f.y}, Axis::vertical},
          EdgeKey{{f.x, f.y + 1}, Axis::horizontal},
          EdgeKey{{f.x + 1, f.y}, Axis::vertical},
          EdgeKey{{f.x, f.y}, Axis::horizontal}};
}

inline constexpr bool on_face(EdgeKey k, Face f) {
  for (EdgeKey e : face_cycle(f))
    if (e == k) return true;
  return false;
}

inline constexpr EdgeKey medial_next(EdgeKey v, Face f) {
  auto cyc = face_cycle(f);
  for (int i = 0; i < 4; ++i)
    if (cyc[i] == v) return cyc[(i + 1) % 4];
  throw DomainError("medial_next: edge not incident to face");
}

inline constexpr EdgeKey medial_prev(EdgeKey v, Face f) {
  auto cyc = face_cycle(f);
  for (int i = 0; i < 4; ++i)
    if (cyc[i] == v) return cyc[(i + 3) % 4];
  throw DomainError("medial_prev: edge not incident to face");
}

// The two face-adjacent medial neighbours of v in clockwise face order:
// {successor, predecessor}.
inline constexpr std::array<EdgeKey, 2> medial_successors(EdgeKey v, Face f) {
  return {medial_next(v, f), medial_prev(v, f)};
}

// --- hashing ----------------------------------------------------------------

inline constexpr std::uint64_t code_of(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.y));
}

inline constexpr std::uint64_t code_of(EdgeKey k) {
  return code_of(k.origin) ^ (k.axis == Axis::vertical ? 0x8000000080000000ull : 0);
}

}  // namespace perciso

template <>
struct std::hash<perciso::Site> {
  std::size_t operator()(perciso::Site s) const noexcept {
    std::uint64_t h = perciso::code_of(s);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

template <>
struct std::hash<perciso::EdgeKey> {
  std::size_t operator()(perciso::EdgeKey k) const noexcept {
    std::uint64_t h = perciso::code_of(k);
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

template <>
struct std::hash<perciso::DirectedEdge> {
  std::size_t operator()(perciso::DirectedEdge e) const noexcept {
    std::uint64_t h = perciso::code_of(e.from) * 4u + perciso::index_of(e.dir);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};
