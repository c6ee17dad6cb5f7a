#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "perciso/errors.hpp"
#include "perciso/lattice.hpp"
#include "perciso/percolation.hpp"

// Right-most paths, their right boundaries and the interface bijection.
//
// A path is a vertex sequence with consecutive sites adjacent.  It is a
// circuit when first == last and it has at least one edge; circuits take
// indices modulo the length, so every vertex is interior.  A path is
// right-most when it is directed-edge-simple and never traverses an edge of
// its own right boundary (in either orientation).

namespace perciso {

struct LatticePath {
  std::vector<Site> v;

  bool circuit() const { return v.size() > 1 && v.front() == v.back(); }
  int length() const { return static_cast<int>(v.size()) - 1; }
  Site start() const { return v.front(); }
  Site end() const { return v.back(); }

  friend bool operator==(const LatticePath&, const LatticePath&) = default;
};

inline void validate_path(const LatticePath& p) {
  if (p.v.empty()) throw DomainError("path: empty vertex sequence");
  for (std::size_t i = 1; i < p.v.size(); ++i)
    if (!adjacent(p.v[i - 1], p.v[i]))
      throw DomainError("path: consecutive vertices not adjacent");
}

inline std::vector<DirectedEdge> edges_of(const LatticePath& p) {
  std::vector<DirectedEdge> out;
  out.reserve(p.v.size());
  for (std::size_t i = 1; i < p.v.size(); ++i)
    out.push_back({p.v[i - 1], direction_between(p.v[i - 1], p.v[i])});
  return out;
}

// Right-boundary edges in traversal order, with multiplicity: an edge present
// in both orientations appears twice.  Entries are oriented away from their
// pivot vertex.
struct RightBoundary {
  std::vector<DirectedEdge> edges;
  long size() const { return static_cast<long>(edges.size()); }
};

namespace detail {

// Calls fn(pivot, back, fwd) for every boundary-contributing vertex.
template <class F>
void for_each_pivot(const LatticePath& p, F&& fn) {
  const auto& v = p.v;
  if (v.size() < 2) return;
  const std::size_t m = v.size() - 1;  // edge count
  if (p.circuit()) {
    for (std::size_t i = 1; i <= m; ++i) {
      Site prev = v[i - 1];
      Site next = (i == m) ? v[1] : v[i + 1];
      fn(v[i], direction_between(v[i], prev), direction_between(v[i], next));
    }
  } else {
    for (std::size_t i = 1; i < m; ++i)
      fn(v[i], direction_between(v[i], v[i - 1]),
         direction_between(v[i], v[i + 1]));
  }
}

}  // namespace detail

inline RightBoundary right_boundary(const LatticePath& p) {
  validate_path(p);
  RightBoundary rb;
  detail::for_each_pivot(p, [&](Site pivot, Direction back, Direction fwd) {
    for (Direction d : right_boundary_dirs(back, fwd))
      rb.edges.push_back({pivot, d});
  });
  return rb;
}

inline bool is_rightmost(const LatticePath& p) {
  if (p.v.empty()) return false;
  for (std::size_t i = 1; i < p.v.size(); ++i)
    if (!adjacent(p.v[i - 1], p.v[i])) return false;
  std::unordered_set<DirectedEdge> used;
  std::unordered_set<EdgeKey> traversed;
  for (DirectedEdge e : edges_of(p)) {
    if (!used.insert(e).second) return false;  // not directed-edge-simple
    traversed.insert(key_of(e));
  }
  for (DirectedEdge b : right_boundary(p).edges)
    if (traversed.contains(key_of(b))) return false;
  return true;
}

// Penalty weight for closed traversed edges: h(t) = max{log^4 t, 1}.
inline double h_penalty(double t) {
  if (t <= std::numbers::e) return 1.0;
  double l = std::log(t);
  return l * l * l * l;
}

struct PathCosts {
  long b = 0;        // open right-boundary edges, orientation-distinct
  long pclosed = 0;  // closed traversed edges, orientation-distinct
  double bhat = 0.0; // b + h(|end - start|_inf) * pclosed
};

inline PathCosts path_costs(const LatticePath& p, const Configuration& cfg) {
  if (!is_rightmost(p)) throw DomainError("path_costs: path is not right-most");
  PathCosts c;
  for (DirectedEdge b : right_boundary(p).edges)
    if (cfg.open(b)) ++c.b;
  for (DirectedEdge e : edges_of(p))
    if (!cfg.open(e)) ++c.pclosed;
  c.bhat = static_cast<double>(c.b) +
           h_penalty(static_cast<double>(linf(p.end() - p.start()))) *
               static_cast<double>(c.pclosed);
  return c;
}

inline bool is_open(const LatticePath& p, const Configuration& cfg) {
  for (DirectedEdge e : edges_of(p))
    if (!cfg.open(e)) return false;
  return true;
}

// --- interfaces -------------------------------------------------------------

// Walk on the medial graph associated with a right-most path: it reflects on
// the traversed edges and cuts through the right-boundary edges.  Reflect
// visits carry the traversal orientation; cut visits point away from their
// pivot (left-to-right as the interface sweeps by).
struct Interface {
  struct Visit {
    EdgeKey key;
    DirectedEdge oriented;
    bool cut = false;
    friend bool operator==(const Visit&, const Visit&) = default;
  };
  std::vector<Visit> visits;
  bool cyclic = false;

  friend bool operator==(const Interface&, const Interface&) = default;
};

inline Interface to_interface(const LatticePath& p) {
  if (!is_rightmost(p)) throw DomainError("to_interface: path is not right-most");
  Interface out;
  out.cyclic = p.circuit();
  auto edges = edges_of(p);
  if (edges.empty()) return out;  // single vertex: empty interface
  auto reflect = [&](DirectedEdge e) {
    out.visits.push_back({key_of(e), e, false});
  };
  auto cuts_at = [&](Site pivot, Direction back, Direction fwd) {
    for (Direction d : right_boundary_dirs(back, fwd)) {
      DirectedEdge e{pivot, d};
      out.visits.push_back({key_of(e), e, true});
    }
  };
  const auto& v = p.v;
  const std::size_t m = edges.size();
  reflect(edges[0]);
  for (std::size_t i = 1; i < m; ++i) {
    cuts_at(v[i], direction_between(v[i], v[i - 1]),
            direction_between(v[i], v[i + 1]));
    reflect(edges[i]);
  }
  if (out.cyclic)
    cuts_at(v[m], direction_between(v[m], v[m - 1]),
            direction_between(v[0], v[1]));
  return out;
}

// Inverse of to_interface.  A cyclic interface may start anywhere along the
// cycle; it is first rotated so that it begins with a reflect visit.
inline LatticePath from_interface(const Interface& in) {
  Interface work = in;
  if (work.visits.empty())
    throw DomainError("from_interface: empty interface has no base path");
  if (work.cyclic) {
    std::size_t first_reflect = work.visits.size();
    for (std::size_t i = 0; i < work.visits.size(); ++i)
      if (!work.visits[i].cut) {
        first_reflect = i;
        break;
      }
    if (first_reflect == work.visits.size())
      throw DomainError("from_interface: cyclic interface with no reflect visit");
    std::rotate(work.visits.begin(), work.visits.begin() + first_reflect,
                work.visits.end());
  }

  LatticePath p;
  bool have_start = false;
  for (const auto& vis : work.visits) {
    if (vis.cut) continue;
    if (!have_start) {
      p.v.push_back(vis.oriented.from);
      have_start = true;
    } else if (p.v.back() != vis.oriented.from) {
      throw DomainError("from_interface: reflected edges do not chain");
    }
    p.v.push_back(vis.oriented.head());
  }
  if (!have_start)
    throw DomainError("from_interface: interface reflects on no edge");
  if (!is_rightmost(p))
    throw DomainError("from_interface: reflected edges are not a right-most path");
  Interface check = to_interface(p);
  if (!(check == work))
    throw DomainError("from_interface: visits inconsistent with reconstructed path");
  return p;
}

// Dual right-most path: the duals of the right-boundary edges, traversed by
// the reversed interface, chain into a right-most path on the dual lattice
// (face coordinates).
inline LatticePath dual_path(const LatticePath& p) {
  if (!is_rightmost(p)) throw DomainError("dual_path: path is not right-most");
  RightBoundary rb = right_boundary(p);
  LatticePath out;
  if (rb.edges.empty()) {
    if (p.v.size() < 2) throw DomainError("dual_path: trivial path has no dual");
    // no boundary at all (e.g. a two-vertex path): dual is a single dual site
    DualEdge d = dual_of(DirectedEdge{p.v[0], direction_between(p.v[0], p.v[1])});
    out.v.push_back(as_dual_lattice_edge(d).from);
    return out;
  }
  for (auto it = rb.edges.rbegin(); it != rb.edges.rend(); ++it) {
    DirectedEdge de = as_dual_lattice_edge(dual_of(*it));
    if (out.v.empty())
      out.v.push_back(de.from);
    else if (out.v.back() != de.from)
      throw DomainError("dual_path: boundary duals do not chain");
    out.v.push_back(de.head());
  }
  return out;
}

// *-concatenation: follow the first path until it first meets the second,
// then follow the second from the last occurrence of the meeting vertex.
inline LatticePath star_concat(const LatticePath& a, const LatticePath& b) {
  validate_path(a);
  validate_path(b);
  if (a.end() != b.start())
    throw DomainError("star_concat: first path must end where second starts");
  if (a.start() == b.end()) return LatticePath{{a.start()}};
  std::unordered_map<Site, std::size_t> last_in_b;
  for (std::size_t j = 0; j < b.v.size(); ++j) last_in_b[b.v[j]] = j;
  std::size_t k = 0;
  while (k < a.v.size() && !last_in_b.contains(a.v[k])) ++k;
  // k exists: a.end() == b.start()
  std::size_t l = last_in_b.at(a.v[k]);
  LatticePath out;
  out.v.assign(a.v.begin(), a.v.begin() + static_cast<long>(k) + 1);
  out.v.insert(out.v.end(), b.v.begin() + static_cast<long>(l) + 1, b.v.end());
  return out;
}

// --- exhaustive enumeration -------------------------------------------------

struct EnumerateOptions {
  int maxlen = 0;
  std::uint64_t budget = 50'000'000;  // DFS expansions; hard error beyond
  const Configuration* cfg = nullptr;
  bool open_only = false;
  std::optional<int> box_radius;  // confine vertices to B_inf(r)
};

namespace detail {

class RightmostWalker {
 public:
  RightmostWalker(Site x, const EnumerateOptions& opt) : opt_(opt) {
    path_.v.push_back(x);
  }

  const LatticePath& path() const { return path_; }

  bool can_extend(Direction d) const {
    Site v = path_.v.back();
    DirectedEdge e{v, d};
    Site w = e.head();
    if (opt_.box_radius && linf(w) > *opt_.box_radius) return false;
    if (opt_.cfg) {
      if (!opt_.cfg->in_box(w)) return false;
      if (opt_.open_only && !opt_.cfg->open(e)) return false;
    }
    if (used_.contains(e)) return false;
    EdgeKey nk = key_of(e);
    if (boundary_.contains(nk) && boundary_.at(nk) > 0) return false;
    if (path_.v.size() >= 2) {
      Site u = path_.v[path_.v.size() - 2];
      for (Direction bd : right_boundary_dirs(direction_between(v, u), d)) {
        EdgeKey bk = key_of(DirectedEdge{v, bd});
        if (traversed_.contains(bk) && traversed_.at(bk) > 0) return false;
      }
    }
    return true;
  }

  void push(Direction d) {
    Site v = path_.v.back();
    DirectedEdge e{v, d};
    frame_marks_.push_back(static_cast<long>(frames_.size()));
    if (path_.v.size() >= 2) {
      Site u = path_.v[path_.v.size() - 2];
      for (Direction bd : right_boundary_dirs(direction_between(v, u), d)) {
        EdgeKey bk = key_of(DirectedEdge{v, bd});
        ++boundary_[bk];
        frames_.push_back(bk);
      }
    }
    used_.insert(e);
    ++traversed_[key_of(e)];
    path_.v.push_back(e.head());
  }

  void pop() {
    Site w = path_.v.back();
    path_.v.pop_back();
    Site v = path_.v.back();
    DirectedEdge e{v, direction_between(v, w)};
    used_.erase(e);
    --traversed_[key_of(e)];
    long mark = frame_marks_.back();
    frame_marks_.pop_back();
    while (static_cast<long>(frames_.size()) > mark) {
      --boundary_[frames_.back()];
      frames_.pop_back();
    }
  }

 private:
  EnumerateOptions opt_;
  LatticePath path_;
  std::unordered_set<DirectedEdge> used_;
  std::unordered_map<EdgeKey, int> traversed_;
  std::unordered_map<EdgeKey, int> boundary_;
  std::vector<EdgeKey> frames_;
  std::vector<long> frame_marks_;
};

}  // namespace detail

// Yields every right-most path (open, if requested) from x to y of length at
// most opt.maxlen, each exactly once.  The DFS keeps the open-path
// right-mostness invariants incrementally; emitted circuits get the full
// wrap-around validation.
inline void enumerate_rightmost(Site x, Site y, const EnumerateOptions& opt,
                                const std::function<void(const LatticePath&)>& sink) {
  std::uint64_t work = 0;
  detail::RightmostWalker walker(x, opt);
  auto emit_if_valid = [&](const LatticePath& p) {
    if (p.circuit()) {
      if (!is_rightmost(p)) return;
      if (opt.open_only && opt.cfg && !is_open(p, *opt.cfg)) return;
    }
    sink(p);
  };
  std::function<void()> dfs = [&]() {
    if (++work > opt.budget)
      throw BudgetError("enumerate_rightmost: work budget exceeded");
    const LatticePath& p = walker.path();
    if (p.v.back() == y) emit_if_valid(p);
    if (p.length() >= opt.maxlen) return;
    for (Direction d : all_directions) {
      if (!walker.can_extend(d)) continue;
      walker.push(d);
      dfs();
      walker.pop();
    }
  };
  dfs();
}

inline std::vector<LatticePath> enumerate_rightmost(Site x, Site y,
                                                    const EnumerateOptions& opt) {
  std::vector<LatticePath> out;
  enumerate_rightmost(x, y, opt, [&](const LatticePath& p) { out.push_back(p); });
  return out;
}

}  // namespace perciso
