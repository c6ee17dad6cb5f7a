#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "perciso/errors.hpp"
#include "perciso/lattice.hpp"
#include "perciso/paths.hpp"
#include "perciso/percolation.hpp"

// Solvers for the right-boundary distance b(x,y) and its modified version
// bhat(x,y).
//
// Both costs decompose over the steps of a path: each interior pivot
// contributes the qualifying right-boundary edges between its incoming and
// outgoing direction, and (for bhat) each traversed closed edge contributes
// h(|y-x|).  A label-correcting search over states = directed edges therefore
// minimizes the decomposed cost over all directed-edge-simple paths, a
// superset of the right-most ones, so its value is a certified lower bound.
// When the reconstructed witness happens to be right-most (and open, for b)
// the bound is attained and the instance is solved exactly; otherwise an
// exhaustive branch-and-bound search over right-most paths finishes the job,
// using the relaxation as an admissible heuristic.

namespace perciso {

struct DistanceResult {
  enum class Status { exact_oracle, search_validated, search_fallback };
  double value = 0.0;
  LatticePath witness;
  Status status = Status::search_validated;
  double lower_bound = 0.0;
};

namespace detail {

struct StateGraph {
  const Configuration* cfg;
  int n;      // box radius
  int side;   // 2n+1
  long nsites;

  explicit StateGraph(const Configuration& c)
      : cfg(&c), n(c.radius()), side(2 * c.radius() + 1),
        nsites(static_cast<long>(side) * side) {}

  long site_idx(Site s) const {
    return static_cast<long>(s.y + n) * side + (s.x + n);
  }
  long state_of(DirectedEdge e) const {
    return 4 * site_idx(e.from) + index_of(e.dir);
  }
  DirectedEdge edge_of(long state) const {
    long si = state / 4;
    Site from{static_cast<int>(si % side) - n, static_cast<int>(si / side) - n};
    return {from, direction_from_index(static_cast<int>(state % 4))};
  }
  long count() const { return 4 * nsites; }

  bool usable(DirectedEdge e, bool open_only) const {
    if (!cfg->in_box(e.from) || !cfg->in_box(e.head())) return false;
    return !open_only || cfg->open(e);
  }

  // Pivot cost at the head of `in` when continuing with direction `out`.
  double pivot_cost(DirectedEdge in, Direction out) const {
    Site pivot = in.head();
    double c = 0.0;
    for (Direction d : right_boundary_dirs(reverse(in.dir), out))
      if (cfg->open(DirectedEdge{pivot, d})) c += 1.0;
    return c;
  }

  double entry_cost(DirectedEdge e, bool modified, double h) const {
    return (modified && !cfg->open(e)) ? h : 0.0;
  }
};

struct RelaxResult {
  std::vector<double> dist;
  std::vector<long> parent;  // predecessor state, -1 at sources
};

// Dijkstra from x over directed-edge states.  `modified` selects bhat costs.
inline RelaxResult relax_from(const StateGraph& g, Site x, bool modified,
                              double h, bool open_only) {
  RelaxResult r;
  r.dist.assign(static_cast<std::size_t>(g.count()),
                std::numeric_limits<double>::infinity());
  r.parent.assign(static_cast<std::size_t>(g.count()), -1);
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Direction d : all_directions) {
    DirectedEdge e{x, d};
    if (!g.usable(e, open_only)) continue;
    long s = g.state_of(e);
    double c = g.entry_cost(e, modified, h);
    if (c < r.dist[static_cast<std::size_t>(s)]) {
      r.dist[static_cast<std::size_t>(s)] = c;
      pq.push({c, s});
    }
  }
  while (!pq.empty()) {
    auto [dc, s] = pq.top();
    pq.pop();
    if (dc > r.dist[static_cast<std::size_t>(s)]) continue;
    DirectedEdge in = g.edge_of(s);
    Site pivot = in.head();
    for (Direction out : all_directions) {
      DirectedEdge nxt{pivot, out};
      if (!g.usable(nxt, open_only)) continue;
      double c = dc + g.pivot_cost(in, out) + g.entry_cost(nxt, modified, h);
      long t = g.state_of(nxt);
      if (c < r.dist[static_cast<std::size_t>(t)]) {
        r.dist[static_cast<std::size_t>(t)] = c;
        r.parent[static_cast<std::size_t>(t)] = s;
        pq.push({c, t});
      }
    }
  }
  return r;
}

// Dijkstra of remaining cost to y (reverse graph); admissible completion
// heuristic for the branch-and-bound search.
inline std::vector<double> relax_to(const StateGraph& g, Site y, bool modified,
                                    double h, bool open_only) {
  std::vector<double> dist(static_cast<std::size_t>(g.count()),
                           std::numeric_limits<double>::infinity());
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Direction d : all_directions) {
    // states whose edge heads into y terminate with no further cost
    DirectedEdge e{y + unit(d), reverse(d)};
    if (!g.usable(e, open_only)) continue;
    long s = g.state_of(e);
    dist[static_cast<std::size_t>(s)] = 0.0;
    pq.push({0.0, s});
  }
  while (!pq.empty()) {
    auto [dc, s] = pq.top();
    pq.pop();
    if (dc > dist[static_cast<std::size_t>(s)]) continue;
    DirectedEdge e = g.edge_of(s);
    // predecessors: states `prev` with head(prev) == e.from
    for (Direction din : all_directions) {
      DirectedEdge prev{e.from + unit(din), reverse(din)};
      if (!g.usable(prev, open_only)) continue;
      double c = dc + g.pivot_cost(prev, e.dir) + g.entry_cost(e, modified, h);
      long t = g.state_of(prev);
      if (c < dist[static_cast<std::size_t>(t)]) {
        dist[static_cast<std::size_t>(t)] = c;
        pq.push({c, t});
      }
    }
  }
  return dist;
}

inline LatticePath reconstruct(const StateGraph& g, const RelaxResult& r,
                               long state) {
  std::vector<Site> rev;
  long s = state;
  rev.push_back(g.edge_of(s).head());
  while (s >= 0) {
    rev.push_back(g.edge_of(s).from);
    s = r.parent[static_cast<std::size_t>(s)];
  }
  LatticePath p;
  p.v.assign(rev.rbegin(), rev.rend());
  return p;
}

// Shortest path from x to y by BFS; vertex-simple, hence right-most.  With
// open_only it walks open edges only (empty result when disconnected).
inline LatticePath bfs_path(const Configuration& cfg, Site x, Site y,
                            bool open_only) {
  LatticePath out;
  if (x == y) {
    out.v.push_back(x);
    return out;
  }
  const long nsites = cfg.site_count();
  std::vector<long> prev(static_cast<std::size_t>(nsites), -2);
  std::deque<Site> queue;
  prev[static_cast<std::size_t>(cfg.site_index(x))] = -1;
  queue.push_back(x);
  while (!queue.empty()) {
    Site s = queue.front();
    queue.pop_front();
    for (Direction dir : all_directions) {
      DirectedEdge e{s, dir};
      if (!cfg.in_box(e.head())) continue;
      if (open_only && !cfg.open(e)) continue;
      Site t = e.head();
      auto& pt = prev[static_cast<std::size_t>(cfg.site_index(t))];
      if (pt != -2) continue;
      pt = cfg.site_index(s);
      if (t == y) {
        std::vector<Site> rev{t};
        long cur = cfg.site_index(s);
        while (cur >= 0) {
          rev.push_back(cfg.site_at(cur));
          cur = prev[static_cast<std::size_t>(cur)];
        }
        out.v.assign(rev.rbegin(), rev.rend());
        return out;
      }
      queue.push_back(t);
    }
  }
  return out;  // empty: not connected
}

struct BBOptions {
  bool modified = false;
  double h = 1.0;
  bool open_only = true;
  std::uint64_t budget = 30'000'000;
};

struct BBResult {
  double best = std::numeric_limits<double>::infinity();
  LatticePath witness;
  bool exhausted = false;  // completed without hitting the budget
};

// Exhaustive minimum of the (possibly modified) right-boundary cost over
// right-most paths from x to y, pruned by cost monotonicity plus the
// admissible completion heuristic.
inline BBResult branch_and_bound(const StateGraph& g, Site x, Site y,
                                 const BBOptions& opt, double upper_hint,
                                 const LatticePath* hint_witness) {
  std::vector<double> to_y = relax_to(g, y, opt.modified, opt.h, opt.open_only);
  BBResult res;
  if (hint_witness) {
    res.best = upper_hint;
    res.witness = *hint_witness;
  }
  EnumerateOptions wopt;
  wopt.cfg = g.cfg;
  wopt.open_only = opt.open_only;
  RightmostWalker walker(x, wopt);
  std::uint64_t work = 0;
  bool out_of_budget = false;

  auto heuristic = [&](DirectedEdge e) {
    double hv = to_y[static_cast<std::size_t>(g.state_of(e))];
    return hv;
  };

  std::function<void(double)> dfs = [&](double gcost) {
    if (out_of_budget) return;
    if (++work > opt.budget) {
      out_of_budget = true;
      return;
    }
    const LatticePath& p = walker.path();
    Site cur = p.v.back();
    if (cur == y && !(p.v.size() > 1 && p.circuit() && !is_rightmost(p))) {
      if (gcost < res.best) {
        res.best = gcost;
        res.witness = p;
      }
    }
    for (Direction d : all_directions) {
      DirectedEdge e{cur, d};
      if (!g.usable(e, opt.open_only)) continue;
      if (!walker.can_extend(d)) continue;
      double step = g.entry_cost(e, opt.modified, opt.h);
      if (p.v.size() >= 2) {
        DirectedEdge in{p.v[p.v.size() - 2],
                        direction_between(p.v[p.v.size() - 2], cur)};
        step += g.pivot_cost(in, d);
      }
      double f = gcost + step + heuristic(e);
      if (f >= res.best) continue;  // cannot strictly improve
      walker.push(d);
      dfs(gcost + step);
      walker.pop();
    }
  };
  dfs(0.0);
  res.exhausted = !out_of_budget;
  if (out_of_budget && res.best == std::numeric_limits<double>::infinity())
    throw BudgetError("branch_and_bound: budget exhausted before any witness");
  return res;
}

}  // namespace detail

struct SolveOptions {
  std::uint64_t fallback_budget = 30'000'000;
};

inline DistanceResult solve_b(Site x, Site y, const ClusterLabeling& lab,
                              const SolveOptions& opt = {}) {
  const Configuration& cfg = lab.config();
  if (!cfg.in_box(x) || !cfg.in_box(y))
    throw DomainError("solve_b: endpoint outside box");
  if (lab.label(x) != lab.label(y))
    throw DisconnectedError("solve_b: endpoints not connected");
  if (x == y)
    return {0.0, LatticePath{{x}}, DistanceResult::Status::search_validated, 0.0};

  detail::StateGraph g(cfg);
  auto relax = detail::relax_from(g, x, /*modified=*/false, 1.0,
                                  /*open_only=*/true);
  double lb = std::numeric_limits<double>::infinity();
  long best_state = -1;
  for (Direction d : all_directions) {
    DirectedEdge e{y + unit(d), reverse(d)};
    if (!g.usable(e, true)) continue;
    long s = g.state_of(e);
    if (relax.dist[static_cast<std::size_t>(s)] < lb) {
      lb = relax.dist[static_cast<std::size_t>(s)];
      best_state = s;
    }
  }
  if (best_state < 0)
    throw DisconnectedError("solve_b: no open route inside the box");

  LatticePath witness = detail::reconstruct(g, relax, best_state);
  if (is_rightmost(witness) && is_open(witness, cfg)) {
    PathCosts c = path_costs(witness, cfg);
    if (static_cast<double>(c.b) == lb)
      return {lb, witness, DistanceResult::Status::search_validated, lb};
  }
  detail::BBOptions bb;
  bb.open_only = true;
  bb.budget = opt.fallback_budget;
  LatticePath seed = detail::bfs_path(cfg, x, y, true);
  double seed_cost = static_cast<double>(path_costs(seed, cfg).b);
  auto res = detail::branch_and_bound(g, x, y, bb, seed_cost, &seed);
  auto status = (res.exhausted || res.best == lb)
                    ? DistanceResult::Status::exact_oracle
                    : DistanceResult::Status::search_fallback;
  return {res.best, res.witness, status, lb};
}

inline DistanceResult solve_bhat(Site x, Site y, const Configuration& cfg,
                                 const SolveOptions& opt = {}) {
  if (!cfg.in_box(x) || !cfg.in_box(y))
    throw DomainError("solve_bhat: endpoint outside box");
  if (x == y)
    return {0.0, LatticePath{{x}}, DistanceResult::Status::search_validated, 0.0};
  const double h = h_penalty(static_cast<double>(linf(y - x)));

  detail::StateGraph g(cfg);
  auto relax = detail::relax_from(g, x, /*modified=*/true, h, /*open_only=*/false);
  double lb = std::numeric_limits<double>::infinity();
  long best_state = -1;
  for (Direction d : all_directions) {
    DirectedEdge e{y + unit(d), reverse(d)};
    if (!g.usable(e, false)) continue;
    long s = g.state_of(e);
    if (relax.dist[static_cast<std::size_t>(s)] < lb) {
      lb = relax.dist[static_cast<std::size_t>(s)];
      best_state = s;
    }
  }
  if (best_state < 0) throw DomainError("solve_bhat: endpoints outside the box graph");

  LatticePath witness = detail::reconstruct(g, relax, best_state);
  if (is_rightmost(witness)) {
    PathCosts c = path_costs(witness, cfg);
    if (std::abs(c.bhat - lb) <= 1e-9 * std::max(1.0, lb))
      return {lb, witness, DistanceResult::Status::search_validated, lb};
  }
  detail::BBOptions bb;
  bb.modified = true;
  bb.h = h;
  bb.open_only = false;
  bb.budget = opt.fallback_budget;
  LatticePath seed = detail::bfs_path(cfg, x, y, false);
  double seed_cost = path_costs(seed, cfg).bhat;
  auto res = detail::branch_and_bound(g, x, y, bb, seed_cost, &seed);
  auto status = (res.exhausted || std::abs(res.best - lb) <= 1e-9)
                    ? DistanceResult::Status::exact_oracle
                    : DistanceResult::Status::search_fallback;
  return {res.best, res.witness, status, lb};
}

// --- epsilon-optimal paths and geodesic geometry ----------------------------

struct EpsilonOptimalReport {
  LatticePath best;                // absolute minimizer found by solve_b
  LatticePath concatenated;        // segment-subdivision construction
  double b_value = 0.0;            // b([x],[y])
  double concat_cost = 0.0;        // frak-b of the concatenated path
  double epsilon = 0.0;
  bool concat_is_eps_optimal = false;
  double dh_best = 0.0;            // d_H(gamma, poly(x,y))
  double dh_concat = 0.0;
  double dh_best_normalized = 0.0; // divided by |y-x|_inf
  double dh_concat_normalized = 0.0;
};

namespace detail {

inline double dh_path_to_segment(const LatticePath& p, Site x, Site y) {
  // l_inf Hausdorff between the path (sampled at half-steps) and poly(x,y)
  auto sample_path = [&] {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < p.v.size(); ++i) {
      pts.push_back({static_cast<double>(p.v[i].x), static_cast<double>(p.v[i].y)});
      if (i + 1 < p.v.size())
        pts.push_back({(p.v[i].x + p.v[i + 1].x) / 2.0,
                       (p.v[i].y + p.v[i + 1].y) / 2.0});
    }
    return pts;
  };
  auto sample_segment = [&] {
    std::vector<std::pair<double, double>> pts;
    int steps = std::max(2, 2 * linf(y - x));
    for (int i = 0; i <= steps; ++i) {
      double t = static_cast<double>(i) / steps;
      pts.push_back({x.x + t * (y.x - x.x), x.y + t * (y.y - x.y)});
    }
    return pts;
  };
  auto A = sample_path();
  auto B = sample_segment();
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& a : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : to)
        best = std::min(best, std::max(std::abs(a.first - b.first),
                                       std::abs(a.second - b.second)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

}  // namespace detail

// Returns the optimal witness between the anchored endpoints together with the
// concatenation of per-segment optimal paths over a subdivision of poly(x,y),
// and the measured Hausdorff geometry of both.
inline EpsilonOptimalReport epsilon_optimal(Site x, Site y, double eps,
                                            const ClusterLabeling& lab,
                                            const SolveOptions& opt = {}) {
  if (eps < 0) throw DomainError("epsilon_optimal: eps must be >= 0");
  AnchorResult ax = anchor(x, lab);
  AnchorResult ay = anchor(y, lab);
  EpsilonOptimalReport rep;
  rep.epsilon = eps;
  auto direct = solve_b(ax.anchor, ay.anchor, lab, opt);
  rep.best = direct.witness;
  rep.b_value = direct.value;

  int segments = eps > 0 ? std::max(1, static_cast<int>(std::ceil(1.0 / eps))) : 1;
  LatticePath concat{{ax.anchor}};
  Site prev = ax.anchor;
  for (int k = 1; k <= segments; ++k) {
    double t = static_cast<double>(k) / segments;
    double ux = x.x + t * (y.x - x.x);
    double uy = x.y + t * (y.y - x.y);
    Site target = (k == segments) ? ay.anchor : anchor(ux, uy, lab).anchor;
    auto leg = solve_b(prev, target, lab, opt);
    concat = star_concat(concat, leg.witness);
    prev = target;
  }
  if (!is_rightmost(concat))
    throw DomainError("epsilon_optimal: concatenation failed to stay right-most");
  rep.concatenated = concat;
  rep.concat_cost = static_cast<double>(path_costs(concat, lab.config()).b);

  double dist = static_cast<double>(linf(y - x));
  rep.concat_is_eps_optimal = rep.concat_cost - rep.b_value <= eps * dist;
  rep.dh_best = detail::dh_path_to_segment(rep.best, x, y);
  rep.dh_concat = detail::dh_path_to_segment(rep.concatenated, x, y);
  if (dist > 0) {
    rep.dh_best_normalized = rep.dh_best / dist;
    rep.dh_concat_normalized = rep.dh_concat / dist;
  }
  return rep;
}

}  // namespace perciso
