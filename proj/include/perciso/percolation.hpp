#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "perciso/errors.hpp"
#include "perciso/lattice.hpp"
#include "perciso/rng.hpp"

namespace perciso {

// Safe-region margin for a box of radius n: ceil(log^2 n), natural log.
inline int margin_for(int radius) {
  if (radius <= 1) return 1;
  double l = std::log(static_cast<double>(radius));
  return static_cast<int>(std::ceil(l * l));
}

// Bernoulli(p) edge-occupation field on the box B_inf(radius).  Every edge
// with both endpoints in the box carries one bit, derived from one uniform per
// edge keyed by (seed, edge), so the same seed couples all p monotonically.
class Configuration {
 public:
  Configuration(double p, int radius, std::uint64_t seed)
      : Configuration(p, radius, seed, sample_bits(p, radius, seed)) {}

  static Configuration from_bits(double p, int radius, std::uint64_t seed,
                                 std::vector<std::uint8_t> bits) {
    return Configuration(p, radius, seed, std::move(bits));
  }

  double p() const { return p_; }
  int radius() const { return radius_; }
  std::uint64_t seed() const { return seed_; }
  int side() const { return 2 * radius_ + 1; }
  long site_count() const { return static_cast<long>(side()) * side(); }
  long edge_count() const { return static_cast<long>(bits_.size()); }

  bool in_box(Site s) const { return linf(s) <= radius_; }

  long site_index(Site s) const {
    return static_cast<long>(s.y + radius_) * side() + (s.x + radius_);
  }

  Site site_at(long idx) const {
    return {static_cast<int>(idx % side()) - radius_,
            static_cast<int>(idx / side()) - radius_};
  }

  // -1 when either endpoint leaves the box.
  long edge_index(EdgeKey k) const {
    const int n = radius_;
    if (k.axis == Axis::horizontal) {
      if (k.origin.x < -n || k.origin.x >= n || k.origin.y < -n || k.origin.y > n)
        return -1;
      return static_cast<long>(k.origin.y + n) * (2 * n) + (k.origin.x + n);
    }
    if (k.origin.x < -n || k.origin.x > n || k.origin.y < -n || k.origin.y >= n)
      return -1;
    return horizontal_count() + static_cast<long>(k.origin.y + n) * side() +
           (k.origin.x + n);
  }

  EdgeKey edge_at(long idx) const {
    const int n = radius_;
    if (idx < horizontal_count()) {
      return {{static_cast<int>(idx % (2 * n)) - n,
               static_cast<int>(idx / (2 * n)) - n},
              Axis::horizontal};
    }
    idx -= horizontal_count();
    return {{static_cast<int>(idx % side()) - n, static_cast<int>(idx / side()) - n},
            Axis::vertical};
  }

  bool has_edge(EdgeKey k) const { return edge_index(k) >= 0; }

  // Edges outside the box read as closed; measurements respect the margin so
  // this only matters as a deterministic wall convention.
  bool open(EdgeKey k) const {
    long i = edge_index(k);
    return i >= 0 && bits_[static_cast<std::size_t>(i)] != 0;
  }
  bool open(DirectedEdge e) const { return open(key_of(e)); }

  long open_edge_count() const {
    return std::accumulate(bits_.begin(), bits_.end(), 0L,
                           [](long a, std::uint8_t b) { return a + (b != 0); });
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  double eta(Site s) const {
    return rng::uniform(seed_, rng::Tag::eta, rng::zigzag(s.x), rng::zigzag(s.y));
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.p_ == b.p_ && a.radius_ == b.radius_ && a.seed_ == b.seed_ &&
           a.bits_ == b.bits_;
  }

 private:
  Configuration(double p, int radius, std::uint64_t seed,
                std::vector<std::uint8_t> bits)
      : p_(p), radius_(radius), seed_(seed), bits_(std::move(bits)) {
    if (p < 0.0 || p > 1.0) throw DomainError("Configuration: p outside [0,1]");
    if (radius < 1) throw DomainError("Configuration: radius must be >= 1");
    if (static_cast<long>(bits_.size()) != horizontal_count() + vertical_count())
      throw DomainError("Configuration: bit count does not match box");
  }

  long horizontal_count() const {
    return static_cast<long>(2 * radius_) * side();
  }
  long vertical_count() const { return horizontal_count(); }

  static std::vector<std::uint8_t> sample_bits(double p, int radius,
                                               std::uint64_t seed) {
    if (radius < 1) throw DomainError("Configuration: radius must be >= 1");
    const long total = 2L * (2 * radius) * (2 * radius + 1);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(total));
    const int n = radius;
    long idx = 0;
    for (int y = -n; y <= n; ++y)
      for (int x = -n; x < n; ++x, ++idx)
        bits[idx] = rng::uniform(seed, rng::Tag::edge, rng::zigzag(x),
                                 rng::zigzag(y), 0) < p;
    for (int y = -n; y < n; ++y)
      for (int x = -n; x <= n; ++x, ++idx)
        bits[idx] = rng::uniform(seed, rng::Tag::edge, rng::zigzag(x),
                                 rng::zigzag(y), 1) < p;
    return bits;
  }

  double p_;
  int radius_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> bits_;
};

// View of the dual configuration: dual edge open iff the crossed primal edge
// is closed.  Dual sites live in integer face coordinates.
class DualConfig {
 public:
  explicit DualConfig(const Configuration& primal) : primal_(&primal) {}

  double p() const { return 1.0 - primal_->p(); }

  // Primal edge crossed by the dual edge with this face-coordinate key.
  static EdgeKey crossed_primal(EdgeKey dual_key) {
    const Site o = dual_key.origin;
    if (dual_key.axis == Axis::vertical) return {{o.x, o.y + 1}, Axis::horizontal};
    return {{o.x + 1, o.y}, Axis::vertical};
  }

  bool has_edge(EdgeKey dual_key) const {
    return primal_->has_edge(crossed_primal(dual_key));
  }
  bool open(EdgeKey dual_key) const {
    return has_edge(dual_key) && !primal_->open(crossed_primal(dual_key));
  }

  long open_edge_count() const {
    return primal_->edge_count() - primal_->open_edge_count();
  }

  const Configuration& primal() const { return *primal_; }

 private:
  const Configuration* primal_;
};

inline DualConfig dual_config(const Configuration& cfg) { return DualConfig(cfg); }

// Union-find labeling of the open clusters of a Configuration.  Component
// labels are the minimal site index of the component; the giant is the largest
// component, ties broken by smaller label.
class ClusterLabeling {
 public:
  explicit ClusterLabeling(const Configuration& cfg) : cfg_(&cfg) {
    build(cfg.radius());
  }

  // Labeling of the subgraph induced on B_inf(sub_radius) <= cfg.radius().
  ClusterLabeling(const Configuration& cfg, int sub_radius) : cfg_(&cfg) {
    if (sub_radius > cfg.radius())
      throw DomainError("ClusterLabeling: sub-box larger than configuration");
    build(sub_radius);
  }

  const Configuration& config() const { return *cfg_; }
  int box_radius() const { return box_radius_; }

  bool in_domain(Site s) const { return linf(s) <= box_radius_; }

  long label(Site s) const {
    if (!in_domain(s)) throw DomainError("ClusterLabeling: site outside box");
    return labels_[static_cast<std::size_t>(local_index(s))];
  }

  long component_size(long lbl) const {
    auto it = std::lower_bound(sizes_.begin(), sizes_.end(), lbl,
                               [](const auto& a, long b) { return a.first < b; });
    if (it == sizes_.end() || it->first != lbl)
      throw DomainError("ClusterLabeling: unknown label");
    return it->second;
  }

  long giant_label() const { return giant_label_; }
  long giant_size() const { return giant_size_; }
  bool in_giant(Site s) const { return in_domain(s) && label(s) == giant_label_; }

  std::vector<Site> component_sites(long lbl) const {
    std::vector<Site> out;
    for (long i = 0; i < static_cast<long>(labels_.size()); ++i)
      if (labels_[static_cast<std::size_t>(i)] == lbl) out.push_back(site_of(i));
    return out;
  }

  double eta(Site s) const { return cfg_->eta(s); }

 private:
  long local_index(Site s) const {
    const int n = box_radius_;
    return static_cast<long>(s.y + n) * (2 * n + 1) + (s.x + n);
  }
  Site site_of(long idx) const {
    const int n = box_radius_;
    return {static_cast<int>(idx % (2 * n + 1)) - n,
            static_cast<int>(idx / (2 * n + 1)) - n};
  }

  void build(int n) {
    box_radius_ = n;
    const long count = static_cast<long>(2 * n + 1) * (2 * n + 1);
    std::vector<long> parent(static_cast<std::size_t>(count));
    std::iota(parent.begin(), parent.end(), 0L);
    auto find = [&](long a) {
      while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
      }
      return a;
    };
    auto unite = [&](long a, long b) {
      a = find(a);
      b = find(b);
      if (a == b) return;
      if (a < b) std::swap(a, b);  // keep the smaller index as root
      parent[static_cast<std::size_t>(a)] = b;
    };
    for (int y = -n; y <= n; ++y) {
      for (int x = -n; x <= n; ++x) {
        Site s{x, y};
        if (x < n && cfg_->open(EdgeKey{{x, y}, Axis::horizontal}))
          unite(local_index(s), local_index({x + 1, y}));
        if (y < n && cfg_->open(EdgeKey{{x, y}, Axis::vertical}))
          unite(local_index(s), local_index({x, y + 1}));
      }
    }
    labels_.resize(static_cast<std::size_t>(count));
    std::vector<std::pair<long, long>> sizes;
    for (long i = 0; i < count; ++i) {
      long root = find(i);
      labels_[static_cast<std::size_t>(i)] = root;
      auto it = std::lower_bound(sizes.begin(), sizes.end(), root,
                                 [](const auto& a, long b) { return a.first < b; });
      if (it != sizes.end() && it->first == root)
        ++it->second;
      else
        sizes.insert(it, {root, 1});
    }
    sizes_ = std::move(sizes);
    giant_label_ = -1;
    giant_size_ = 0;
    for (const auto& [lbl, sz] : sizes_) {
      if (sz > giant_size_) {  // ties keep the earlier (smaller) label
        giant_size_ = sz;
        giant_label_ = lbl;
      }
    }
  }

  const Configuration* cfg_;
  int box_radius_ = 0;
  std::vector<long> labels_;
  std::vector<std::pair<long, long>> sizes_;
  long giant_label_ = -1;
  long giant_size_ = 0;
};

inline ClusterLabeling label_clusters(const Configuration& cfg) {
  return ClusterLabeling(cfg);
}

struct AnchorResult {
  double query_x = 0.0;
  double query_y = 0.0;
  Site anchor;
  double distance = 0.0;  // l_inf from the query point
};

// Nearest proxy-cluster site to a real query point in l_inf, ties resolved by
// the minimal per-site eta.
inline AnchorResult anchor(double qx, double qy, const ClusterLabeling& lab) {
  if (lab.giant_size() <= 0) throw DomainError("anchor: empty proxy cluster");
  const int n = lab.box_radius();
  const int margin = margin_for(n);
  if (std::max(std::abs(qx), std::abs(qy)) > static_cast<double>(n - margin))
    throw MarginError("anchor: query outside safe region B_inf(n - margin)");

  const int cx = static_cast<int>(std::lround(qx));
  const int cy = static_cast<int>(std::lround(qy));
  auto dist_to = [&](Site s) {
    return std::max(std::abs(s.x - qx), std::abs(s.y - qy));
  };

  std::optional<Site> best;
  double best_dist = 0.0;
  auto consider = [&](Site s) {
    if (!lab.in_domain(s) || !lab.in_giant(s)) return;
    double d = dist_to(s);
    if (!best || d < best_dist ||
        (d == best_dist && lab.eta(s) < lab.eta(*best))) {
      best = s;
      best_dist = d;
    }
  };

  int found_radius = -1;
  for (int r = 0; r <= 2 * n + 1; ++r) {
    if (found_radius >= 0 && r > found_radius + 1) break;
    if (r == 0) {
      consider({cx, cy});
    } else {
      for (int x = cx - r; x <= cx + r; ++x) {
        consider({x, cy - r});
        consider({x, cy + r});
      }
      for (int y = cy - r + 1; y <= cy + r - 1; ++y) {
        consider({cx - r, y});
        consider({cx + r, y});
      }
    }
    if (best && found_radius < 0) found_radius = r;
  }
  if (!best) throw DomainError("anchor: proxy cluster unreachable");
  return {qx, qy, *best, best_dist};
}

inline AnchorResult anchor(Site q, const ClusterLabeling& lab) {
  return anchor(static_cast<double>(q.x), static_cast<double>(q.y), lab);
}

// Shortest open-path length; nullopt when x and y are not connected.
inline std::optional<long> chemical_distance(const Configuration& cfg, Site x,
                                             Site y) {
  if (!cfg.in_box(x) || !cfg.in_box(y))
    throw DomainError("chemical_distance: site outside box");
  if (x == y) return 0;
  std::vector<int> dist(static_cast<std::size_t>(cfg.site_count()), -1);
  std::deque<Site> queue;
  dist[static_cast<std::size_t>(cfg.site_index(x))] = 0;
  queue.push_back(x);
  while (!queue.empty()) {
    Site s = queue.front();
    queue.pop_front();
    int d = dist[static_cast<std::size_t>(cfg.site_index(s))];
    for (Direction dir : all_directions) {
      DirectedEdge e{s, dir};
      if (!cfg.in_box(e.head()) || !cfg.open(e)) continue;
      Site t = e.head();
      auto& dt = dist[static_cast<std::size_t>(cfg.site_index(t))];
      if (dt >= 0) continue;
      dt = d + 1;
      if (t == y) return dt;
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

struct AgreementResult {
  bool agree = false;
  long mismatches = 0;
};

// Lemma 5.2-style check: does the giant of B_inf(n) agree with the proxy
// cluster (giant of the full box) on B_inf(n')?
inline AgreementResult core_box_agreement(const Configuration& cfg, int n,
                                          int n_prime) {
  if (n >= cfg.radius())
    throw MarginError("core_box_agreement: need an enclosing box of radius > n");
  if (n_prime > n - margin_for(n))
    throw MarginError("core_box_agreement: n' must be <= n - ceil(log^2 n)");
  ClusterLabeling outer(cfg);
  ClusterLabeling inner(cfg, n);
  AgreementResult res;
  for (int y = -n_prime; y <= n_prime; ++y) {
    for (int x = -n_prime; x <= n_prime; ++x) {
      Site s{x, y};
      bool in_proxy = outer.in_giant(s);
      bool in_inner_giant = inner.in_giant(s);
      if (in_proxy != in_inner_giant) ++res.mismatches;
    }
  }
  res.agree = res.mismatches == 0;
  return res;
}

inline double cluster_density(const ClusterLabeling& lab,
                              std::span<const Site> region) {
  if (region.empty()) throw DomainError("cluster_density: empty region");
  long hits = 0;
  for (Site s : region)
    if (lab.in_domain(s) && lab.in_giant(s)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(region.size());
}

inline std::vector<Site> box_sites(int radius) {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x) out.push_back({x, y});
  return out;
}

// Giant density over the safe region: the finite-volume theta_p estimator.
inline double theta_hat(const ClusterLabeling& lab) {
  int r = lab.box_radius() - margin_for(lab.box_radius());
  if (r < 0) r = 0;
  auto region = box_sites(r);
  return cluster_density(lab, region);
}

}  // namespace perciso
