#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "perciso/lattice.hpp"
#include "perciso/rng.hpp"

using namespace perciso;

TEST_CASE("direction cycle and reversal") {
  CHECK(ccw_next(Direction::E) == Direction::N);
  CHECK(ccw_next(Direction::N) == Direction::W);
  CHECK(ccw_next(Direction::W) == Direction::S);
  CHECK(ccw_next(Direction::S) == Direction::E);
  for (Direction d : all_directions) {
    CHECK(index_of(reverse(d)) == (index_of(d) + 2) % 4);
    CHECK(reverse(reverse(d)) == d);
    CHECK(cw_next(ccw_next(d)) == d);
  }
}

TEST_CASE("directed edge basics") {
  DirectedEdge e{{2, -1}, Direction::N};
  CHECK(e.head() == Site{2, 0});
  CHECK(adjacent(e.from, e.head()));
  CHECK(e.reversed().reversed() == e);
  CHECK(key_of(e) == key_of(e.reversed()));
  CHECK(key_of(e).origin == Site{2, -1});
  CHECK(key_of(DirectedEdge{{0, 0}, Direction::W}).origin == Site{-1, 0});
}

TEST_CASE("right_boundary_dirs on the stated examples") {
  auto as_vec = [](BoundaryDirs b) {
    return std::vector<Direction>(b.begin(), b.end());
  };
  CHECK(as_vec(right_boundary_dirs(Direction::W, Direction::E)) ==
        std::vector<Direction>{Direction::S});
  CHECK(as_vec(right_boundary_dirs(Direction::W, Direction::S)).empty());
  CHECK(as_vec(right_boundary_dirs(Direction::W, Direction::W)) ==
        std::vector<Direction>{Direction::S, Direction::E, Direction::N});
}

TEST_CASE("right_boundary_dirs counting identity") {
  for (Direction back : all_directions) {
    for (Direction fwd : all_directions) {
      auto b = right_boundary_dirs(back, fwd);
      int expect = ((index_of(fwd) - index_of(back) - 1) % 4 + 4) % 4;
      CHECK(b.count == expect);
      // concatenating the interval with fwd and rotating reproduces the
      // CCW cycle minus {back}
      std::vector<Direction> seq(b.begin(), b.end());
      seq.push_back(fwd);
      Direction d = back;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        d = ccw_next(d);
        if (i + 1 < seq.size()) CHECK(seq[i] == d);
      }
    }
  }
}

TEST_CASE("dual orientation and involution") {
  DirectedEdge east{{0, 0}, Direction::E};
  DualEdge de = dual_of(east);
  CHECK(de.crossed == EdgeKey{{0, 0}, Axis::horizontal});
  CHECK(de.dir == Direction::S);  // from the face north of e to the face south

  // dual of dual reverses, for a deterministic scatter of directed edges
  for (int i = 0; i < 1000; ++i) {
    int x = static_cast<int>(rng::uniform(7, rng::Tag::nudge, i, 0) * 41) - 20;
    int y = static_cast<int>(rng::uniform(7, rng::Tag::nudge, i, 1) * 41) - 20;
    auto d = direction_from_index(
        static_cast<int>(rng::uniform(7, rng::Tag::nudge, i, 2) * 4));
    DirectedEdge e{{x, y}, d};
    CHECK(dual_of(dual_of(e)) == e.reversed());
    CHECK(dual_of(e).crossed == dual_of(e.reversed()).crossed);
  }
}

TEST_CASE("dual lattice edge crosses its primal key") {
  for (Direction d : all_directions) {
    DirectedEdge e{{3, 5}, d};
    DualEdge de = dual_of(e);
    DirectedEdge dl = as_dual_lattice_edge(de);
    // the crossed primal edge of a dual-lattice edge, via the view used by
    // DualConfig, is recovered from face coordinates
    EdgeKey k = key_of(dl);
    Site o = k.origin;
    EdgeKey crossed = k.axis == Axis::vertical
                          ? EdgeKey{{o.x, o.y + 1}, Axis::horizontal}
                          : EdgeKey{{o.x + 1, o.y}, Axis::vertical};
    CHECK(crossed == de.crossed);
  }
}

TEST_CASE("medial successors wind clockwise around each face") {
  Face f{0, 0};
  EdgeKey bottom{{0, 0}, Axis::horizontal};
  auto [next, prev] = medial_successors(bottom, f);
  CHECK(next == EdgeKey{{0, 0}, Axis::vertical});      // left side follows bottom
  CHECK(prev == EdgeKey{{1, 0}, Axis::vertical});      // right side precedes it

  // out-degree 2 and in-degree 2: one successor and one predecessor per face
  EdgeKey k{{2, 3}, Axis::vertical};
  auto faces = faces_of(k);
  std::set<EdgeKey> outs{medial_next(k, faces[0]), medial_next(k, faces[1])};
  std::set<EdgeKey> ins{medial_prev(k, faces[0]), medial_prev(k, faces[1])};
  CHECK(outs.size() == 2);
  CHECK(ins.size() == 2);

  // following successors around one face returns to the start after 4 steps
  EdgeKey cur = bottom;
  for (int i = 0; i < 4; ++i) cur = medial_next(cur, f);
  CHECK(cur == bottom);

  CHECK_THROWS_AS(medial_next(bottom, Face{5, 5}), DomainError);
}
