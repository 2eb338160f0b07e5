#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mrsearch/action_model.hpp"
#include "mrsearch/error.hpp"
#include "oracles.hpp"

using namespace mrsearch;

namespace {

ZonePolygon rect(double x0, double y0, double x1, double y1) {
  return ZonePolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidConfig;
}

void check_against_oracle(const GridSpec& g, const ZonePolygon& zone) {
  const auto got = cells_in_zone(g, zone);
  const auto ref = oracle::classify_by_sampling(g, zone.vertices);
  CHECK(as_set(got.center_in) == ref.center_in);
  CHECK(as_set(got.sliver) == ref.sliver);
}

}  // namespace

TEST_CASE("grid flattening is a row-major bijection") {
  GridSpec g{7, 4, 2.5, {-3.0, 10.0}};
  std::set<int> seen;
  for (int row = 0; row < g.height_cells; ++row)
    for (int col = 0; col < g.width_cells; ++col) {
      const int idx = g.index({col, row});
      CHECK(idx == row * 7 + col);
      CHECK(g.coord(idx) == CellCoord{col, row});
      CHECK(g.cell_at(g.center(idx)) == idx);
      seen.insert(idx);
    }
  CHECK(seen.size() == static_cast<std::size_t>(g.num_cells()));
  CHECK(g.cell_at({-3.0 + 17.5, 10.0 + 10.0}) == g.num_cells() - 1);
  CHECK_FALSE(g.cell_at({-3.1, 11.0}).has_value());
  CHECK_THROWS_AS((GridSpec{0, 3, 1.0, {}}.validate()), Error);
  CHECK_THROWS_AS((GridSpec{3, 3, 0.0, {}}.validate()), Error);
}

TEST_CASE("zone validation") {
  CHECK(code_of([] { ZonePolygon{{{0, 0}, {1, 0}}}.validate(); }) == ErrorCode::InvalidConfig);
  // clockwise
  CHECK(code_of([] { ZonePolygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}.validate(); }) == ErrorCode::InvalidConfig);
  // L shape
  CHECK(code_of([] { ZonePolygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}.validate(); }) ==
        ErrorCode::InvalidConfig);
  CHECK_NOTHROW(rect(0, 0, 1, 1).validate());
  CHECK(rect(0, 0, 2, 3).area() == doctest::Approx(6.0));
  CHECK(rect(0, 0, 2, 2).contains({2.0, 1.0}));
  CHECK_FALSE(rect(0, 0, 2, 2).contains({2.001, 1.0}));
}

TEST_CASE("cells in zone") {
  SUBCASE("exact cover") {
    GridSpec g{2, 2, 1.0, {}};
    const auto z = cells_in_zone(g, rect(0, 0, 2, 2));
    CHECK(z.center_in == std::vector<int>{0, 1, 2, 3});
    CHECK(z.sliver.empty());
  }
  SUBCASE("shifted strip") {
    GridSpec g{3, 2, 1.0, {}};
    const auto zone = rect(0.6, 0.0, 1.6, 2.0);
    const auto z = cells_in_zone(g, zone);
    CHECK(z.center_in == std::vector<int>{1, 4});
    CHECK(z.sliver == std::vector<int>{0, 3});
    check_against_oracle(g, zone);
  }
  SUBCASE("half-cell shift puts boundary through the centers") {
    GridSpec g{3, 2, 1.0, {}};
    const auto z = cells_in_zone(g, rect(0.5, 0.0, 2.5, 2.0));
    CHECK(z.center_in.size() == 6);
  }
  SUBCASE("triangle around one cell center") {
    GridSpec g{5, 5, 1.0, {}};
    const ZonePolygon tri{{{1.6, 1.7}, {3.4, 1.7}, {2.5, 3.3}}};
    const auto z = cells_in_zone(g, tri);
    CHECK(z.center_in == std::vector<int>{12});
    CHECK_FALSE(z.sliver.empty());
    check_against_oracle(g, tri);
  }
  SUBCASE("zone smaller than a cell") {
    GridSpec g{3, 3, 1.0, {}};
    const ZonePolygon tiny{{{1.3, 1.3}, {1.7, 1.3}, {1.5, 1.7}}};
    CHECK(code_of([&] { cells_in_zone(g, tiny); }) == ErrorCode::DegenerateZone);
  }
  SUBCASE("rotated squares against the sampling oracle") {
    GridSpec g{12, 12, 15.0, {}};
    for (double deg : {0.0, 7.0, 12.0, 33.0, 45.0}) {
      const double th = deg * M_PI / 180.0, h = 60.0;
      const Point2 c{90.0, 90.0};
      ZonePolygon zone;
      for (int k = 0; k < 4; ++k) {
        const double a = th + M_PI / 4.0 + k * M_PI / 2.0;
        zone.vertices.push_back({c.x + std::sqrt(2.0) * h * std::cos(a), c.y + std::sqrt(2.0) * h * std::sin(a)});
      }
      check_against_oracle(g, zone);
    }
  }
}

TEST_CASE("supercover trace examples") {
  GridSpec g{3, 3, 1.0, {}};
  CHECK(supercover_trace(g, {1.5, 1.5}, {1.5, 1.5}) == std::vector<int>{4});
  CHECK(supercover_trace(g, {0.5, 0.5}, {2.5, 0.5}) == std::vector<int>{0, 1, 2});
  CHECK(as_set(supercover_trace(g, {0.5, 0.5}, {2.5, 0.5})) == oracle::sampled_trace(g, {0.5, 0.5}, {2.5, 0.5}));

  const auto diag = supercover_trace(g, {0.0, 0.0}, {2.0, 2.0});
  CHECK(as_set(diag) == oracle::sampled_trace(g, {0.0, 0.0}, {2.0, 2.0}));
  CHECK(as_set(diag).count(1) == 1);
  CHECK(as_set(diag).count(3) == 1);
  CHECK(diag.front() == 0);

  CHECK(code_of([&] { supercover_trace(g, {-0.5, 0.5}, {1.0, 1.0}); }) == ErrorCode::OutOfBounds);
  CHECK(code_of([&] { supercover_trace(g, {0.5, 0.5}, {1.0, 3.5}); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("supercover trace properties on random segments") {
  GridSpec g{9, 7, 1.5, {-2.0, 4.0}};
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ux(g.origin.x, g.origin.x + g.width_m());
  std::uniform_real_distribution<double> uy(g.origin.y, g.origin.y + g.height_m());
  std::uniform_int_distribution<int> snap(0, 3);
  auto draw = [&] {
    Point2 p{ux(gen), uy(gen)};
    // Some endpoints on grid lines and corners to exercise grazes.
    if (snap(gen) == 0) p.x = g.origin.x + std::round((p.x - g.origin.x) / g.cell_size) * g.cell_size;
    if (snap(gen) == 0) p.y = g.origin.y + std::round((p.y - g.origin.y) / g.cell_size) * g.cell_size;
    return p;
  };
  for (int trial = 0; trial < 400; ++trial) {
    const Point2 a = draw(), b = draw();
    const auto cells = supercover_trace(g, a, b);
    const auto got = as_set(cells);
    CHECK(got.size() == cells.size());

    std::set<int> exact;
    for (int idx = 0; idx < g.num_cells(); ++idx) {
      const Point2 lo = g.cell_min(idx);
      const double t = kCornerTolerance;
      if (oracle::segment_meets_box(a, b, lo.x - t, lo.y - t, lo.x + g.cell_size + t, lo.y + g.cell_size + t))
        exact.insert(idx);
    }
    CHECK(got == exact);
    for (int c : oracle::sampled_trace(g, a, b, 2000, 0.0)) CHECK(got.count(c) == 1);

    // first/last cells hold the endpoints, neighbours are 8-adjacent
    CHECK(oracle::segment_meets_box(a, a, g.cell_min(cells.front()).x, g.cell_min(cells.front()).y,
                                    g.cell_min(cells.front()).x + g.cell_size,
                                    g.cell_min(cells.front()).y + g.cell_size));
    CHECK(oracle::segment_meets_box(b, b, g.cell_min(cells.back()).x, g.cell_min(cells.back()).y,
                                    g.cell_min(cells.back()).x + g.cell_size,
                                    g.cell_min(cells.back()).y + g.cell_size));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const auto p = g.coord(cells[i - 1]), q = g.coord(cells[i]);
      CHECK(std::abs(p.col - q.col) <= 1);
      CHECK(std::abs(p.row - q.row) <= 1);
    }

    auto back = supercover_trace(g, b, a);
    std::reverse(back.begin(), back.end());
    CHECK(back == cells);
  }
}

TEST_CASE("candidate enumeration") {
  SUBCASE("one candidate per center-in cell") {
    ZoneMap map(GridSpec{2, 2, 1.0, {}}, rect(0, 0, 2, 2));
    const auto cands = enumerate_candidates(map, {0.5, 0.5}, 0.7);
    REQUIRE(cands.size() == 4);
    CHECK(cands[0].traversed_cells == std::vector<int>{0});
    CHECK(cands[1].traversed_cells == std::vector<int>{0, 1});
    CHECK(cands[2].traversed_cells == std::vector<int>{0, 2});
    for (std::size_t i = 0; i < cands.size(); ++i) {
      CHECK(cands[i].goal_cell == static_cast<int>(i));
      CHECK(cands[i].goal == map.grid().center(static_cast<int>(i)));
      REQUIRE(cands[i].planned_rows.size() == cands[i].traversed_cells.size());
      for (std::size_t k = 0; k < cands[i].planned_rows.size(); ++k) {
        CHECK(cands[i].planned_rows[k].cell == cands[i].traversed_cells[k]);
        CHECK(cands[i].planned_rows[k].confidence == 0.7);
        CHECK(cands[i].planned_rows[k].kind == RecordKind::SelfPosition);
      }
    }
  }
  SUBCASE("rotated zone keeps traversed cells in zone") {
    GridSpec g{10, 10, 15.0, {}};
    const double th = 0.2;
    ZonePolygon zone;
    for (int k = 0; k < 4; ++k) {
      const double a = th + M_PI / 4.0 + k * M_PI / 2.0;
      zone.vertices.push_back({75.0 + 84.0 * std::cos(a), 75.0 + 84.0 * std::sin(a)});
    }
    ZoneMap map(g, zone);
    CHECK_FALSE(map.cells().sliver.empty());
    CHECK(map.searchable_count() == map.cells().center_in.size() + map.cells().sliver.size());
    for (int start : {map.cells().center_in.front(), map.cells().center_in.back()}) {
      const auto cands = enumerate_candidates(map, g.center(start));
      CHECK(cands.size() == map.cells().center_in.size());
      for (const auto& c : cands) {
        CHECK_FALSE(c.traversed_cells.empty());
        CHECK(c.traversed_cells.front() == start);
        CHECK(c.traversed_cells.back() == c.goal_cell);
        for (int cell : c.traversed_cells) CHECK(map.in_zone(cell));
      }
    }
  }
}
