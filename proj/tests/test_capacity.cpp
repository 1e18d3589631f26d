#include "doctest.h"

#include <cmath>
#include <sstream>

#include "qrlim/capacity.hpp"
#include "qrlim/geometry.hpp"

using namespace qrlim;

TEST_CASE("exact ring capacity and sphere constants") {
    CHECK(sphere_surface_area(2) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(sphere_surface_area(3) == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == doctest::Approx(4 * M_PI / 3).epsilon(1e-14));
    // omega_{n-1} log(R/r)^{1-n}
    CHECK(ring_capacity_exact(2, 1.0, std::exp(1.0)) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(ring_capacity_exact(3, 0.5, 2.0) ==
          doctest::Approx(4 * M_PI / std::pow(std::log(4.0), 2)).epsilon(1e-14));
}

TEST_CASE("lattice estimate approaches the planar ring capacity") {
    auto grid = make_ring_grid(2, 1.0, std::exp(1.0), 48);
    double est = capacity_estimate(grid, 1e-7);
    CHECK(est == doctest::Approx(2 * M_PI).epsilon(0.06));
    // refinement improves the estimate
    auto fine = make_ring_grid(2, 1.0, std::exp(1.0), 96);
    double est_fine = capacity_estimate(fine, 1e-7);
    CHECK(std::fabs(est_fine - 2 * M_PI) <= std::fabs(est - 2 * M_PI) + 1e-9);
}

TEST_CASE("lattice estimate approaches the spatial ring capacity") {
    auto grid = make_ring_grid(3, 1.0, std::exp(1.0), 24);
    double est = capacity_estimate(grid, 1e-5);
    CHECK(est == doctest::Approx(4 * M_PI).epsilon(0.15));
}

TEST_CASE("capacity is monotone in the plate") {
    // growing C (larger inner radius) increases the ring capacity
    double small = capacity_estimate(make_ring_grid(2, 0.8, std::exp(1.0), 48), 1e-7);
    double large = capacity_estimate(make_ring_grid(2, 1.2, std::exp(1.0), 48), 1e-7);
    CHECK(large > small);
}

TEST_CASE("grid validation rejects malformed condensers") {
    CondenserGrid g;
    g.n = 2;
    g.cell_size = 0.1;
    g.dims = {4, 4, 1};
    g.cells.assign(16, CellKind::Outside);
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // empty plate
    g.cells[g.index(1, 1, 0)] = CellKind::InC;
    CHECK_NOTHROW(g.validate());
    g.cells[g.index(0, 0, 0)] = CellKind::InA;  // plate touching the box edge
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("grid text format round-trips") {
    auto grid = make_ring_grid(2, 0.5, 1.0, 12);
    std::stringstream ss;
    grid.save(ss);
    auto back = CondenserGrid::load(ss);
    CHECK(back.n == grid.n);
    CHECK(back.dims == grid.dims);
    CHECK(back.cell_size == doctest::Approx(grid.cell_size).epsilon(1e-12));
    CHECK(back.cells == grid.cells);
    // and the estimate is unchanged
    CHECK(capacity_estimate(back, 1e-7) ==
          doctest::Approx(capacity_estimate(grid, 1e-7)).epsilon(1e-10));
}

TEST_CASE("capacity density profile distinguishes thick and empty sets") {
    // E = left half-plane through b: every ball B(b,r) is half-covered
    Point b{0.0, 0.0};
    auto in_E = [](const Point& p) { return p[0] <= 0.0; };
    DensityProfile prof = cap_density_profile(in_E, b, {0.2, 0.1, 0.05}, 24, 1e-6);
    REQUIRE(prof.values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK_FALSE(prof.empty_at_r[i]);
        CHECK(prof.values[i] > 0.0);
    }
    // scale-invariance of the half-plane: M(E, r, b) roughly constant in r
    CHECK(prof.values[0] == doctest::Approx(prof.values[2]).epsilon(0.1));

    // E empty near b: flagged, zero values
    auto far = [](const Point& p) { return p[0] > 10.0; };
    DensityProfile none = cap_density_profile(far, b, {0.1}, 24, 1e-6);
    CHECK(none.empty_at_r[0]);
    CHECK(none.values[0] == 0.0);
}

TEST_CASE("density profile argument validation") {
    Point b{0, 0};
    auto in_E = [](const Point&) { return true; };
    CHECK_THROWS_AS(cap_density_profile(in_E, b, {0.1, 0.2}, 24), std::invalid_argument);
    CHECK_THROWS_AS(cap_density_profile(in_E, b, {0.1}, 4), std::invalid_argument);
}
