#include "doctest.h"

#include <cmath>

#include "qrlim/geometry.hpp"
#include "qrlim/metrics.hpp"

using namespace qrlim;

TEST_CASE("rho closed forms and invariances") {
    CHECK(rho(Point{0, 0}, Point{0.5, 0}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(rho_radial(0.0, 0.5) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    // radial two-point form
    CHECK(rho(Point{0.2, 0, 0}, Point{0.7, 0, 0}) ==
          doctest::Approx(rho_radial(0.2, 0.7)).epsilon(1e-13));
    // symmetric and rotation invariant
    Point x{0.3, -0.4}, y{-0.1, 0.55};
    CHECK(rho(x, y) == doctest::Approx(rho(y, x)).epsilon(1e-15));
    double c = std::cos(1.1), s = std::sin(1.1);
    Point rx{c * x[0] - s * x[1], s * x[0] + c * x[1]};
    Point ry{c * y[0] - s * y[1], s * y[0] + c * y[1]};
    CHECK(rho(x, y) == doctest::Approx(rho(rx, ry)).epsilon(1e-12));
    CHECK_THROWS_AS(rho(Point{1.0, 0}, Point{0, 0}), std::invalid_argument);
}

TEST_CASE("j metric matches its formula") {
    Domain d = Domain::unit_ball(2);
    CHECK(j_dist(d, Point{0, 0}, Point{0.5, 0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // symmetric; min of the two boundary distances governs
    Point x{0.9, 0}, y{0.1, 0.1};
    CHECK(j_dist(d, x, y) == doctest::Approx(j_dist(d, y, x)).epsilon(1e-15));
    CHECK(j_dist(d, x, y) == doctest::Approx(std::log1p(dist(x, y) / 0.1)).epsilon(1e-12));
}

TEST_CASE("k estimator hits the radial closed form") {
    Domain d = Domain::unit_ball(2);
    for (double t : {0.3, 0.5, 0.8}) {
        double expect = std::log(1.0 / (1.0 - t));
        CHECK(k_dist_estimate(d, Point{0, 0}, Point{t, 0}, 1e-3) ==
              doctest::Approx(expect).epsilon(2e-3));
    }
    Domain d3 = Domain::unit_ball(3);
    CHECK(k_dist_estimate(d3, Point{0, 0, 0}, Point{0.5, 0, 0}, 1e-3) ==
          doctest::Approx(std::log(2.0)).epsilon(2e-3));
}

TEST_CASE("metric chain j <= k <= rho <= 2j on sampled pairs") {
    for (int n : {2, 3}) {
        Domain d = Domain::unit_ball(n);
        auto pts = sample_region(BallSpec(Point(n, 0.0), 1.0), 120, 7 + n);
        for (int i = 0; i < 60; ++i) {
            const Point &x = pts[i], &y = pts[i + 60];
            double jv = j_dist(d, x, y);
            double kv = k_dist_estimate(d, x, y, 1e-3);
            double rv = rho(x, y);
            CHECK(jv <= kv + 1e-3);
            CHECK(kv <= rv + 1e-3);
            CHECK(rv <= 2 * jv + 1e-9);
        }
    }
}

TEST_CASE("k estimator works on a general (non-ball) domain") {
    // upper half-plane: d(x) = x_1; k is the hyperbolic metric of the
    // half-plane, with closed form for vertical pairs: log(b/a)
    Domain hp = Domain::general(2, [](const Point& p) { return p[1]; });
    double v = k_dist_estimate(hp, Point{0.0, 1.0}, Point{0.0, 0.25}, 1e-3);
    CHECK(v == doctest::Approx(std::log(4.0)).epsilon(5e-3));
}

TEST_CASE("set diameter is a pairwise sup") {
    Domain d = Domain::unit_ball(2);
    std::vector<Point> pts{{0, 0}, {0.5, 0}, {0, 0.25}};
    CHECK(set_diameter(d, MetricKind::Rho, pts) ==
          doctest::Approx(rho(Point{0.5, 0}, Point{0, 0.25})).epsilon(1e-12));
    CHECK(set_diameter(d, MetricKind::J, pts) >= j_dist(d, pts[0], pts[1]));
}

TEST_CASE("Proposition 2.1: sampled j-diameter is dominated by the bound") {
    Domain d = Domain::unit_ball(2);
    int idx = 0;
    for (double a : {0.25, 0.5})
        for (double phi : {0.4, 1.0})
            for (double r : {0.1, 0.3}) {
                if (!(r < std::cos(phi))) continue;
                ConeSpec cone(e1(2), phi);
                TruncatedConeSpec rc(cone, r, a * r);
                auto pts = sample_region(rc, 150, 31 + idx++);
                double diam = set_diameter(d, MetricKind::J, pts);
                CHECK(diam <= j_cone_diameter_bound(a, phi, r));
            }
}

TEST_CASE("Remark 2.2: k bounds relate to the j bound") {
    double a = 0.5, phi = 0.7, r = 0.2;
    CHECK(k_cone_diameter_bound(a, phi, r, false) ==
          doctest::Approx(2.0 * j_cone_diameter_bound(a, phi, r)).epsilon(1e-15));
    // the r-free form majorizes the r-dependent one for admissible r
    CHECK(k_cone_diameter_bound(a, phi, r, true) >= k_cone_diameter_bound(a, phi, r, false));
}

TEST_CASE("Lemma 2.3: rho sandwich on cone points at distance r") {
    Domain d = Domain::unit_ball(2);
    Point origin{0, 0};
    int idx = 0;
    for (double phi : {0.4, 1.0})
        for (double r : {0.1, 0.25}) {
            ConeSpec cone(e1(2), phi);
            TruncatedConeSpec shell(cone, r, r * 0.999);
            auto pts = sample_region(shell, 80, 57 + idx++);
            double lower = rho_radial(0.0, 1.0 - r);
            for (const auto& x : pts) {
                double v = rho(origin, x);
                double s = s_bound(dist(x, e1(2)), phi);  // bound at the sample's radius
                CHECK(v >= lower - 1e-12);
                CHECK(v <= s + 1e-12);
            }
            double s = s_bound(r * 0.999, phi);
            // every point of the radial segment is within s of each sample
            for (const auto& x : pts)
                for (double t : {0.1, 0.5, 0.9}) {
                    Point seg{t * (1.0 - r), 0.0};
                    CHECK(rho(seg, x) <= s + 1e-12);
                }
        }
}

TEST_CASE("batch metrics agree with the scalar definitions") {
    auto pts = sample_region(BallSpec(Point{0, 0, 0}, 1.0), 64, 5);
    std::vector<Point> xs(pts.begin(), pts.begin() + 32), ys(pts.begin() + 32, pts.end());
    auto rs = rho_many(xs, ys);
    auto js = j_ball_many(xs, ys);
    Domain d = Domain::unit_ball(3);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(rs[i] == doctest::Approx(rho(xs[i], ys[i])).epsilon(1e-12));
        CHECK(js[i] == doctest::Approx(j_dist(d, xs[i], ys[i])).epsilon(1e-12));
    }
}
