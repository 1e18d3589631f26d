#pragma once

#include <functional>
#include <vector>

#include "qrlim/common.hpp"

namespace qrlim {

enum class MetricKind { Rho, J, K };

// A proper subdomain of R^n described by its distance-to-boundary function.
class Domain {
  public:
    static Domain unit_ball(int n);
    static Domain general(int n, std::function<double(const Point&)> boundary_distance);

    int dim() const { return n_; }
    bool is_unit_ball() const { return unit_ball_; }

    // d(x, boundary); throws std::invalid_argument for non-interior points.
    double boundary_distance(const Point& x) const;

    // Raw evaluator; may return <= 0 for non-interior points.
    double distance_unchecked(const Point& x) const;

  private:
    Domain(int n, bool unit_ball, std::function<double(const Point&)> fn);
    int n_;
    bool unit_ball_;
    std::function<double(const Point&)> fn_;
};

// Hyperbolic distance of the unit ball, via the sinh(rho/2) identity.
double rho(const Point& x, const Point& y);

// Radial closed form: rho(s e1, t e1) = log((1+t)/(1-t) * (1-s)/(1+s)),
// t in (0,1), s in (-t, t).
double rho_radial(double s, double t);

// Distance-ratio metric log(1 + |x-y| / min(d(x), d(y))).
double j_dist(const Domain& dom, const Point& x, const Point& y);

struct KOptions {
    std::size_t max_segments = std::size_t{1} << 19;
    int base_sweeps = 32;  // relaxation sweeps at the coarsest level
};

// Upper-bound-biased quasihyperbolic distance estimate: a polyline through the
// domain is refined (segment count doubles per level) and relaxed against the
// discrete weight |u-v| / min(d(u), d(v)); stops once successive levels agree
// within tol.  Throws ConvergenceError when the cap is hit first.
double k_dist_estimate(const Domain& dom, const Point& x, const Point& y, double tol,
                       const KOptions& opts = {});

// Finite-sample sup of pairwise distances.  k_tol is forwarded to the k
// estimator when kind == K.
double set_diameter(const Domain& dom, MetricKind kind, const std::vector<Point>& points,
                    double k_tol = 1e-3);

// j-diameter bound of the truncated cone R(b, phi, a r, r):
// log(1 + (2 + a r) u(a,phi) / (a (2 cos phi - a r))),
// u^2(a,phi) = (1+a)^2 tan^2(phi) + (1-a)^2.
double j_cone_diameter_bound(double a, double phi, double r);

// Twice the j bound; with r_free the r-independent majorant
// 2 log(1 + (2 + a cos phi)(1 + a) / (a (2 - a) cos^2 phi)).
double k_cone_diameter_bound(double a, double phi, double r, bool r_free);

// s(r, phi) = log((2+r)^2 / (r (2 cos phi - r))): hyperbolic reach of cone
// points at distance r from the vertex.
double s_bound(double r, double phi);

// Batch evaluation over equal-length point lists (unit ball), backed by the
// data-parallel kernels.
std::vector<double> rho_many(const std::vector<Point>& xs, const std::vector<Point>& ys);
std::vector<double> j_ball_many(const std::vector<Point>& xs, const std::vector<Point>& ys);

}  // namespace qrlim
