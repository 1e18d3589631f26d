#pragma once

#include <utility>
#include <vector>

#include "qrlim/common.hpp"

namespace qrlim {

// Example quasiregular maps of the unit ball:
//   mobius          ball automorphism sending a to 0 (conformal, K = 1)
//   radial_stretch  f(x) = |x|^(alpha-1) x (K = alpha in the plane)
//   singular_inner  f(z) = exp(-(1+z)/(1-z)), plane only; bounded analytic
//                   with angular limit 0 at z = 1 but no tangential limit
struct MapSpec {
    enum class Kind { Mobius, RadialStretch, SingularInner };
    Kind kind;
    Point a;             // mobius center, |a| < 1
    double alpha = 1.0;  // stretch exponent, >= 1

    static MapSpec mobius(Point a);
    static MapSpec radial_stretch(double alpha);
    static MapSpec singular_inner();
};

Point eval_map(const MapSpec& m, const Point& x);

// Larger of the outer/inner dilatations from a central-difference Jacobian:
// max(sigma_max^n / |det|, |det| / sigma_min^n).  Throws std::domain_error at
// degenerate points (|det| < 1e-14).
double dilatation_estimate(const MapSpec& m, const Point& x, double h = 1e-5);

// Approach curves toward a boundary point b (|b| = 1), parameterized so the
// curve tends to b as the parameter tends to 0:
//   radial               x(r) = (1 - r) b
//   cone_ray             ray from b at the given angle to the inward normal
//   tangential_parabola  plane only: b (1 - 3t^2/2 - i t), second-order
//                        tangency to the circle at b
struct ApproachCurve {
    enum class Kind { Radial, ConeRay, TangentialParabola };
    Kind kind;
    Point b;
    double angle = 0.0;  // cone_ray only, in (0, pi/2)

    static ApproachCurve radial(Point b);
    static ApproachCurve cone_ray(Point b, double angle);
    static ApproachCurve tangential_parabola(Point b);

    Point at(double t) const;
};

// |f(x(r))| at each radius; radii must give interior curve points.
std::vector<std::pair<double, double>> boundary_scan(const MapSpec& m, const ApproachCurve& curve,
                                                     const std::vector<double>& radii);

}  // namespace qrlim
