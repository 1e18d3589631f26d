#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qrlim/common.hpp"

namespace qrlim {

struct BallSpec {
    Point center;
    double radius;
    BallSpec(Point c, double r);
};

// Open cone at a boundary point of the unit ball:
// { x : <b, b-x> > |b-x| cos(phi) }  intersected with  B(b, cos(phi)).
struct ConeSpec {
    Point vertex;       // b, |b| = 1
    double half_angle;  // phi in (0, pi/2)
    ConeSpec(Point b, double phi);
};

// (B(b, r_outer) \ closed B(b, r_inner)) intersected with the cone.
struct TruncatedConeSpec {
    ConeSpec cone;
    double r_outer;
    double r_inner;
    TruncatedConeSpec(ConeSpec c, double outer, double inner);
};

// Tabulated opening-angle profile r -> phi(r), phi decreasing in r and
// widening toward pi/2 as r -> 0.  Linear interpolation between knots.
class AngleProfile {
  public:
    // table entries are (r, phi); any order, sorted internally.
    explicit AngleProfile(std::vector<std::pair<double, double>> table);
    double operator()(double r) const;  // throws std::invalid_argument outside range
    double r_min() const { return table_.front().first; }
    double r_max() const { return table_.back().first; }

  private:
    std::vector<std::pair<double, double>> table_;  // ascending r
};

bool in_ball(const Point& x, const BallSpec& b);
bool in_cone(const Point& x, const ConeSpec& c);
bool in_truncated_cone(const Point& x, const TruncatedConeSpec& t);

// Tangential approach set G_{b,phi}: angle at b below phi(|x-b|), where the
// angle is arccos(|<x,b> - 1| / |x-b|).
bool in_tangential_set(const Point& x, const Point& b, const AngleProfile& profile);

using Region = std::variant<BallSpec, ConeSpec, TruncatedConeSpec>;

struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic rejection sampler inside the region's bounding ball.
// Throws SamplingError if the acceptance rate stays below ~1e-6 over the
// attempt cap (1e7 attempts).
std::vector<Point> sample_region(const Region& region, std::size_t count, std::uint64_t seed);

bool region_contains(const Region& region, const Point& x);

}  // namespace qrlim
