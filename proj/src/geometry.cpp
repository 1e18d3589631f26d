#include "qrlim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qrlim {

BallSpec::BallSpec(Point c, double r) : center(std::move(c)), radius(r) {
    require(center.size() >= 2, "BallSpec: dimension must be >= 2");
    require(all_finite(center), "BallSpec: center must be finite");
    require(std::isfinite(radius) && radius > 0.0, "BallSpec: radius must be positive");
}

ConeSpec::ConeSpec(Point b, double phi) : vertex(std::move(b)), half_angle(phi) {
    require(vertex.size() >= 2, "ConeSpec: dimension must be >= 2");
    require(all_finite(vertex), "ConeSpec: vertex must be finite");
    require(std::fabs(norm(vertex) - 1.0) <= 1e-12, "ConeSpec: vertex must lie on the unit sphere");
    require(phi > 0.0 && phi < M_PI / 2.0, "ConeSpec: half angle must lie in (0, pi/2)");
}

TruncatedConeSpec::TruncatedConeSpec(ConeSpec c, double outer, double inner)
    : cone(std::move(c)), r_outer(outer), r_inner(inner) {
    require(std::cos(cone.half_angle) > r_outer, "TruncatedConeSpec: need cos(phi) > r_outer");
    require(r_outer > r_inner, "TruncatedConeSpec: need r_outer > r_inner");
    require(r_inner > 0.0, "TruncatedConeSpec: need r_inner > 0");
}

AngleProfile::AngleProfile(std::vector<std::pair<double, double>> table) : table_(std::move(table)) {
    require(table_.size() >= 2, "AngleProfile: need at least two knots");
    std::sort(table_.begin(), table_.end());
    double prev_r = 0.0, prev_phi = M_PI;
    for (auto& [r, phi] : table_) {
        require(r > 0.0 && r < 1.0, "AngleProfile: r must lie in (0,1)");
        require(phi > 0.0 && phi < M_PI / 2.0, "AngleProfile: phi must lie in (0, pi/2)");
        require(r > prev_r, "AngleProfile: duplicate r knot");
        require(phi < prev_phi, "AngleProfile: phi must be decreasing in r");
        require(r < std::cos(phi), "AngleProfile: need r < cos(phi(r))");
        prev_r = r;
        prev_phi = phi;
    }
}

double AngleProfile::operator()(double r) const {
    require(r >= r_min() && r <= r_max(), "AngleProfile: r outside tabulated range");
    auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(r, -1.0));
    if (it == table_.begin()) return it->second;
    if (it == table_.end() || it->first > r) {
        auto lo = std::prev(it);
        auto hi = (it == table_.end()) ? lo : it;
        if (lo == hi) return lo->second;
        double t = (r - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }
    return it->second;
}

bool in_ball(const Point& x, const BallSpec& b) {
    require_same_dim(x, b.center);
    return dist(x, b.center) < b.radius;
}

bool in_cone(const Point& x, const ConeSpec& c) {
    require_same_dim(x, c.vertex);
    const Point& b = c.vertex;
    Point bmx(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bmx[i] = b[i] - x[i];
    double r = norm(bmx);
    if (r <= 0.0) return false;  // the vertex itself is excluded
    double cphi = std::cos(c.half_angle);
    return dot(b, bmx) > r * cphi && r < cphi;
}

bool in_truncated_cone(const Point& x, const TruncatedConeSpec& t) {
    if (!in_cone(x, t.cone)) return false;
    double r = dist(x, t.cone.vertex);
    return r > t.r_inner && r < t.r_outer;
}

bool in_tangential_set(const Point& x, const Point& b, const AngleProfile& profile) {
    require_same_dim(x, b);
    require(std::fabs(norm(b) - 1.0) <= 1e-12, "in_tangential_set: |b| must be 1");
    double r = dist(x, b);
    require(r > 0.0, "in_tangential_set: x == b is not admissible");
    double ratio = std::fabs(dot(x, b) - 1.0) / r;
    ratio = std::min(ratio, 1.0);
    return std::acos(ratio) < profile(r);
}

bool region_contains(const Region& region, const Point& x) {
    if (const auto* b = std::get_if<BallSpec>(&region)) return in_ball(x, *b);
    if (const auto* c = std::get_if<ConeSpec>(&region)) return in_cone(x, *c);
    return in_truncated_cone(x, std::get<TruncatedConeSpec>(region));
}

namespace {

BallSpec bounding_ball(const Region& region) {
    if (const auto* b = std::get_if<BallSpec>(&region)) return *b;
    if (const auto* c = std::get_if<ConeSpec>(&region))
        return BallSpec(c->vertex, std::cos(c->half_angle));
    const auto& t = std::get<TruncatedConeSpec>(region);
    return BallSpec(t.cone.vertex, t.r_outer);
}

const char* region_name(const Region& region) {
    if (std::holds_alternative<BallSpec>(region)) return "ball";
    if (std::holds_alternative<ConeSpec>(region)) return "cone";
    return "truncated cone";
}

inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

}  // namespace

std::vector<Point> sample_region(const Region& region, std::size_t count, std::uint64_t seed) {
    require(count >= 1, "sample_region: count must be >= 1");
    BallSpec bb = bounding_ball(region);
    const std::size_t n = bb.center.size();
    const std::size_t max_attempts = 10'000'000;

    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    Point cand(n);
    std::size_t attempts = 0;
    while (out.size() < count && attempts < max_attempts) {
        ++attempts;
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double u = (2.0 * next_unit(rng) - 1.0) * bb.radius;
            cand[i] = bb.center[i] + u;
            r2 += u * u;
        }
        if (r2 >= bb.radius * bb.radius) continue;
        if (region_contains(region, cand)) out.push_back(cand);
    }
    if (out.size() < count)
        throw SamplingError(std::string("sample_region: acceptance rate too low for ") +
                            region_name(region));
    return out;
}

}  // namespace qrlim
