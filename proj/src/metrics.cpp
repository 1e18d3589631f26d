#include "qrlim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qrlim/kernels/kernels.hpp"

namespace qrlim {

Domain::Domain(int n, bool unit_ball, std::function<double(const Point&)> fn)
    : n_(n), unit_ball_(unit_ball), fn_(std::move(fn)) {
    require(n >= 2, "Domain: dimension must be >= 2");
}

Domain Domain::unit_ball(int n) { return Domain(n, true, {}); }

Domain Domain::general(int n, std::function<double(const Point&)> boundary_distance) {
    require(static_cast<bool>(boundary_distance), "Domain: evaluator must be callable");
    return Domain(n, false, std::move(boundary_distance));
}

double Domain::distance_unchecked(const Point& x) const {
    require(static_cast<int>(x.size()) == n_, "Domain: dimension mismatch");
    if (unit_ball_) return 1.0 - norm(x);
    return fn_(x);
}

double Domain::boundary_distance(const Point& x) const {
    double d = distance_unchecked(x);
    require(d > 0.0, "Domain: point is not interior");
    return d;
}

double rho(const Point& x, const Point& y) {
    require_same_dim(x, y);
    double nx = norm(x), ny = norm(y);
    require(nx < 1.0 && ny < 1.0, "rho: points must lie in the open unit ball");
    double q = dist_sq(x, y) / ((1.0 - nx) * (1.0 + nx) * (1.0 - ny) * (1.0 + ny));
    return 2.0 * std::asinh(std::sqrt(q));
}

double rho_radial(double s, double t) {
    require(t > 0.0 && t < 1.0, "rho_radial: t must lie in (0,1)");
    require(s > -t && s < t, "rho_radial: s must lie in (-t, t)");
    return std::log((1.0 + t) / (1.0 - t) * (1.0 - s) / (1.0 + s));
}

double j_dist(const Domain& dom, const Point& x, const Point& y) {
    double dx = dom.boundary_distance(x);
    double dy = dom.boundary_distance(y);
    return std::log1p(dist(x, y) / std::min(dx, dy));
}

namespace {

// Gradient of the boundary distance; analytic for the ball, central
// differences otherwise.
Point distance_gradient(const Domain& dom, const Point& x) {
    Point g(x.size(), 0.0);
    if (dom.is_unit_ball()) {
        double n = norm(x);
        if (n > 1e-300)
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = -x[i] / n;
        return g;
    }
    const double h = 1e-6;
    Point p = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = x[i] + h;
        double fp = dom.distance_unchecked(p);
        p[i] = x[i] - h;
        double fm = dom.distance_unchecked(p);
        p[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

inline double edge_weight(double len, double da, double db) {
    return len / std::min(da, db);
}

double polyline_length(const Domain&, const std::vector<Point>& path,
                       const std::vector<double>& d) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        total += edge_weight(dist(path[i], path[i + 1]), d[i], d[i + 1]);
    return total;
}

// Local cost of vertex v between fixed neighbors a and b.
inline double local_cost(const Point& a, double da, const Point& v, double dv, const Point& b,
                         double db) {
    return edge_weight(dist(a, v), da, dv) + edge_weight(dist(v, b), dv, db);
}

void relax_vertex(const Domain& dom, const Point& a, double da, Point& v, double& dv,
                  const Point& b, double db) {
    const std::size_t n = v.size();
    for (int iter = 0; iter < 2; ++iter) {
        double la = dist(a, v);
        double lb = dist(v, b);
        if (la < 1e-15 || lb < 1e-15) return;
        double ma = std::min(da, dv);
        double mb = std::min(dv, db);
        Point g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            g[i] = (v[i] - a[i]) / (la * ma) + (v[i] - b[i]) / (lb * mb);
        if (dv < da || dv < db) {
            Point gd = distance_gradient(dom, v);
            double coef = 0.0;
            if (dv < da) coef += la / (ma * ma);
            if (dv < db) coef += lb / (mb * mb);
            for (std::size_t i = 0; i < n; ++i) g[i] -= coef * gd[i];
        }
        double gn = norm(g);
        if (gn < 1e-15) return;
        double f0 = local_cost(a, da, v, dv, b, db);
        double step = 0.5 * std::min(la, lb);
        bool moved = false;
        Point cand(n);
        for (int bt = 0; bt < 8; ++bt, step *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) cand[i] = v[i] - step * g[i] / gn;
            double dc = dom.distance_unchecked(cand);
            if (dc <= 0.0) continue;
            double fc = local_cost(a, da, cand, dc, b, db);
            if (fc < f0) {
                v = cand;
                dv = dc;
                moved = true;
                break;
            }
        }
        if (!moved) return;
    }
}

// Ball automorphism sending a to 0; sigma_{-a} is its inverse.
Point mobius_shift(const Point& a, const Point& x) {
    double na2 = norm_sq(a);
    double den = 1.0 - 2.0 * dot(x, a) + norm_sq(x) * na2;
    double xa2 = dist_sq(x, a);
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = ((1.0 - na2) * (x[i] - a[i]) - xa2 * a[i]) / den;
    return out;
}

// Initial polyline along the hyperbolic geodesic from x to y: the straightened
// segment under sigma_x, sampled at equal hyperbolic arc length (equal
// Euclidean steps would cram most of the length into the chords next to a
// near-boundary endpoint), pulled back by sigma_{-x}.  The k-geodesic differs
// from it only by a bounded density ratio, so relaxation starts near optimum.
std::vector<Point> geodesic_seed(const Point& x, const Point& y, std::size_t segments) {
    Point neg_x(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg_x[i] = -x[i];
    Point w = mobius_shift(x, y);
    double wn = norm(w);
    double half_len = std::atanh(std::min(wn, 1.0 - 1e-16));  // rho(0, w) / 2
    std::vector<Point> path;
    path.reserve(segments + 1);
    path.push_back(x);
    for (std::size_t s = 1; s < segments; ++s) {
        double t = std::tanh(half_len * static_cast<double>(s) / segments) / wn;
        Point p(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) p[i] = t * w[i];
        path.push_back(mobius_shift(neg_x, p));
    }
    path.push_back(y);
    return path;
}

// Midpoint pulled toward the deeper endpoint until interior; needed only for
// non-convex general domains.
Point interior_midpoint(const Domain& dom, const Point& a, double da, const Point& b, double db,
                        double& dm) {
    Point m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    dm = dom.distance_unchecked(m);
    const Point& anchor = (da >= db) ? a : b;
    for (int tries = 0; dm <= 0.0 && tries < 40; ++tries) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (m[i] + anchor[i]);
        dm = dom.distance_unchecked(m);
    }
    if (dm <= 0.0)
        throw ConvergenceError("k_dist_estimate: cannot place interior midpoint", 0.0, 0.0);
    return m;
}

}  // namespace

double k_dist_estimate(const Domain& dom, const Point& x, const Point& y, double tol,
                       const KOptions& opts) {
    require(tol > 0.0, "k_dist_estimate: tol must be positive");
    double dx = dom.boundary_distance(x);
    double dy = dom.boundary_distance(y);
    if (dist(x, y) < 1e-300) return 0.0;

    std::vector<Point> path{x, y};
    std::size_t segments = 1;
    if (dom.is_unit_ball() && opts.max_segments >= 16) {
        // Resolve the seed in proportion to the hyperbolic length: long
        // near-boundary geodesics need more chords before their polygonal
        // shape is close enough for the sweep budget to finish the job.
        double len = rho(x, y);
        segments = 16;
        while (segments < 4.0 * len && segments < 1024 && segments * 2 <= opts.max_segments)
            segments *= 2;
        path = geodesic_seed(x, y, segments);
    }
    std::vector<double> d(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) d[i] = dom.boundary_distance(path[i]);
    double prev = polyline_length(dom, path, d);
    int level = 0;
    double cur = prev;
    while (segments < opts.max_segments) {
        // Double the segment count.
        std::vector<Point> fine;
        std::vector<double> fine_d;
        fine.reserve(path.size() * 2 - 1);
        fine_d.reserve(path.size() * 2 - 1);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            fine.push_back(path[i]);
            fine_d.push_back(d[i]);
            double dm;
            fine.push_back(interior_midpoint(dom, path[i], d[i], path[i + 1], d[i + 1], dm));
            fine_d.push_back(dm);
        }
        fine.push_back(path.back());
        fine_d.push_back(d.back());
        path = std::move(fine);
        d = std::move(fine_d);
        segments *= 2;

        // Relax the shape hard while the polyline is coarse; once it is
        // settled, later levels are pure refinement and the level-to-level
        // gap decays geometrically, which the stop rule relies on.
        int sweeps = opts.base_sweeps >> level;
        for (int s = 0; s < sweeps; ++s)
            for (std::size_t i = 1; i + 1 < path.size(); ++i)
                relax_vertex(dom, path[i - 1], d[i - 1], path[i], d[i], path[i + 1], d[i + 1]);

        cur = polyline_length(dom, path, d);
#ifdef QRLIM_K_DEBUG
        std::fprintf(stderr, "level=%d segs=%zu cur=%.8f diff=%.2e\n", level, segments, cur,
                     std::fabs(prev - cur));
#endif
        // Discretization error decays like 1/segments, so successive levels
        // halve the gap; once the gap is small, extrapolate the geometric
        // tail.  Any polyline's discrete cost dominates j, so clamp there.
        if (level >= 1 && prev >= cur && prev - cur < 2.0 * tol) {
            double extrapolated = cur - (prev - cur);
            return std::max(extrapolated, std::log1p(dist(x, y) / std::min(dx, dy)));
        }
        prev = cur;
        ++level;
    }
    throw ConvergenceError("k_dist_estimate: refinement cap reached before tolerance", cur, prev);
}

double set_diameter(const Domain& dom, MetricKind kind, const std::vector<Point>& points,
                    double k_tol) {
    require(!points.empty(), "set_diameter: empty point list");
    if (kind == MetricKind::Rho)
        require(dom.is_unit_ball(), "set_diameter: rho requires the unit ball");
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double v;
            switch (kind) {
                case MetricKind::Rho: v = rho(points[i], points[j]); break;
                case MetricKind::J: v = j_dist(dom, points[i], points[j]); break;
                default: v = k_dist_estimate(dom, points[i], points[j], k_tol); break;
            }
            best = std::max(best, v);
        }
    }
    return best;
}

double j_cone_diameter_bound(double a, double phi, double r) {
    require(a > 0.0 && a < 1.0, "j_cone_diameter_bound: a must lie in (0,1)");
    require(phi > 0.0 && phi < M_PI / 2.0, "j_cone_diameter_bound: phi must lie in (0, pi/2)");
    require(r > 0.0 && r < std::cos(phi), "j_cone_diameter_bound: need 0 < r < cos(phi)");
    double tn = std::tan(phi);
    double u = std::sqrt((1.0 + a) * (1.0 + a) * tn * tn + (1.0 - a) * (1.0 - a));
    return std::log1p((2.0 + a * r) * u / (a * (2.0 * std::cos(phi) - a * r)));
}

double k_cone_diameter_bound(double a, double phi, double r, bool r_free) {
    if (!r_free) return 2.0 * j_cone_diameter_bound(a, phi, r);
    require(a > 0.0 && a < 1.0, "k_cone_diameter_bound: a must lie in (0,1)");
    require(phi > 0.0 && phi < M_PI / 2.0, "k_cone_diameter_bound: phi must lie in (0, pi/2)");
    double c = std::cos(phi);
    return 2.0 * std::log1p((2.0 + a * c) * (1.0 + a) / (a * (2.0 - a) * c * c));
}

double s_bound(double r, double phi) {
    require(phi > 0.0 && phi < M_PI / 2.0, "s_bound: phi must lie in (0, pi/2)");
    require(r > 0.0 && r < std::cos(phi), "s_bound: need 0 < r < cos(phi)");
    return std::log((2.0 + r) * (2.0 + r) / (r * (2.0 * std::cos(phi) - r)));
}

namespace {

struct Soa {
    std::vector<double> c[3];
    const double* ptr[3];
    int dim;
    explicit Soa(const std::vector<Point>& pts) {
        dim = static_cast<int>(pts.front().size());
        for (int k = 0; k < dim; ++k) {
            c[k].resize(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) c[k][i] = pts[i][k];
            ptr[k] = c[k].data();
        }
    }
};

void pair_batch(const std::vector<Point>& xs, const std::vector<Point>& ys,
                std::vector<double>& dist, std::vector<double>& nx, std::vector<double>& ny) {
    require(!xs.empty() && xs.size() == ys.size(), "batch: point lists must match and be nonempty");
    require_same_dim(xs.front(), ys.front());
    Soa sx(xs), sy(ys);
    dist.resize(xs.size());
    nx.resize(xs.size());
    ny.resize(xs.size());
    kernels::pair_norms(sx.ptr, sy.ptr, sx.dim, xs.size(), dist.data(), nx.data(), ny.data());
}

}  // namespace

std::vector<double> rho_many(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    std::vector<double> dist, nx, ny;
    pair_batch(xs, ys, dist, nx, ny);
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        require(nx[i] < 1.0 && ny[i] < 1.0, "rho_many: points must lie in the open unit ball");
        double q = dist[i] * dist[i] /
                   ((1.0 - nx[i]) * (1.0 + nx[i]) * (1.0 - ny[i]) * (1.0 + ny[i]));
        out[i] = 2.0 * std::asinh(std::sqrt(q));
    }
    return out;
}

std::vector<double> j_ball_many(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    std::vector<double> dist, nx, ny;
    pair_batch(xs, ys, dist, nx, ny);
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        require(nx[i] < 1.0 && ny[i] < 1.0, "j_ball_many: points must lie in the open unit ball");
        out[i] = std::log1p(dist[i] / (1.0 - std::max(nx[i], ny[i])));
    }
    return out;
}

}  // namespace qrlim
