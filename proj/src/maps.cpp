#include "qrlim/maps.hpp"

#include <algorithm>
#include <cmath>

namespace qrlim {

namespace {

// unit vector orthogonal to unit b: Gram-Schmidt against the least-aligned axis
Point orthonormal_to(const Point& b) {
    std::size_t least = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
        if (std::fabs(b[i]) < std::fabs(b[least])) least = i;
    Point e(b.size(), 0.0);
    e[least] = 1.0;
    double proj = b[least];
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= proj * b[i];
    double len = norm(e);
    for (auto& c : e) c /= len;
    return e;
}

Point eval_mobius(const Point& a, const Point& x) {
    double na2 = norm_sq(a);
    double den = 1.0 - 2.0 * dot(x, a) + norm_sq(x) * na2;
    double xa2 = dist_sq(x, a);
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = ((1.0 - na2) * (x[i] - a[i]) - xa2 * a[i]) / den;
    return out;
}

Point eval_singular_inner(const Point& x) {
    // w = (1+z)/(1-z); f(z) = exp(-w)
    double re1 = 1.0 - x[0], im1 = -x[1];
    double d = re1 * re1 + im1 * im1;
    double wr = ((1.0 + x[0]) * re1 + x[1] * im1) / d;
    double wi = (x[1] * re1 - (1.0 + x[0]) * im1) / d;
    double mag = std::exp(-wr);
    return {mag * std::cos(-wi), mag * std::sin(-wi)};
}

// singular values of the 2x2 matrix [[a,b],[c,d]]
void svd2(double a, double b, double c, double d, double& smax, double& smin) {
    double q = std::hypot(a + d, b - c);
    double r = std::hypot(a - d, b + c);
    smax = (q + r) / 2.0;
    smin = std::fabs(q - r) / 2.0;
}

// eigenvalues of a symmetric 3x3 by cyclic Jacobi rotations
void sym3_eigenvalues(double m[3][3], double ev[3]) {
    for (int sweep = 0; sweep < 24; ++sweep) {
        double off = std::fabs(m[0][1]) + std::fabs(m[0][2]) + std::fabs(m[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::fabs(m[p][q]) < 1e-300) continue;
                double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double cs = 1.0 / std::sqrt(t * t + 1.0), sn = t * cs;
                for (int k = 0; k < 3; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = cs * mkp - sn * mkq;
                    m[k][q] = sn * mkp + cs * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = cs * mpk - sn * mqk;
                    m[q][k] = sn * mpk + cs * mqk;
                }
            }
    }
    ev[0] = m[0][0];
    ev[1] = m[1][1];
    ev[2] = m[2][2];
}

double det3(const std::vector<Point>& j) {
    return j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
           j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
           j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
}

}  // namespace

MapSpec MapSpec::mobius(Point a) {
    require(norm(a) < 1.0, "mobius: |a| must be < 1");
    MapSpec m;
    m.kind = Kind::Mobius;
    m.a = std::move(a);
    return m;
}

MapSpec MapSpec::radial_stretch(double alpha) {
    require(alpha >= 1.0, "radial_stretch: alpha must be >= 1");
    MapSpec m;
    m.kind = Kind::RadialStretch;
    m.alpha = alpha;
    return m;
}

MapSpec MapSpec::singular_inner() {
    MapSpec m;
    m.kind = Kind::SingularInner;
    return m;
}

Point eval_map(const MapSpec& m, const Point& x) {
    require(norm(x) < 1.0, "eval_map: point must lie in the open unit ball");
    switch (m.kind) {
        case MapSpec::Kind::Mobius:
            require_same_dim(m.a, x);
            return eval_mobius(m.a, x);
        case MapSpec::Kind::RadialStretch: {
            double nx = norm(x);
            double scale = nx > 0.0 ? std::pow(nx, m.alpha - 1.0) : (m.alpha > 1.0 ? 0.0 : 1.0);
            Point out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
            return out;
        }
        default:
            require(x.size() == 2, "singular_inner: plane only");
            return eval_singular_inner(x);
    }
}

double dilatation_estimate(const MapSpec& m, const Point& x, double h) {
    require(h > 0.0, "dilatation_estimate: h must be positive");
    require(norm(x) + h < 1.0, "dilatation_estimate: point must be interior with margin > h");
    const int n = static_cast<int>(x.size());
    require(n == 2 || n == 3, "dilatation_estimate: dimension must be 2 or 3");

    std::vector<Point> jac(n, Point(n));  // jac[i][j] = d f_i / d x_j
    Point xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        Point fp = eval_map(m, xp), fm = eval_map(m, xm);
        for (int i = 0; i < n; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }

    double det, smax, smin;
    if (n == 2) {
        det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        svd2(jac[0][0], jac[0][1], jac[1][0], jac[1][1], smax, smin);
    } else {
        det = det3(jac);
        double jtj[3][3];
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += jac[k][p] * jac[k][q];
                jtj[p][q] = s;
            }
        double ev[3];
        sym3_eigenvalues(jtj, ev);
        std::sort(ev, ev + 3);
        smin = std::sqrt(std::max(ev[0], 0.0));
        smax = std::sqrt(std::max(ev[2], 0.0));
    }
    double adet = std::fabs(det);
    if (adet < 1e-14)
        throw std::domain_error("dilatation_estimate: degenerate Jacobian at this point");
    return std::max(std::pow(smax, n) / adet, adet / std::pow(smin, n));
}

ApproachCurve ApproachCurve::radial(Point b) {
    require(std::fabs(norm(b) - 1.0) < 1e-12, "approach curve: |b| must be 1");
    ApproachCurve c;
    c.kind = Kind::Radial;
    c.b = std::move(b);
    return c;
}

ApproachCurve ApproachCurve::cone_ray(Point b, double angle) {
    require(std::fabs(norm(b) - 1.0) < 1e-12, "approach curve: |b| must be 1");
    require(angle > 0.0 && angle < M_PI / 2.0, "cone_ray: angle must lie in (0, pi/2)");
    ApproachCurve c;
    c.kind = Kind::ConeRay;
    c.b = std::move(b);
    c.angle = angle;
    return c;
}

ApproachCurve ApproachCurve::tangential_parabola(Point b) {
    require(b.size() == 2, "tangential_parabola: plane only");
    require(std::fabs(norm(b) - 1.0) < 1e-12, "approach curve: |b| must be 1");
    ApproachCurve c;
    c.kind = Kind::TangentialParabola;
    c.b = std::move(b);
    return c;
}

Point ApproachCurve::at(double t) const {
    require(t > 0.0, "approach curve: parameter must be positive");
    switch (kind) {
        case Kind::Radial: {
            Point x(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) x[i] = (1.0 - t) * b[i];
            return x;
        }
        case Kind::ConeRay: {
            Point e = orthonormal_to(b);
            Point x(b.size());
            for (std::size_t i = 0; i < b.size(); ++i)
                x[i] = b[i] + t * (-std::cos(angle) * b[i] + std::sin(angle) * e[i]);
            return x;
        }
        default: {
            // z(t) = 1 - 3t^2/2 - i t in the frame where b = 1, then rotate:
            // Re((1+z)/(1-z)) -> 2 along this curve.
            double zr = 1.0 - 1.5 * t * t, zi = -t;
            return {b[0] * zr - b[1] * zi, b[1] * zr + b[0] * zi};
        }
    }
}

std::vector<std::pair<double, double>> boundary_scan(const MapSpec& m, const ApproachCurve& curve,
                                                     const std::vector<double>& radii) {
    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (double r : radii) {
        Point x = curve.at(r);
        if (!(norm(x) < 1.0))
            throw std::invalid_argument("boundary_scan: curve exits the ball at r = " +
                                        std::to_string(r));
        out.emplace_back(r, norm(eval_map(m, x)));
    }
    return out;
}

}  // namespace qrlim
