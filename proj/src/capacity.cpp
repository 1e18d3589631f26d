#include "qrlim/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qrlim/kernels/kernels.hpp"

namespace qrlim {

double unit_ball_volume(int n) {
    require(n >= 1, "unit_ball_volume: n must be >= 1");
    return std::pow(M_PI, n / 2.0) / std::tgamma(1.0 + n / 2.0);
}

double sphere_surface_area(int n) {
    require(n >= 1, "sphere_surface_area: n must be >= 1");
    return n * unit_ball_volume(n);
}

double ring_capacity_exact(int n, double inner, double outer) {
    require(n == 2 || n == 3, "ring_capacity_exact: n must be 2 or 3");
    require(inner > 0.0 && outer > inner, "ring_capacity_exact: need 0 < inner < outer");
    return sphere_surface_area(n) * std::pow(std::log(outer / inner), 1.0 - n);
}

std::size_t CondenserGrid::cell_count() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
}

std::size_t CondenserGrid::index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * z);
}

void CondenserGrid::validate() const {
    require(n == 2 || n == 3, "CondenserGrid: n must be 2 or 3");
    require(cell_size > 0.0, "CondenserGrid: cell_size must be positive");
    require(dims[0] >= 3 && dims[1] >= 3, "CondenserGrid: dims too small");
    if (n == 2)
        require(dims[2] == 1, "CondenserGrid: 2-D grid must have dims[2] == 1");
    else
        require(dims[2] >= 3, "CondenserGrid: dims too small");
    require(cells.size() == cell_count(), "CondenserGrid: cell array size mismatch");
    bool has_c = false;
    for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y)
            for (int x = 0; x < dims[0]; ++x) {
                CellKind k = cells[index(x, y, z)];
                if (k == CellKind::InC) has_c = true;
                if (k == CellKind::Outside) continue;
                bool edge = (x == 0 || x == dims[0] - 1 || y == 0 || y == dims[1] - 1 ||
                             (n == 3 && (z == 0 || z == dims[2] - 1)));
                require(!edge, "CondenserGrid: non-Outside cell on the box boundary");
            }
    require(has_c, "CondenserGrid: the plate C is empty");
}

CondenserGrid CondenserGrid::build(int n, const Point& lo, const std::array<int, 3>& dims,
                                   double h, const std::function<CellKind(const Point&)>& classify) {
    require(n == 2 || n == 3, "CondenserGrid: n must be 2 or 3");
    require(static_cast<int>(lo.size()) == n, "CondenserGrid: lo dimension mismatch");
    CondenserGrid g;
    g.n = n;
    g.cell_size = h;
    g.dims = dims;
    if (n == 2) g.dims[2] = 1;
    g.cells.resize(g.cell_count());
    Point p(static_cast<std::size_t>(n));
    for (int z = 0; z < g.dims[2]; ++z)
        for (int y = 0; y < g.dims[1]; ++y)
            for (int x = 0; x < g.dims[0]; ++x) {
                p[0] = lo[0] + (x + 0.5) * h;
                p[1] = lo[1] + (y + 0.5) * h;
                if (n == 3) p[2] = lo[2] + (z + 0.5) * h;
                g.cells[g.index(x, y, z)] = classify(p);
            }
    return g;
}

void CondenserGrid::save(std::ostream& os) const {
    os.precision(17);  // cell_size must round-trip exactly
    os << n << ' ' << cell_size;
    for (int k = 0; k < n; ++k) os << ' ' << dims[k];
    os << '\n';
    const char tok[3] = {'O', 'A', 'C'};
    std::size_t i = 0;
    for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y) {
            for (int x = 0; x < dims[0]; ++x, ++i) {
                if (x) os << ' ';
                os << tok[static_cast<int>(cells[i])];
            }
            os << '\n';
        }
}

CondenserGrid CondenserGrid::load(std::istream& is) {
    CondenserGrid g;
    if (!(is >> g.n >> g.cell_size)) throw std::invalid_argument("grid: malformed header");
    require(g.n == 2 || g.n == 3, "grid: n must be 2 or 3");
    g.dims = {1, 1, 1};
    for (int k = 0; k < g.n; ++k)
        if (!(is >> g.dims[k])) throw std::invalid_argument("grid: malformed header dims");
    g.cells.resize(g.cell_count());
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        std::string tok;
        if (!(is >> tok) || tok.size() != 1)
            throw std::invalid_argument("grid: malformed cell token at index " + std::to_string(i));
        switch (tok[0]) {
            case 'O': g.cells[i] = CellKind::Outside; break;
            case 'A': g.cells[i] = CellKind::InA; break;
            case 'C': g.cells[i] = CellKind::InC; break;
            default:
                throw std::invalid_argument("grid: unknown cell token '" + tok + "'");
        }
    }
    g.validate();
    return g;
}

namespace {

struct Solver {
    const CondenserGrid& g;
    std::vector<double> u;
    std::size_t sy, sz;

    explicit Solver(const CondenserGrid& grid) : g(grid) {
        sy = static_cast<std::size_t>(g.dims[0]);
        sz = sy * static_cast<std::size_t>(g.dims[1]);
        u.assign(g.cell_count(), 0.0);
        for (std::size_t i = 0; i < u.size(); ++i)
            if (g.cells[i] == CellKind::InC) u[i] = 1.0;
    }

    double energy() const {
        return kernels::grad_energy_sum(u.data(), g.dims[0], g.dims[1], g.dims[2], g.n);
    }

    // One Newton-damped local minimization of the 3-energy in a single cell.
    double local_update_p3(std::size_t i) const {
        const double uE = u[i + 1], uW = u[i - 1];
        const double uN = u[i + sy], uS = u[i - sy];
        const double uU = u[i + sz], uD = u[i - sz];
        // Off-center values entering the west/south/down gradients.
        const double uWN = u[i - 1 + sy], uWU = u[i - 1 + sz];
        const double uSE = u[i - sy + 1], uSU = u[i - sy + sz];
        const double uDE = u[i - sz + 1], uDN = u[i - sz + sy];
        double v = u[i];
        for (int it = 0; it < 2; ++it) {
            double g0x = uE - v, g0y = uN - v, g0z = uU - v;
            double gWx = v - uW, gWy = uWN - uW, gWz = uWU - uW;
            double gSx = uSE - uS, gSy = v - uS, gSz = uSU - uS;
            double gDx = uDE - uD, gDy = uDN - uD, gDz = v - uD;
            double m0 = std::sqrt(g0x * g0x + g0y * g0y + g0z * g0z) + 1e-30;
            double mW = std::sqrt(gWx * gWx + gWy * gWy + gWz * gWz) + 1e-30;
            double mS = std::sqrt(gSx * gSx + gSy * gSy + gSz * gSz) + 1e-30;
            double mD = std::sqrt(gDx * gDx + gDy * gDy + gDz * gDz) + 1e-30;
            double s0 = g0x + g0y + g0z;
            double d1 = 3.0 * (-m0 * s0 + mW * gWx + mS * gSy + mD * gDz);
            double d2 = 3.0 * (s0 * s0 / m0 + 3.0 * m0 + mW + gWx * gWx / mW + mS +
                               gSy * gSy / mS + mD + gDz * gDz / mD);
            if (d2 < 1e-30) break;
            v -= d1 / d2;
        }
        return std::clamp(v, 0.0, 1.0);
    }

    void sweep(double omega) {
        const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
        for (int color = 0; color < 2; ++color) {
            for (int z = 0; z < nz; ++z)
                for (int y = 0; y < ny; ++y) {
                    std::size_t row = static_cast<std::size_t>(z) * sz +
                                      static_cast<std::size_t>(y) * sy;
                    for (int x = 0; x < nx; ++x) {
                        if (((x + y + z) & 1) != color) continue;
                        std::size_t i = row + static_cast<std::size_t>(x);
                        if (g.cells[i] != CellKind::InA) continue;
                        double target;
                        if (g.n == 2)
                            target = 0.25 * (u[i + 1] + u[i - 1] + u[i + sy] + u[i - sy]);
                        else
                            target = local_update_p3(i);
                        u[i] = std::clamp(u[i] + omega * (target - u[i]), 0.0, 1.0);
                    }
                }
        }
    }
};

CondenserGrid coarsen(const CondenserGrid& fine) {
    CondenserGrid c;
    c.n = fine.n;
    c.cell_size = fine.cell_size * 2.0;
    c.dims = {(fine.dims[0] + 1) / 2, (fine.dims[1] + 1) / 2,
              fine.n == 3 ? (fine.dims[2] + 1) / 2 : 1};
    c.cells.assign(c.cell_count(), CellKind::Outside);
    for (int z = 0; z < c.dims[2]; ++z)
        for (int y = 0; y < c.dims[1]; ++y)
            for (int x = 0; x < c.dims[0]; ++x) {
                bool any_c = false, any_a = false;
                for (int dz = 0; dz < (fine.n == 3 ? 2 : 1); ++dz)
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            int fx = 2 * x + dx, fy = 2 * y + dy, fz = 2 * z + dz;
                            if (fx >= fine.dims[0] || fy >= fine.dims[1] || fz >= fine.dims[2])
                                continue;
                            CellKind k = fine.cells[fine.index(fx, fy, fz)];
                            any_c |= (k == CellKind::InC);
                            any_a |= (k == CellKind::InA);
                        }
                bool edge = (x == 0 || x == c.dims[0] - 1 || y == 0 || y == c.dims[1] - 1 ||
                             (c.n == 3 && (z == 0 || z == c.dims[2] - 1)));
                CellKind k = any_c ? CellKind::InC : (any_a ? CellKind::InA : CellKind::Outside);
                if (edge && k == CellKind::InA) k = CellKind::Outside;
                c.cells[c.index(x, y, z)] = k;
            }
    return c;
}

double run_solver(const CondenserGrid& grid, Solver& s, double tol, const CapacityOptions& opts);

// Coarse-grid initial guess; falls back to zeros on tiny grids or when the
// coarse plate degenerates.
void cascade_init(const CondenserGrid& grid, Solver& s, double tol, const CapacityOptions& opts) {
    int mind = std::min(grid.dims[0], std::min(grid.dims[1], grid.n == 3 ? grid.dims[2] : 1 << 30));
    if (mind < 16) return;
    CondenserGrid coarse = coarsen(grid);
    bool has_c = false;
    for (CellKind k : coarse.cells) has_c |= (k == CellKind::InC);
    if (!has_c) return;
    Solver cs(coarse);
    CapacityOptions copts = opts;
    copts.max_sweeps = opts.max_sweeps;
    try {
        cascade_init(coarse, cs, tol * 4.0, copts);
        run_solver(coarse, cs, tol * 4.0, copts);
    } catch (const ConvergenceError&) {
        // Initialization only; a stalled coarse solve is still a usable guess.
    }
    for (int z = 0; z < grid.dims[2]; ++z)
        for (int y = 0; y < grid.dims[1]; ++y)
            for (int x = 0; x < grid.dims[0]; ++x) {
                std::size_t i = grid.index(x, y, z);
                if (grid.cells[i] != CellKind::InA) continue;
                int cx = std::min(x / 2, coarse.dims[0] - 1);
                int cy = std::min(y / 2, coarse.dims[1] - 1);
                int cz = std::min(z / 2, coarse.dims[2] - 1);
                s.u[i] = std::clamp(cs.u[coarse.index(cx, cy, cz)], 0.0, 1.0);
            }
}

double run_solver(const CondenserGrid& grid, Solver& s, double tol, const CapacityOptions& opts) {
    int maxdim = std::max(grid.dims[0], std::max(grid.dims[1], grid.dims[2]));
    double omega = opts.over_relax;
    if (omega <= 0.0)
        omega = (grid.n == 2) ? 2.0 / (1.0 + std::sin(M_PI / maxdim)) : 1.6;
    double prev = s.energy();
    for (int done = 0; done < opts.max_sweeps; done += opts.check_every) {
        for (int k = 0; k < opts.check_every; ++k) s.sweep(omega);
        double cur = s.energy();
        if (prev - cur < tol) return cur;
        prev = cur;
    }
    throw ConvergenceError("capacity_estimate: sweep cap reached before tolerance", prev, prev);
}

}  // namespace

double capacity_estimate(const CondenserGrid& grid, double tol, const CapacityOptions& opts) {
    require(tol > 0.0, "capacity_estimate: tol must be positive");
    grid.validate();
    Solver s(grid);
    if (opts.cascade) cascade_init(grid, s, tol, opts);
    return run_solver(grid, s, tol, opts);
}

CondenserGrid make_ring_grid(int n, double inner, double outer, int cells_across_outer_radius) {
    require(n == 2 || n == 3, "make_ring_grid: n must be 2 or 3");
    require(inner > 0.0 && outer > inner, "make_ring_grid: need 0 < inner < outer");
    require(cells_across_outer_radius >= 8, "make_ring_grid: resolution too low");
    const int R = cells_across_outer_radius;
    const double h = outer / R;              // physical cell size
    const double half = R + 2.5;             // lattice half-width incl. padding
    const int d = 2 * R + 5;
    std::array<int, 3> dims{d, d, n == 3 ? d : 1};
    Point lo(static_cast<std::size_t>(n), -half * h);
    const double rin = inner, rout = outer;
    auto classify = [&](const Point& p) {
        double r = norm(p);
        if (r <= rin) return CellKind::InC;
        if (r < rout) return CellKind::InA;
        return CellKind::Outside;
    };
    return CondenserGrid::build(n, lo, dims, h, classify);
}

DensityProfile cap_density_profile(const std::function<bool(const Point&)>& in_E, const Point& b,
                                   const std::vector<double>& radii, int resolution,
                                   double solver_tol) {
    require(static_cast<bool>(in_E), "cap_density_profile: membership predicate required");
    const int n = static_cast<int>(b.size());
    require(n == 2 || n == 3, "cap_density_profile: dimension must be 2 or 3");
    require(resolution >= 16, "cap_density_profile: need >= 16 cells across the diameter");
    require(!radii.empty(), "cap_density_profile: radii must be nonempty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require(radii[i] > 0.0, "cap_density_profile: radii must be positive");
        if (i) require(radii[i] < radii[i - 1], "cap_density_profile: radii must decrease");
    }

    DensityProfile prof;
    prof.center = b;
    prof.radii = radii;
    for (double r : radii) {
        const double h = 4.0 * r / resolution;
        const int d = resolution + 5;
        const double half = resolution / 2.0 + 2.5;
        Point lo(b);
        for (auto& c : lo) c -= half * h;
        std::array<int, 3> dims{d, d, n == 3 ? d : 1};
        bool any_c = false;
        auto classify = [&](const Point& p) {
            double pr = dist(p, b);
            if (pr >= 2.0 * r) return CellKind::Outside;
            if (pr <= r && in_E(p)) {
                any_c = true;
                return CellKind::InC;
            }
            return CellKind::InA;
        };
        CondenserGrid grid = CondenserGrid::build(n, lo, dims, h, classify);
        if (!any_c) {
            prof.values.push_back(0.0);
            prof.empty_at_r.push_back(true);
            continue;
        }
        prof.values.push_back(capacity_estimate(grid, solver_tol));
        prof.empty_at_r.push_back(false);
    }
    return prof;
}

}  // namespace qrlim
