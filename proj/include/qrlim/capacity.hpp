#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qrlim/common.hpp"

namespace qrlim {

enum class CellKind : std::uint8_t { Outside = 0, InA = 1, InC = 2 };

// Lattice discretization of a condenser (A, C).  Cells are classified as
// inside the plate C (potential fixed to 1), free interior of A, or outside A
// (potential fixed to 0).  The outermost cell layer must be Outside so that
// forward differences never leave the box.
struct CondenserGrid {
    int n = 2;                       // 2 or 3
    double cell_size = 1.0;
    std::array<int, 3> dims{1, 1, 1};  // dims[2] == 1 for n == 2
    std::vector<CellKind> cells;       // row-major, x fastest

    std::size_t cell_count() const;
    std::size_t index(int x, int y, int z) const;
    void validate() const;

    // Builds a grid over the box [lo, lo + dims*h) classifying each cell by
    // its center.  classify returns the kind for a center point.
    static CondenserGrid build(int n, const Point& lo, const std::array<int, 3>& dims, double h,
                               const std::function<CellKind(const Point&)>& classify);

    // Flat text format: header "n cell_size dims...", then one token per cell
    // (C, A, or O) in row-major order.
    void save(std::ostream& os) const;
    static CondenserGrid load(std::istream& is);
};

// Exact conformal capacity of the spherical ring condenser
// (B(0, outer), closed B(0, inner)): omega_{n-1} * log(outer/inner)^(1-n).
double ring_capacity_exact(int n, double inner, double outer);

// Surface area of S^{n-1} and volume of the unit n-ball.
double sphere_surface_area(int n);
double unit_ball_volume(int n);

struct CapacityOptions {
    int max_sweeps = 20000;
    int check_every = 10;       // sweeps between energy checks
    double over_relax = 0.0;    // 0 = pick automatically
    bool cascade = true;        // coarse-grid initialization
};

// Upper-bound-biased estimate of cap(A, C): minimizes the discrete n-energy
// sum |grad u|^n h^n by red-black nonlinear Gauss-Seidel sweeps over the free
// cells.  Stops when an energy check improves by less than tol; throws
// ConvergenceError when the sweep cap is hit first.
double capacity_estimate(const CondenserGrid& grid, double tol, const CapacityOptions& opts = {});

// Convenience builder for the ring condenser, rescaled so that the outer
// radius spans cells_across_outer_radius cells; pads the box by two cells.
CondenserGrid make_ring_grid(int n, double inner, double outer, int cells_across_outer_radius);

struct DensityProfile {
    Point center;
    std::vector<double> radii;        // strictly decreasing
    std::vector<double> values;       // estimated M(E, r, center)
    std::vector<bool> empty_at_r;     // true where C was empty at grid scale
};

// Finite-r capacity density profile: for each radius r, the capacity of the
// condenser (B(b, 2r), closed B(b, r) intersected with E), discretized with
// `resolution` cells across the diameter of B(b, 2r).
DensityProfile cap_density_profile(const std::function<bool(const Point&)>& in_E, const Point& b,
                                   const std::vector<double>& radii, int resolution,
                                   double solver_tol = 1e-6);

}  // namespace qrlim
