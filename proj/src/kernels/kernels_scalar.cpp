#include "qrlim/kernels/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace qrlim::kernels {

void pair_norms_scalar(const double* const* xs, const double* const* ys, int dim,
                       std::size_t count, double* dist, double* nx, double* ny) {
    for (std::size_t i = 0; i < count; ++i) {
        double d2 = 0.0, x2 = 0.0, y2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            double xv = xs[k][i];
            double yv = ys[k][i];
            double dv = xv - yv;
            d2 += dv * dv;
            x2 += xv * xv;
            y2 += yv * yv;
        }
        dist[i] = std::sqrt(d2);
        nx[i] = std::sqrt(x2);
        ny[i] = std::sqrt(y2);
    }
}

double grad_energy_sum_scalar(const double* u, int nx, int ny, int nz, int p) {
    double sum = 0.0;
    const std::size_t sx = 1;
    const std::size_t sy = static_cast<std::size_t>(nx);
    const std::size_t sz = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            std::size_t row = static_cast<std::size_t>(z) * sz + static_cast<std::size_t>(y) * sy;
            for (int x = 0; x < nx; ++x) {
                std::size_t i = row + static_cast<std::size_t>(x) * sx;
                double c = u[i];
                double dx = (x + 1 < nx ? u[i + sx] : 0.0) - c;
                double dy = (y + 1 < ny ? u[i + sy] : 0.0) - c;
                double g2 = dx * dx + dy * dy;
                if (p == 3) {
                    double dz = (z + 1 < nz ? u[i + sz] : 0.0) - c;
                    g2 += dz * dz;
                    sum += g2 * std::sqrt(g2);
                } else {
                    sum += g2;
                }
            }
        }
    }
    return sum;
}

namespace {

bool detect_avx2() {
#if defined(QRLIM_HAVE_AVX2)
    if (std::getenv("QRLIM_FORCE_SCALAR") != nullptr) return false;
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
#else
    return false;
#endif
}

}  // namespace

bool avx2_active() {
    static const bool active = detect_avx2();
    return active;
}

const char* active_isa_name() { return avx2_active() ? "avx2" : "scalar"; }

void pair_norms(const double* const* xs, const double* const* ys, int dim,
                std::size_t count, double* dist, double* nx, double* ny) {
#if defined(QRLIM_HAVE_AVX2)
    if (avx2_active()) {
        pair_norms_avx2(xs, ys, dim, count, dist, nx, ny);
        return;
    }
#endif
    pair_norms_scalar(xs, ys, dim, count, dist, nx, ny);
}

double grad_energy_sum(const double* u, int nx, int ny, int nz, int p) {
#if defined(QRLIM_HAVE_AVX2)
    if (avx2_active()) return grad_energy_sum_avx2(u, nx, ny, nz, p);
#endif
    return grad_energy_sum_scalar(u, nx, ny, nz, p);
}

}  // namespace qrlim::kernels
