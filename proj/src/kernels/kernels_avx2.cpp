#include "qrlim/kernels/kernels.hpp"

#if defined(QRLIM_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace qrlim::kernels {

namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, h));
}

}  // namespace

void pair_norms_avx2(const double* const* xs, const double* const* ys, int dim,
                     std::size_t count, double* dist, double* nx, double* ny) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d d2 = _mm256_setzero_pd();
        __m256d x2 = _mm256_setzero_pd();
        __m256d y2 = _mm256_setzero_pd();
        for (int k = 0; k < dim; ++k) {
            __m256d xv = _mm256_loadu_pd(xs[k] + i);
            __m256d yv = _mm256_loadu_pd(ys[k] + i);
            __m256d dv = _mm256_sub_pd(xv, yv);
            d2 = _mm256_add_pd(d2, _mm256_mul_pd(dv, dv));
            x2 = _mm256_add_pd(x2, _mm256_mul_pd(xv, xv));
            y2 = _mm256_add_pd(y2, _mm256_mul_pd(yv, yv));
        }
        _mm256_storeu_pd(dist + i, _mm256_sqrt_pd(d2));
        _mm256_storeu_pd(nx + i, _mm256_sqrt_pd(x2));
        _mm256_storeu_pd(ny + i, _mm256_sqrt_pd(y2));
    }
    for (; i < count; ++i) {
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

double grad_energy_sum_avx2(const double* u, int nx, int ny, int nz, int p) {
    const std::size_t sy = static_cast<std::size_t>(nx);
    const std::size_t sz = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    __m256d acc = _mm256_setzero_pd();
    double tail = 0.0;
    for (int z = 0; z < nz; ++z) {
        const bool has_up = (z + 1 < nz);
        for (int y = 0; y < ny; ++y) {
            const bool has_north = (y + 1 < ny);
            std::size_t row = static_cast<std::size_t>(z) * sz + static_cast<std::size_t>(y) * sy;
            int x = 0;
            // Vector body stops one short of the row end so the shifted east
            // load stays inside the row.
            for (; has_north && (!(p == 3) || has_up) && x + 5 <= nx; x += 4) {
                std::size_t i = row + static_cast<std::size_t>(x);
                __m256d c = _mm256_loadu_pd(u + i);
                __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), c);
                __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(u + i + sy), c);
                __m256d g2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
                if (p == 3) {
                    __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(u + i + sz), c);
                    g2 = _mm256_add_pd(g2, _mm256_mul_pd(dz, dz));
                    acc = _mm256_add_pd(acc, _mm256_mul_pd(g2, _mm256_sqrt_pd(g2)));
                } else {
                    acc = _mm256_add_pd(acc, g2);
                }
            }
            for (; x < nx; ++x) {
                std::size_t i = row + static_cast<std::size_t>(x);
                double c = u[i];
                double dx = (x + 1 < nx ? u[i + 1] : 0.0) - c;
                double dy = (has_north ? u[i + sy] : 0.0) - c;
                double g2 = dx * dx + dy * dy;
                if (p == 3) {
                    double dz = (has_up ? u[i + sz] : 0.0) - c;
                    g2 += dz * dz;
                    tail += g2 * std::sqrt(g2);
                } else {
                    tail += g2;
                }
            }
        }
    }
    return hsum4(acc) + tail;
}

}  // namespace qrlim::kernels

#endif  // QRLIM_HAVE_AVX2
