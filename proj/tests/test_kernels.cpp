#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "qrlim/kernels/kernels.hpp"

using namespace qrlim;

namespace {

struct PairBatch {
    std::vector<std::vector<double>> xs, ys;
    std::vector<const double*> xptr, yptr;
    std::size_t count;

    PairBatch(int dim, std::size_t n, unsigned seed) : xs(dim), ys(dim), count(n) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-0.7, 0.7);
        for (int d = 0; d < dim; ++d) {
            xs[d].resize(n);
            ys[d].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[d][i] = uni(rng);
                ys[d][i] = uni(rng);
            }
            xptr.push_back(xs[d].data());
            yptr.push_back(ys[d].data());
        }
    }
};

}  // namespace

TEST_CASE("pair_norms scalar kernel computes the three norms") {
    for (int dim : {2, 3}) {
        PairBatch b(dim, 37, 11 + dim);  // odd count exercises the vector tail
        std::vector<double> dist(b.count), nx(b.count), ny(b.count);
        kernels::pair_norms_scalar(b.xptr.data(), b.yptr.data(), dim, b.count, dist.data(),
                                   nx.data(), ny.data());
        for (std::size_t i = 0; i < b.count; ++i) {
            double d2 = 0, x2 = 0, y2 = 0;
            for (int d = 0; d < dim; ++d) {
                double dd = b.xs[d][i] - b.ys[d][i];
                d2 += dd * dd;
                x2 += b.xs[d][i] * b.xs[d][i];
                y2 += b.ys[d][i] * b.ys[d][i];
            }
            CHECK(dist[i] == doctest::Approx(std::sqrt(d2)).epsilon(1e-14));
            CHECK(nx[i] == doctest::Approx(std::sqrt(x2)).epsilon(1e-14));
            CHECK(ny[i] == doctest::Approx(std::sqrt(y2)).epsilon(1e-14));
        }
    }
}

TEST_CASE("dispatched pair_norms agrees with the scalar reference") {
    for (int dim : {2, 3}) {
        PairBatch b(dim, 1001, 3 + dim);
        std::vector<double> d1(b.count), x1(b.count), y1(b.count);
        std::vector<double> d2(b.count), x2(b.count), y2(b.count);
        kernels::pair_norms_scalar(b.xptr.data(), b.yptr.data(), dim, b.count, d1.data(),
                                   x1.data(), y1.data());
        kernels::pair_norms(b.xptr.data(), b.yptr.data(), dim, b.count, d2.data(), x2.data(),
                            y2.data());
        for (std::size_t i = 0; i < b.count; ++i) {
            CHECK(d2[i] == doctest::Approx(d1[i]).epsilon(1e-14));
            CHECK(x2[i] == doctest::Approx(x1[i]).epsilon(1e-14));
            CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("grad_energy_sum matches a naive loop and its dispatch") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    // p = 2 on a 2-D grid
    {
        int nx = 13, ny = 9;
        std::vector<double> u(std::size_t(nx) * ny);
        for (auto& v : u) v = uni(rng);
        double naive = 0.0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double c = u[std::size_t(j) * nx + i];
                double gx = (i + 1 < nx ? u[std::size_t(j) * nx + i + 1] : 0.0) - c;
                double gy = (j + 1 < ny ? u[std::size_t(j + 1) * nx + i] : 0.0) - c;
                naive += gx * gx + gy * gy;
            }
        double scalar = kernels::grad_energy_sum_scalar(u.data(), nx, ny, 1, 2);
        CHECK(scalar == doctest::Approx(naive).epsilon(1e-13));
        CHECK(kernels::grad_energy_sum(u.data(), nx, ny, 1, 2) ==
              doctest::Approx(scalar).epsilon(1e-13));
    }

    // p = 3 on a 3-D grid
    {
        int nx = 11, ny = 7, nz = 5;
        std::vector<double> u(std::size_t(nx) * ny * nz);
        for (auto& v : u) v = uni(rng);
        auto at = [&](int i, int j, int k) {
            return u[(std::size_t(k) * ny + j) * nx + i];
        };
        double naive = 0.0;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    double c = at(i, j, k);
                    double gx = (i + 1 < nx ? at(i + 1, j, k) : 0.0) - c;
                    double gy = (j + 1 < ny ? at(i, j + 1, k) : 0.0) - c;
                    double gz = (k + 1 < nz ? at(i, j, k + 1) : 0.0) - c;
                    naive += std::pow(gx * gx + gy * gy + gz * gz, 1.5);
                }
        double scalar = kernels::grad_energy_sum_scalar(u.data(), nx, ny, nz, 3);
        CHECK(scalar == doctest::Approx(naive).epsilon(1e-13));
        CHECK(kernels::grad_energy_sum(u.data(), nx, ny, nz, 3) ==
              doctest::Approx(scalar).epsilon(1e-13));
    }
}

TEST_CASE("dispatcher reports a coherent ISA") {
    const char* name = kernels::active_isa_name();
    REQUIRE(name != nullptr);
    if (kernels::avx2_active())
        CHECK(std::strcmp(name, "avx2") == 0);
    else
        CHECK(std::strcmp(name, "scalar") == 0);
}
