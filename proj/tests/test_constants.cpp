#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "qrlim/constants.hpp"

using namespace qrlim;

TEST_CASE("b_n anchors") {
    CHECK(b_n(2) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-10));
    // independent high-precision quadrature of I = int sin^{-1/2}, frozen
    CHECK(b_n(3) == doctest::Approx(0.028559161315278977).epsilon(1e-10));
    CHECK_THROWS_AS(b_n(1), std::invalid_argument);
}

TEST_CASE("context derives its ledger and validates inputs") {
    ConstantsContext ctx(2, 1.0);
    CHECK(ctx.lambda_K == 0.25);
    CHECK(ctx.c1 == doctest::Approx(1.0 / std::log(1.25)).epsilon(1e-15));
    CHECK(ctx.c3 == doctest::Approx(4.0 * ctx.bn).epsilon(1e-15));
    CHECK(ctx.beta0 == doctest::Approx(ctx.c2 * ctx.c3 / (2.0 * ctx.c1)).epsilon(1e-14));
    CHECK(ctx.lambda_provenance == Provenance::ConfiguredDefault);

    ConstantsContext c3d(3, 2.0, 0.1);
    CHECK(c3d.c3 == doctest::Approx(8.0 * b_n(3)).epsilon(1e-12));
    CHECK(c3d.beta0 ==
          doctest::Approx(std::sqrt(c3d.c3 / (2.0 * c3d.c1))).epsilon(1e-13));

    CHECK_THROWS_AS(ConstantsContext(2, 1.0, 0.6), std::invalid_argument);   // lambda >= 1/2
    CHECK_THROWS_AS(ConstantsContext(2, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ConstantsContext(2, 0.5), std::invalid_argument);        // K < 1
    CHECK_THROWS_AS(ConstantsContext(1, 1.0), std::invalid_argument);
}

TEST_CASE("context loads from key-value files") {
    std::string path = "ctx_test.conf";
    {
        std::ofstream f(path);
        f << "# test config\nn = 3\nK = 1.5\nlambda_K = 0.3\n";
    }
    auto ctx = ConstantsContext::from_file(path);
    CHECK(ctx.n == 3);
    CHECK(ctx.K == 1.5);
    CHECK(ctx.lambda_K == 0.3);
    CHECK(ctx.lambda_provenance == Provenance::ConfiguredFile);
    CHECK(ctx.c2_provenance == Provenance::ConfiguredDefault);
    CHECK(ctx.c1 == doctest::Approx(1.0 / std::log(1.3)).epsilon(1e-15));

    {
        std::ofstream f(path);
        f << "n = 2\nbogus_key = 1\n";
    }
    CHECK_THROWS_AS(ConstantsContext::from_file(path), std::invalid_argument);
    {
        std::ofstream f(path);
        f << "lambda_K = 0.6\n";
    }
    CHECK_THROWS_AS(ConstantsContext::from_file(path), std::invalid_argument);
    std::remove(path.c_str());
    CHECK_THROWS_AS(ConstantsContext::from_file("no_such_file.conf"), std::invalid_argument);
}

TEST_CASE("beta saturates exactly at the case threshold and is monotone") {
    ConstantsContext ctx(2, 1.0);
    // with N = 1 the threshold ratio is formed without rounding: exact equality
    double q = ctx.c3 / (2.0 * ctx.c1);
    CHECK(beta(q, 1.0, ctx) == ctx.beta0);
    double N = n_bound(0.25, 0.5, false, ctx);
    double thr = ctx.c3 * N / (2.0 * ctx.c1);
    CHECK(beta(thr, N, ctx) == doctest::Approx(ctx.beta0).epsilon(1e-15));
    CHECK(beta(thr * 10, N, ctx) == ctx.beta0);
    CHECK(beta(thr * 0.5, N, ctx) < ctx.beta0);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double b = beta(thr * 2.0 * i / 100.0, N, ctx);
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("n_bound inner expressions reduce to the theorem gammas") {
    std::mt19937_64 rng(12345);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (double(rng() >> 11) * 0x1p-53);
    };
    for (int trial = 0; trial < 20; ++trial) {
        double phi = uni(0.1, 1.4);
        double lambda = uni(0.05, 0.45);
        for (int n : {2, 3}) {
            ConstantsContext ctx(n, 1.0, lambda);
            double c = std::cos(phi);
            // a = 1/4 reduces to gamma1's inner expression
            double g1 = std::pow(
                (14 * lambda * c * c + 5 * c + 40) / (7 * lambda * c * c), n);
            CHECK(n_bound(0.25, phi, false, ctx) ==
                  doctest::Approx(g1).epsilon(1e-12));
            // a = 1/2 reduces to gamma2's inner expression
            double g2 = std::pow((2 * lambda * c * c + c + 4) / (lambda * c * c), n);
            CHECK(n_bound(0.5, phi, false, ctx) == doctest::Approx(g2).epsilon(1e-12));
            // a = 1/2, r-form reduces to gamma4's inner expression
            double r = uni(0.05, 0.8);
            double g4 = std::pow((2 * lambda * r * r + r + 4) / (lambda * r * r), n);
            CHECK(n_bound(0.5, r, true, ctx) == doctest::Approx(g4).epsilon(1e-12));
        }
    }
}

TEST_CASE("theorem constants: identities and limits") {
    ConstantsContext ctx(3, 1.2);
    double phi = 0.8;
    auto lind = lindelof_constants(phi, ctx);
    CHECK(lind.alpha1 ==
          doctest::Approx((24 * ctx.c1 / std::cos(phi) + 1) / 2.0).epsilon(1e-14));
    CHECK(lind.gamma1 == doctest::Approx(n_bound(0.25, phi, false, ctx)).epsilon(1e-13));

    auto tang = tangential_constants(phi, ctx);
    CHECK(tang.gamma3 ==
          doctest::Approx(std::pow(tang.gamma2, 1.0 / (1.0 - ctx.n))).epsilon(1e-12));
    CHECK(tang.gamma2 == doctest::Approx(n_bound(0.5, phi, false, ctx)).epsilon(1e-13));

    auto koe = koebe_constants(0.2, phi, ctx);
    CHECK(koe.gamma4 == doctest::Approx(n_bound(0.5, 0.2, true, ctx)).epsilon(1e-13));
    // alpha3 diverges as r -> 0
    CHECK(koebe_constants(1e-6, phi, ctx).alpha3 > koe.alpha3);

    // gamma-form N bound is r-free; gamma~ grows like r^{-2n} as r -> 0
    double lo = n_bound(0.5, 1e-3, true, ctx), hi = n_bound(0.5, 2e-3, true, ctx);
    double slope = std::log(lo / hi) / std::log(2.0);
    CHECK(slope == doctest::Approx(2.0 * ctx.n).epsilon(0.05));

    CHECK_THROWS_AS(koebe_constants(0.9, phi, ctx), std::invalid_argument);  // r >= cos phi

    auto dump = theorem_constants(TheoremKind::Tangential, phi, 0.0, ctx);
    REQUIRE(dump.size() == 3);
    CHECK(dump[0].first == "alpha2");
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(theorem_constants(TheoremKind::Koebe, phi, nan, ctx),
                    std::invalid_argument);
}
