#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "longmem/errors.hpp"
#include "longmem/memory_tests.hpp"
#include "longmem/rng.hpp"
#include "longmem/series.hpp"
#include "longmem/sim.hpp"
#include "longmem/spectrum.hpp"

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace longmem;

TEST_CASE("newey-west long-run variance") {
    Rng rng(2);
    std::vector<double> x(500);
    for (double& v : x) v = rng.std_t(6.0);

    // q = 0 is the divide-by-n sample variance.
    CHECK(newey_west_lrv(x, 0) == doctest::Approx(variance_biased(x)).epsilon(1e-14));

    // Hand example: gamma0 = 1, gamma1 = -0.75, Bartlett weight 1/2.
    CHECK(newey_west_lrv({1, -1, 1, -1}, 1) == doctest::Approx(0.25).epsilon(1e-14));

    // Cross-check against brute-force autocovariances.
    for (int q : {1, 3, 7}) {
        double ref = oracle::autocov(x, 0);
        for (int j = 1; j <= q; ++j)
            ref += 2.0 * (1.0 - j / (q + 1.0)) * oracle::autocov(x, j);
        CHECK(newey_west_lrv(x, q) == doctest::Approx(ref).epsilon(1e-12));
    }

    CHECK_THROWS_AS(newey_west_lrv(std::vector<double>(100, 3.0), 2),
                    numeric_error);
    CHECK_THROWS_AS(newey_west_lrv(x, -1), input_error);
    CHECK_THROWS_AS(newey_west_lrv(x, 500), input_error);
}

TEST_CASE("newey-west matches the AR(1) long-run variance") {
    const double phi = 0.5;
    Rng rng(44);
    const int n = 100000;
    std::vector<double> x(n);
    double prev = 0.0;
    for (double& v : x) {
        prev = phi * prev + rng.gaussian();
        v = prev;
    }
    const double lrv = newey_west_lrv(x, 20);
    const double target = variance_biased(x) * (1.0 + phi) / (1.0 - phi);
    CHECK(lrv == doctest::Approx(target).epsilon(0.10));
}

TEST_CASE("automatic bandwidth rule") {
    CHECK(newey_west_auto_bandwidth(4175) == 9);
    CHECK(newey_west_auto_bandwidth(100) == 4);
}

TEST_CASE("modified R/S statistic") {
    Rng rng(10);
    std::vector<double> x(2000);
    for (double& v : x) v = rng.gaussian();

    const RsResult base = modified_rs(x);
    CHECK(base.q_stat > 0.0);
    CHECK(base.bandwidth_q == newey_west_auto_bandwidth(2000));

    // Affine invariance.
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -7.0 * x[i] + 3.0;
    CHECK(modified_rs(y).q_stat == doctest::Approx(base.q_stat).epsilon(1e-10));

    CHECK_THROWS_AS(modified_rs(std::vector<double>(30, 1.0)), input_error);
}

TEST_CASE("significance thresholds are ordered") {
    // A strongly long-memory series rejects at 1%, which implies 5%.
    const SimulatedPath p = simulate_arfima(0.45, 4096, 2048, 6);
    const RsResult strong = modified_rs(p.values);
    CHECK(strong.q_stat > kRsCrit1);
    CHECK(strong.significance == Significance::One);

    Rng rng(61);
    std::vector<double> iid(4096);
    for (double& v : iid) v = rng.gaussian();
    const RsResult none = modified_rs(iid);
    CHECK(none.significance == Significance::None);
    CHECK(kRsCrit1 > kRsCrit5);
}

TEST_CASE("classical R/S d estimate") {
    // White noise: d near 0 on average.
    double dsum = 0.0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
        Rng rng(300 + r);
        std::vector<double> x(4096);
        for (double& v : x) v = rng.gaussian();
        dsum += rs_d_estimate(x, default_rs_window_grid(x.size()));
    }
    CHECK(dsum / reps == doctest::Approx(0.0).epsilon(0.1));

    // ARFIMA(0, 0.3, 0): d near 0.3 on average.
    dsum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const SimulatedPath p = simulate_arfima(0.3, 4096, 2048, 500 ^ (r + 1));
        dsum += rs_d_estimate(p.values, default_rs_window_grid(4096));
    }
    CHECK(std::fabs(dsum / reps - 0.3) <= 0.1);

    // Grid validation.
    Rng rng(1);
    std::vector<double> x(4096);
    for (double& v : x) v = rng.gaussian();
    CHECK_THROWS_AS(rs_d_estimate(x, {32, 64, 128}), input_error);
    CHECK_THROWS_AS(rs_d_estimate(x, {8, 32, 64, 128}), input_error);
    CHECK_THROWS_AS(rs_d_estimate(x, {32, 32, 64, 128}), input_error);
    CHECK_THROWS_AS(rs_d_estimate(x, {32, 64, 128, 8192}), input_error);

    CHECK(default_rs_window_grid(1024) == std::vector<int>{32, 64, 128, 256});
    CHECK(default_rs_window_grid(1000).empty());
}

TEST_CASE("lad line fit resists outliers") {
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(i);
        y.push_back(1.0 + 2.0 * i);
    }
    y[25] += 400.0;  // gross outlier
    const auto [icept, slope] = lad_fit(x, y);
    CHECK(slope == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(icept == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("gph default bandwidth") {
    CHECK(gph_default_bandwidth(4175) == 788);
    CHECK(gph_default_bandwidth(4096) == 776);
}

TEST_CASE("gph estimator") {
    Rng rng(12);
    std::vector<double> x(4096);
    for (double& v : x) v = rng.std_t(8.0);
    const GphResult g = gph_estimate(x);
    CHECK(g.bandwidth_m == 776);
    CHECK(g.d_estimate == doctest::Approx(-0.5 * g.beta1));
    CHECK(g.dropped == 0);

    // Scale invariance: only beta0 moves.
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 13.0 * x[i];
    const GphResult gy = gph_estimate(y);
    CHECK(gy.d_estimate == doctest::Approx(g.d_estimate).epsilon(1e-10));
    CHECK(gy.t_statistic == doctest::Approx(g.t_statistic).epsilon(1e-10));
    CHECK(gy.beta0 != doctest::Approx(g.beta0).epsilon(1e-3));

    CHECK_THROWS_AS(gph_estimate(std::vector<double>(100, 1.0)), input_error);
    CHECK_THROWS_AS(gph_estimate(x, 1), input_error);
    CHECK_THROWS_AS(gph_estimate(x, 3000), input_error);
    // Constant series: every ordinate is zero, all dropped, hard error.
    CHECK_THROWS_AS(gph_estimate(std::vector<double>(256, 5.0)), numeric_error);
}

TEST_CASE("fft periodogram agrees with the direct transform") {
    Rng rng(19);
    std::vector<double> x(4096);
    for (double& v : x) v = rng.gaussian();
    const std::vector<double> fast = periodogram(x, 700);
    const std::vector<double> slow = periodogram_direct(x, 700);
    for (std::size_t j = 0; j < fast.size(); ++j)
        CHECK(std::fabs(fast[j] - slow[j]) <= 1e-9 * (1.0 + std::fabs(slow[j])));

    // Non power of two lengths route to the direct transform.
    std::vector<double> odd(x.begin(), x.begin() + 4095);
    const std::vector<double> a = periodogram(odd, 300);
    const std::vector<double> b = periodogram_direct(odd, 300);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("gph recovers d on simulated long memory") {
    double dsum = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const SimulatedPath p = simulate_arfima(0.4, 4096, 4096, 900 ^ (r + 1));
        dsum += gph_estimate(p.values).d_estimate;
    }
    CHECK(dsum / reps == doctest::Approx(0.4).epsilon(0.05 / 0.4));
}

TEST_CASE("white-noise d estimates center on zero") {
    double d_gph = 0.0, d_rs = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        Rng rng(7000 + r);
        std::vector<double> x(4096);
        for (double& v : x) v = rng.gaussian();
        d_gph += gph_estimate(x).d_estimate;
        d_rs += rs_d_estimate(x, default_rs_window_grid(4096));
    }
    CHECK(std::fabs(d_gph / reps) <= 0.05);
    CHECK(std::fabs(d_rs / reps) <= 0.05);
}
