#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "longmem/acf.hpp"
#include "longmem/errors.hpp"
#include "longmem/garch.hpp"
#include "longmem/memory_tests.hpp"
#include "longmem/rng.hpp"
#include "longmem/sim.hpp"

#include <cmath>
#include <vector>

using namespace longmem;

TEST_CASE("simulation is bit-reproducible under a fixed seed") {
    SimConfig c;
    c.family = SimFamily::Figarch1d1;
    c.true_params.a = 0.05;
    c.true_params.arch1 = 0.2;
    c.true_params.garch1 = 0.45;
    c.true_params.d = 0.35;
    c.n = 1024;
    c.truncation_K = 500;
    c.seed = 42;
    const SimulatedPath a = simulate_volmodel(c);
    const SimulatedPath b = simulate_volmodel(c);
    CHECK(a.values == b.values);
    CHECK(a.sigma2 == b.sigma2);
    c.seed = 43;
    CHECK(simulate_volmodel(c).values != a.values);
}

TEST_CASE("arfima with d = 0 is the raw gaussian stream") {
    const int burn = 64;
    const SimulatedPath p = simulate_arfima(0.0, 256, burn, 7);
    Rng rng(7);
    for (int t = 0; t < burn; ++t) rng.gaussian();
    for (double v : p.values) CHECK(v == rng.gaussian());
}

TEST_CASE("arfima rejects |d| >= 0.5 and negative burn-in") {
    CHECK_THROWS_AS(simulate_arfima(0.5, 100, 10, 1), input_error);
    CHECK_THROWS_AS(simulate_arfima(-0.6, 100, 10, 1), input_error);
    CHECK_THROWS_AS(simulate_arfima(0.3, 100, -1, 1), input_error);
}

TEST_CASE("antipersistent paths show negative first autocorrelation") {
    int negative = 0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
        const SimulatedPath p = simulate_arfima(-0.3, 4096, 2048, 1700 ^ (r + 1));
        negative += acf(p.values, 1).rho[0] < 0.0;
    }
    CHECK(negative >= 38);
}

TEST_CASE("generated arfima matches the theoretical acf") {
    // rho(j) = prod_{k<=j} (k-1+d)/(k-d); the generator is checked with
    // known-mean autocovariances so the comparison is free of the
    // sample-mean bias of order Var(xbar)/gamma0 ~ n^{2d-1}.
    const double d = 0.3;
    const int reps = 200, L = 20;
    const std::size_t n = 4096;
    std::vector<double> acc_known(L, 0.0), acc_plain(L, 0.0);
    for (int r = 0; r < reps; ++r) {
        const SimulatedPath p = simulate_arfima(d, n, 4096, 2500 ^ (r + 1));
        double g0 = 0.0;
        for (double v : p.values) g0 += v * v;
        for (int j = 1; j <= L; ++j) {
            double gj = 0.0;
            for (std::size_t t = 0; t + j < n; ++t)
                gj += p.values[t] * p.values[t + j];
            acc_known[j - 1] += (gj / n) / (g0 / n);
        }
        const AcfResult a = acf(p.values, L);
        for (int j = 0; j < L; ++j) acc_plain[j] += a.rho[j];
    }
    for (int j = 1; j <= L; ++j) {
        const double theory = arfima_theoretical_acf(d, j);
        CHECK(std::fabs(acc_known[j - 1] / reps - theory) <= 0.03);
        // The plain sample ACF carries the mean-estimation bias
        // (~0.033 at this n and d) on top of the generator truth.
        CHECK(std::fabs(acc_plain[j - 1] / reps - theory) <= 0.045);
    }
    CHECK(arfima_theoretical_acf(d, 1) == doctest::Approx(d / (1.0 - d)));
}

TEST_CASE("garch shocks with no dynamics reproduce t kurtosis") {
    SimConfig c;
    c.family = SimFamily::Garch11;
    c.true_params.a = 1.0;
    c.true_params.arch1 = 0.0;
    c.true_params.garch1 = 0.0;
    c.true_params.nu = 8.0;
    c.n = 100000;
    c.burn_in = 10;
    c.seed = 5;
    const SimulatedPath p = simulate_volmodel(c);
    const SummaryStats s = summary_stats(p.values);
    CHECK(s.kurtosis == doctest::Approx(4.5).epsilon(0.15));
    CHECK(s.std_dev == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("figarch paths re-fed to the filter reproduce sigma2 after K") {
    SimConfig c;
    c.family = SimFamily::Figarch1d1;
    c.true_params.a = 0.05;
    c.true_params.arch1 = 0.2;
    c.true_params.garch1 = 0.45;
    c.true_params.d = 0.35;
    c.n = 3000;
    c.truncation_K = 800;
    c.seed = 77;
    const SimulatedPath p = simulate_volmodel(c);
    // True mean is zero, so the values are already the innovations.
    const std::vector<double> s2 =
        figarch_filter(p.values, c.true_params, c.truncation_K);
    for (std::size_t t = c.truncation_K; t < p.values.size(); ++t)
        CHECK(std::fabs(s2[t] - p.sigma2[t]) <= 1e-8 * p.sigma2[t]);
}

TEST_CASE("figarch volatility carries long memory, returns do not") {
    SimConfig c;
    c.family = SimFamily::Figarch1d1;
    c.true_params.a = 0.05;
    c.true_params.arch1 = 0.2;
    c.true_params.garch1 = 0.45;
    c.true_params.d = 0.35;
    c.n = 4096;
    c.seed = 11;
    c.replications = 30;
    const McSummary vol = monte_carlo(c, "rs", /*use_abs=*/true);
    CHECK(vol.reject1_rate >= 0.9);
    const McSummary raw = monte_carlo(c, "rs", /*use_abs=*/false);
    CHECK(raw.reject5_rate <= 0.15);
}

TEST_CASE("fiegarch co-generates an exogenous volume regressor") {
    SimConfig c;
    c.family = SimFamily::Fiegarch1d1;
    c.true_params.a = -0.25;
    c.true_params.arch1 = 0.33;
    c.true_params.garch1 = 0.13;
    c.true_params.leverage = -0.06;
    c.true_params.d = 0.55;
    c.true_params.volume_coef = 0.02;
    c.with_volume = true;
    c.n = 8000;
    c.seed = 123;
    const SimulatedPath p = simulate_volmodel(c);
    REQUIRE(p.volume.size() == p.values.size());
    const SummaryStats vs = summary_stats(p.volume);
    CHECK(vs.std_dev == doctest::Approx(c.volume_sd).epsilon(0.05));
    // Positive coefficient: log variance co-moves with the regressor.
    double cov = 0.0;
    for (std::size_t t = 0; t < p.values.size(); ++t)
        cov += p.volume[t] * std::log(p.sigma2[t]);
    CHECK(cov / p.values.size() > 0.0);
}

TEST_CASE("monte carlo harness") {
    SimConfig c;
    c.family = SimFamily::Arfima0d0;
    c.arfima_d = 0.0;
    c.n = 512;
    c.burn_in = 256;
    c.seed = 9;
    c.replications = 16;

    // Splitting disabled: every replication reuses the base seed.
    const McSummary same = monte_carlo(c, "gph", false, /*split_seeds=*/false);
    for (const McRep& r : same.reps)
        CHECK(r.estimate == same.reps[0].estimate);
    CHECK(same.sd_estimate == doctest::Approx(0.0));

    // Split seeds: deterministic but distinct, and thread-count invariant.
    const McSummary s1 = monte_carlo(c, "gph", false, true, 1);
    const McSummary s2 = monte_carlo(c, "gph", false, true, 2);
    CHECK(s1.mean_estimate == s2.mean_estimate);
    CHECK(s1.reps[3].estimate == s2.reps[3].estimate);
    CHECK(s1.reps[0].estimate != s1.reps[1].estimate);
    CHECK(s1.failures == 0);

    const std::string csv = s1.to_csv();
    CHECK(csv.rfind("rep,estimate,statistic,reject5,reject1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);

    CHECK_THROWS_AS(monte_carlo(SimConfig{}, "gph"), input_error);  // reps < 2
    SimConfig bad = c;
    bad.replications = 4;
    CHECK_THROWS_AS(monte_carlo(bad, "nonsense"), input_error);
}
