#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "longmem/errors.hpp"
#include "longmem/garch.hpp"
#include "longmem/rng.hpp"
#include "longmem/sim.hpp"

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace longmem;

namespace {

ParamVector garch_params(double a, double alpha, double beta, double nu = 8) {
    ParamVector p;
    p.a = a;
    p.arch1 = alpha;
    p.garch1 = beta;
    p.nu = nu;
    return p;
}

std::vector<double> simulated_garch_returns(std::uint64_t seed, std::size_t n) {
    SimConfig c;
    c.family = SimFamily::Garch11;
    c.true_params = garch_params(0.05, 0.1, 0.85);
    c.n = n;
    c.burn_in = 500;
    c.seed = seed;
    return simulate_volmodel(c).values;
}

}  // namespace

TEST_CASE("garch filter") {
    std::vector<double> eps(100, 0.3);
    const std::vector<double> flat = garch_filter(eps, garch_params(0.07, 0, 0));
    for (double s2 : flat) CHECK(s2 == 0.07);

    // Fixed point: eps^2 = 1 drives sigma2 to a0/(1-a1-b1) = 1.
    std::vector<double> ones(3000, 1.0);
    const std::vector<double> fp =
        garch_filter(ones, garch_params(0.05, 0.1, 0.85));
    CHECK(fp.back() == doctest::Approx(1.0).epsilon(1e-9));

    // Positivity floor a0.
    Rng rng(3);
    std::vector<double> r(500);
    for (double& v : r) v = rng.std_t(5.0);
    for (double s2 : garch_filter(r, garch_params(0.02, 0.2, 0.7)))
        CHECK(s2 >= 0.02);

    CHECK_THROWS_AS(garch_filter(r, garch_params(0.05, 0.6, 0.5)),
                    numeric_error);
    CHECK_THROWS_AS(garch_filter(r, garch_params(-0.1, 0.1, 0.5)),
                    numeric_error);
}

TEST_CASE("figarch filter nests garch") {
    const std::vector<double> r = simulated_garch_returns(15, 3000);
    std::vector<double> eps(r);
    const double mu = mean(r);
    for (double& v : eps) v -= mu;

    const ParamVector g = garch_params(0.08, 0.07, 0.9);
    const std::vector<double> sg = garch_filter(eps, g);
    const std::vector<double> sf = figarch_filter(eps, garch_to_figarch(g), 1000);
    // Identical after the truncation horizon; the seeding transient decays
    // like beta^t before it.
    for (std::size_t t = 1000; t < eps.size(); ++t)
        CHECK(std::fabs(sf[t] - sg[t]) <= 1e-8 * sg[t]);
}

TEST_CASE("figarch filter at the variance-consistent point is exact") {
    const std::vector<double> r = simulated_garch_returns(5, 4000);
    std::vector<double> eps(r);
    const double mu = mean(r);
    for (double& v : eps) v -= mu;
    const double v0 = variance_biased(eps);

    ParamVector g = garch_params(0.0, 0.1, 0.85);
    g.a = (1.0 - g.arch1 - g.garch1) * v0;
    const std::vector<double> sg = garch_filter(eps, g);
    const std::vector<double> sf = figarch_filter(eps, garch_to_figarch(g), 1000);
    const double ll_g = student_t_loglik(eps, sg, 8.0);
    const double ll_f = student_t_loglik(eps, sf, 8.0);
    CHECK(std::fabs(ll_g - ll_f) / eps.size() <= 1e-6);
}

TEST_CASE("figarch degenerate and rejection cases") {
    std::vector<double> eps(600, 0.5);
    eps[3] = -1.0;  // nonconstant
    ParamVector p = garch_params(0.3, 0.0, 0.0);
    p.d = 0.0;
    const std::vector<double> s2 = figarch_filter(eps, p, 100);
    for (double v : s2) CHECK(v == doctest::Approx(0.3).epsilon(1e-14));

    ParamVector bad = garch_params(0.05, 0.3, 0.5);  // phi=0.3, b=0.5
    bad.d = 0.1;                                     // lambda_1 < 0
    CHECK_THROWS_AS(figarch_filter(eps, bad, 100), numeric_error);
}

TEST_CASE("fiegarch filter") {
    std::vector<double> eps(400);
    Rng rng(9);
    for (double& v : eps) v = rng.std_t(8.0);

    // No news impact: constant variance exp(a / (1 - phi1)).
    ParamVector con;
    con.a = -0.3;
    con.garch1 = 0.4;
    con.arch1 = 0.0;
    con.leverage = 0.0;
    con.d = 0.3;
    con.nu = 8;
    for (double s2 : fiegarch_filter(eps, con, 200, Distribution::StudentT))
        CHECK(s2 == doctest::Approx(std::exp(-0.3 / 0.6)).epsilon(1e-12));

    // Leverage algebra: flipping the sign of one shock moves the next
    // log-variance by -2 * leverage * |standardized shock|.
    ParamVector p;
    p.a = -0.2;
    p.garch1 = 0.2;
    p.arch1 = 0.3;
    p.leverage = -0.06;
    p.d = 0.4;
    p.nu = 8;
    std::vector<double> plus(eps), minus(eps);
    const std::size_t j = 200;
    minus[j] = -plus[j];
    const std::vector<double> sp = fiegarch_filter(plus, p, 150, Distribution::StudentT);
    const std::vector<double> sm = fiegarch_filter(minus, p, 150, Distribution::StudentT);
    const double x = plus[j] / std::sqrt(sp[j]);
    const double diff = std::log(sm[j + 1]) - std::log(sp[j + 1]);
    CHECK(diff == doctest::Approx(2.0 * (-p.leverage) * x).epsilon(1e-10));
    CHECK(diff > 0.0);  // negative shock raises volatility more

    CHECK_THROWS_AS(fiegarch_filter(eps, garch_params(0, 0.1, 1.2), 100,
                                    Distribution::StudentT),
                    numeric_error);
}

TEST_CASE("student-t log likelihood") {
    Rng rng(14);
    std::vector<double> eps(1000);
    for (double& v : eps) v = rng.gaussian();
    std::vector<double> s2(1000, 1.3);

    // Gaussian limit.
    const double ll_t = student_t_loglik(eps, s2, 1e6);
    const double ll_g = gaussian_loglik(eps, s2);
    CHECK(std::fabs(ll_t - ll_g) <= 1e-3 * eps.size() / 1000.0);

    // Density at the mode against the quadrature-normalized value.
    const double f0 = std::exp(student_t_loglik({0.0}, {1.0}, 5.0));
    auto kernel = [](double u) {
        const double x = std::tan(u);
        const double c = std::cos(u);
        return std::pow(1.0 + x * x / 3.0, -3.0) / (c * c);
    };
    const double lim = 1.5707963267948966 - 1e-9;
    const double norm = oracle::integrate(kernel, -lim, lim, 1e-13);
    CHECK(f0 == doctest::Approx(1.0 / norm).epsilon(1e-8));

    // Scaling identity: loglik(c eps, c^2 sigma2) = loglik - n log c.
    const double c = 2.5;
    std::vector<double> eps_c(eps), s2_c(s2);
    for (double& v : eps_c) v *= c;
    for (double& v : s2_c) v *= c * c;
    CHECK(student_t_loglik(eps_c, s2_c, 7.0) ==
          doctest::Approx(student_t_loglik(eps, s2, 7.0) -
                          eps.size() * std::log(c))
              .epsilon(1e-10));

    CHECK_THROWS_AS(student_t_loglik(eps, s2, 2.0), numeric_error);
    s2[17] = 0.0;
    CHECK_THROWS_AS(student_t_loglik(eps, s2, 8.0), numeric_error);
}

TEST_CASE("information criteria") {
    const auto [aic, bic] = info_criteria(0.0, 1, 10);
    CHECK(aic == 2.0);
    CHECK(bic == doctest::Approx(std::log(10.0)));
    // Adding a parameter at n = 4175 raises BIC by ln 4175.
    const auto [a1, b1] = info_criteria(-100.0, 4, 4175);
    const auto [a2, b2] = info_criteria(-100.0, 5, 4175);
    CHECK(b2 - b1 == doctest::Approx(std::log(4175.0)).epsilon(1e-12));
    CHECK(a2 - a1 == doctest::Approx(2.0));
    CHECK_THROWS_AS(info_criteria(0.0, 0, 10), input_error);
    CHECK_THROWS_AS(info_criteria(0.0, 10, 10), input_error);
}

TEST_CASE("engle lm test") {
    // Size on iid residuals.
    int rejections = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        Rng rng(5000 + r);
        std::vector<double> z(4000);
        for (double& v : z) v = rng.gaussian();
        rejections += engle_lm(z, 12).p_value < 0.05;
    }
    CHECK(rejections >= 1);
    CHECK(rejections <= 10);

    // Power against a strong ARCH alternative.
    int detected = 0;
    for (int r = 0; r < 20; ++r) {
        SimConfig c;
        c.family = SimFamily::Garch11;
        c.true_params = garch_params(0.7, 0.3, 0.0);
        c.n = 4000;
        c.burn_in = 200;
        c.seed = 600 + r;
        const std::vector<double> x = simulate_volmodel(c).values;
        detected += engle_lm(x, 12).p_value < 0.05;
    }
    CHECK(detected >= 19);

    CHECK_THROWS_AS(engle_lm(std::vector<double>(900, 1.0), 12),
                    numeric_error);
    CHECK_THROWS_AS(engle_lm(std::vector<double>(10, 1.0), 12), input_error);
}

TEST_CASE("garch fit recovers simulated parameters across seeds") {
    int recovered = 0;
    for (int s = 0; s < 20; ++s) {
        const std::vector<double> x = simulated_garch_returns(5000 + s, 4000);
        ModelSpec ms;
        ms.family = Family::Garch;
        const ModelFit g = fit(x, ms);
        recovered += std::fabs(g.params.arch1 - 0.1) <= 0.05 &&
                     std::fabs(g.params.garch1 - 0.85) <= 0.05;
        CHECK(g.grad_inf_norm < 1e-4);
    }
    CHECK(recovered >= 18);  // >= 90% of 20 seeds
}

TEST_CASE("garch fit diagnostics and reporting") {
    const std::vector<double> r = simulated_garch_returns(33, 4000);
    ModelSpec spec;
    spec.family = Family::Garch;
    const ModelFit f = fit(r, spec);
    CHECK(f.params.arch1 == doctest::Approx(0.1).epsilon(0.05 / 0.1));
    CHECK(f.params.garch1 == doctest::Approx(0.85).epsilon(0.05 / 0.85));
    CHECK(f.grad_inf_norm < 1e-4);
    CHECK(f.se_available);
    CHECK(f.n_free_params == 4);
    CHECK(f.aic == doctest::Approx(-2.0 * f.loglik + 8.0));
    CHECK(f.bic ==
          doctest::Approx(-2.0 * f.loglik + 4.0 * std::log(4000.0)));
    for (double s2 : f.sigma2_path) CHECK(s2 > 0.0);
    const double zvar = variance_biased(f.std_residuals);
    CHECK(zvar > 0.8);
    CHECK(zvar < 1.2);
    CHECK(f.q2_12.lags_used == 12);
    CHECK(f.lm12.p_value >= 0.0);
    CHECK(f.lm12.p_value <= 1.0);
}

TEST_CASE("fit preconditions") {
    std::vector<double> tiny(100, 0.1);
    ModelSpec spec;
    spec.family = Family::Garch;
    CHECK_THROWS_AS(fit(tiny, spec), input_error);

    std::vector<double> r = simulated_garch_returns(8, 600);
    ModelSpec vol;
    vol.family = Family::Garch;
    vol.exog_volume.assign(600, 1.0);
    CHECK_THROWS_AS(fit(r, vol), input_error);

    ModelSpec mismatch;
    mismatch.family = Family::Fiegarch;
    mismatch.exog_volume.assign(7, 1.0);
    CHECK_THROWS_AS(fit(r, mismatch), input_error);
}

TEST_CASE("figarch fit log-likelihood dominates nested garch") {
    const std::vector<double> r = simulated_garch_returns(21, 1500);
    ModelSpec gs;
    gs.family = Family::Garch;
    const ModelFit g = fit(r, gs);
    ModelSpec fs;
    fs.family = Family::Figarch;
    fs.truncation_K = 400;
    const ModelFit f = fit(r, fs);
    CHECK(f.loglik >= g.loglik - 1e-6 * r.size());
}

TEST_CASE("standard errors shrink roughly like 1/sqrt(n)") {
    // Doubling the sample should cut the reported se of d by a factor
    // between 1.2 and 1.7.
    auto mean_se_d = [](std::size_t n, std::uint64_t seed_base) {
        double acc = 0.0;
        int used = 0;
        for (int r = 0; r < 3; ++r) {
            SimConfig c;
            c.family = SimFamily::Figarch1d1;
            c.true_params = garch_params(0.05, 0.2, 0.45);
            c.true_params.d = 0.35;
            c.n = n;
            c.seed = seed_base ^ (r + 1);
            c.truncation_K = 500;
            ModelSpec spec;
            spec.family = Family::Figarch;
            spec.truncation_K = 500;
            const ModelFit f = fit(simulate_volmodel(c).values, spec);
            if (!f.se_available) continue;
            // d is the second-to-last free parameter (nu is last).
            acc += f.std_errors[f.std_errors.size() - 2];
            ++used;
        }
        REQUIRE(used > 0);
        return acc / used;
    };
    const double se_small = mean_se_d(2000, 910);
    const double se_big = mean_se_d(4000, 920);
    const double factor = se_small / se_big;
    CHECK(factor > 1.2);
    CHECK(factor < 1.7);
}
