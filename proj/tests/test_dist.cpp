#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "longmem/dist.hpp"
#include "longmem/errors.hpp"
#include "longmem/rng.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace longmem;

TEST_CASE("chi-square upper tail reproduces published p-values") {
    // Statistic/p-value pairs quoted with 12 degrees of freedom; the quoted
    // statistics are rounded to 4 digits, so a little slack on p.
    const struct { double q, p; } pairs[] = {
        {17.61, 0.1279}, {17.94, 0.1176}, {20.29, 0.06178}, {20.32, 0.06127},
        {20.9, 0.05189}, {20.71, 0.05477}, {21.21, 0.04734}, {21.95, 0.03811},
        {9.205, 0.6853}, {9.118, 0.6928},  {7.942, 0.7896},
    };
    for (const auto& [q, p] : pairs)
        CHECK(chi2_upper_tail(q, 12) == doctest::Approx(p).epsilon(2e-3));
}

TEST_CASE("incomplete gamma identities") {
    for (double a : {0.5, 1.0, 6.0, 50.0}) {
        for (double x : {0.1, 1.0, 5.0, 40.0, 120.0}) {
            CHECK(gamma_p(a, x) + gamma_q(a, x) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(chi2_upper_tail(0.0, 5) == 1.0);
    // chi2(2) is exponential: Q(x) = exp(-x/2).
    for (double x : {0.5, 2.0, 10.0})
        CHECK(chi2_upper_tail(x, 2) ==
              doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-11));
    CHECK_THROWS_AS(gamma_p(-1.0, 1.0), numeric_error);
}

TEST_CASE("normal quantile inverts the CDF") {
    for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975, 1 - 1e-6}) {
        const double z = normal_quantile(p);
        CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(normal_quantile(0.0), numeric_error);
    CHECK_THROWS_AS(normal_quantile(1.0), numeric_error);
}

TEST_CASE("student-t quantiles match reference values") {
    CHECK(student_t_quantile(0.975, 5) ==
          doctest::Approx(2.5705818366).epsilon(1e-8));
    CHECK(student_t_quantile(0.95, 10) ==
          doctest::Approx(1.8124611228).epsilon(1e-8));
    CHECK(student_t_quantile(0.975, 1) ==
          doctest::Approx(12.7062047362).epsilon(1e-7));
    CHECK(student_t_quantile(0.025, 5) ==
          doctest::Approx(-2.5705818366).epsilon(1e-8));
    CHECK(student_t_quantile(0.5, 7) == 0.0);
}

TEST_CASE("standardized t density integrates to one with unit variance") {
    for (double nu : {4.0, 8.0, 30.0}) {
        auto pdf = [nu](double x) { return std::exp(std_t_logpdf(x, nu)); };
        // Compactified via x = tan(u) to cover the real line.
        auto mass = [&](double u) {
            const double x = std::tan(u);
            const double c = std::cos(u);
            return pdf(x) / (c * c);
        };
        const double lim = 1.5707963267948966 - 1e-9;
        CHECK(oracle::integrate(mass, -lim, lim, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-7));
        auto second = [&](double u) {
            const double x = std::tan(u);
            const double c = std::cos(u);
            return x * x * pdf(x) / (c * c);
        };
        CHECK(oracle::integrate(second, -lim, lim, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("standardized t absolute moment") {
    for (double nu : {5.0, 8.0, 100.0}) {
        auto g = [nu](double u) {
            const double x = std::tan(u);
            const double c = std::cos(u);
            return std::fabs(x) * std::exp(std_t_logpdf(x, nu)) / (c * c);
        };
        const double lim = 1.5707963267948966 - 1e-9;
        CHECK(std_t_abs_mean(nu) ==
              doctest::Approx(oracle::integrate(g, -lim, lim, 1e-12))
                  .epsilon(1e-7));
    }
    CHECK(std_t_abs_mean(1e8) ==
          doctest::Approx(normal_abs_mean()).epsilon(1e-6));
    CHECK_THROWS_AS(std_t_abs_mean(2.0), numeric_error);
}

TEST_CASE("portable rng stream properties") {
    Rng a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform01();
        CHECK(u == b.uniform01());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    Rng a2(123);
    CHECK(a2.next_u64() != c.next_u64());

    Rng g(7);
    double s = 0, s2 = 0, s4 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = g.gaussian();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));

    // Standardized t: unit variance, kurtosis 3(nu-2)/(nu-4).
    Rng t(11);
    s2 = s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = t.std_t(8.0);
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(s4 / n == doctest::Approx(4.5).epsilon(0.15));
}
