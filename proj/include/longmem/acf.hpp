#pragma once

#include <cstddef>
#include <vector>

namespace longmem {

// Sample autocorrelations at lags 1..max_lag with the flat i.i.d.
// confidence band used in the dependence plots.
struct AcfResult {
    std::vector<int> lags;
    std::vector<double> rho;
    double ci_halfwidth = 0.0;  // 1.96 / sqrt(n)
    std::size_t n = 0;
};

struct PortmanteauResult {
    double statistic = 0.0;
    int lags_used = 0;
    double p_value = 1.0;
};

// rho(j) = sum_{t<=n-j} (x_t - xbar)(x_{t+j} - xbar) / sum_t (x_t - xbar)^2.
// The full-sample denominator keeps |rho| <= 1.
AcfResult acf(const std::vector<double>& x, int max_lag);

// Ljung-Box Q = n(n+2) sum_{j<=m} rho(j)^2 / (n-j), p-value from the
// chi-square(m) upper tail.
PortmanteauResult ljung_box(const std::vector<double>& x, int m);

}  // namespace longmem
