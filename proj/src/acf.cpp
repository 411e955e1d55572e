#include "longmem/acf.hpp"

#include "longmem/dist.hpp"
#include "longmem/errors.hpp"
#include "longmem/series.hpp"

#include <cmath>

namespace longmem {

AcfResult acf(const std::vector<double>& x, int max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 1) throw input_error("acf: max_lag must be >= 1");
    if (static_cast<std::size_t>(max_lag) >= n)
        throw input_error("acf: max_lag must be smaller than the series length");
    const double mu = mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - mu) * (v - mu);
    if (!(denom > 0.0)) throw numeric_error("acf: constant series");

    AcfResult out;
    out.n = n;
    out.ci_halfwidth = 1.96 / std::sqrt(static_cast<double>(n));
    out.lags.reserve(max_lag);
    out.rho.reserve(max_lag);
    for (int j = 1; j <= max_lag; ++j) {
        double num = 0.0;
        for (std::size_t t = 0; t + j < n; ++t)
            num += (x[t] - mu) * (x[t + j] - mu);
        out.lags.push_back(j);
        out.rho.push_back(num / denom);
    }
    return out;
}

PortmanteauResult ljung_box(const std::vector<double>& x, int m) {
    const std::size_t n = x.size();
    if (m < 1) throw input_error("ljung_box: m must be >= 1");
    if (static_cast<std::size_t>(m) >= n)
        throw input_error("ljung_box: m must be smaller than the series length");
    const AcfResult r = acf(x, m);
    const double dn = static_cast<double>(n);
    double q = 0.0;
    for (int j = 1; j <= m; ++j)
        q += r.rho[j - 1] * r.rho[j - 1] / (dn - j);
    q *= dn * (dn + 2.0);

    PortmanteauResult out;
    out.statistic = q;
    out.lags_used = m;
    out.p_value = chi2_upper_tail(q, static_cast<double>(m));
    return out;
}

}  // namespace longmem
