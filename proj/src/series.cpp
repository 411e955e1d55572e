#include "longmem/series.hpp"

#include "longmem/errors.hpp"

#include <cmath>
#include <string>

namespace longmem {

void PriceSeries::validate() const {
    if (dates.size() != prices.size())
        throw input_error("price series: dates and prices differ in length");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
            throw input_error("price series: nonpositive price at row " +
                              std::to_string(i + 1));
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw input_error(
                "price series: dates not strictly increasing at row " +
                std::to_string(i + 1));
    }
    if (!volume.empty() && volume.size() != prices.size())
        throw input_error("price series: volume length does not match prices");
}

ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2)
        throw input_error("log_returns: need at least 2 prices");
    prices.validate();
    ReturnSeries out;
    out.values.reserve(prices.size() - 1);
    out.dates.reserve(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        out.values.push_back(100.0 *
                             (std::log(prices.prices[t + 1]) -
                              std::log(prices.prices[t])));
        out.dates.push_back(prices.dates[t + 1]);
    }
    return out;
}

VolatilityProxy volatility_proxy(const std::vector<double>& values,
                                 ProxyBase base, double k) {
    if (!(k > 0.0)) throw input_error("volatility_proxy: power k must be > 0");
    VolatilityProxy out;
    out.base = base;
    out.power_k = k;
    // (R^2)^k == |R|^(2k); evaluating both through the same pow call makes
    // the identity hold bitwise, not just to rounding.
    const double p = (base == ProxyBase::Squared) ? 2.0 * k : k;
    out.values.reserve(values.size());
    for (double v : values) {
        const double a = std::fabs(v);
        out.values.push_back(a == 0.0 ? 0.0 : std::pow(a, p));
    }
    return out;
}

VolatilityProxy volatility_proxy(const ReturnSeries& r, ProxyBase base,
                                 double k) {
    return volatility_proxy(r.values, base, k);
}

double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance_biased(const std::vector<double>& x) {
    const double mu = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    return s / static_cast<double>(x.size());
}

double jarque_bera(double skewness, double kurtosis, std::size_t n) {
    const double excess = kurtosis - 3.0;
    return static_cast<double>(n) / 6.0 *
           (skewness * skewness + 0.25 * excess * excess);
}

SummaryStats summary_stats(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) throw input_error("summary_stats: need at least 4 observations");
    const double mu = mean(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double dn = static_cast<double>(n);
    const double ssq = m2;  // sum of squared deviations
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    if (!(m2 > 0.0))
        throw numeric_error("summary_stats: constant series, moments undefined");
    SummaryStats s;
    s.n = n;
    s.mean = mu;
    s.std_dev = std::sqrt(ssq / (dn - 1.0));
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    s.jarque_bera = jarque_bera(s.skewness, s.kurtosis, n);
    return s;
}

std::vector<double> volume_change(const PriceSeries& prices) {
    if (!prices.has_volume())
        throw input_error("volume_change: series has no volume column");
    if (prices.size() < 2)
        throw input_error("volume_change: need at least 2 observations");
    prices.validate();
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t t = 0; t < prices.volume.size(); ++t) {
        if (!(prices.volume[t] > 0.0) || !std::isfinite(prices.volume[t]))
            throw input_error("volume_change: nonpositive volume at row " +
                              std::to_string(t + 1));
    }
    for (std::size_t t = 0; t + 1 < prices.volume.size(); ++t)
        out.push_back(100.0 * (std::log(prices.volume[t + 1]) -
                               std::log(prices.volume[t])));
    return out;
}

}  // namespace longmem
