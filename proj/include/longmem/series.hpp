#pragma once

#include "longmem/dates.hpp"

#include <cstddef>
#include <vector>

namespace longmem {

// Raw price/volume observations, the only non-derived data in a run.
struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> prices;
    std::vector<double> volume;  // empty when absent

    bool has_volume() const { return !volume.empty(); }
    std::size_t size() const { return prices.size(); }

    // Checks the structural invariants: strictly increasing dates, strictly
    // positive prices, volume (if present) aligned. Throws input_error with
    // the offending row index.
    void validate() const;
};

// Percent log returns, one fewer observation than prices. Dates label the
// later of each price pair.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

enum class ProxyBase { Absolute, Squared };

// |R|^k or (R^2)^k. The squared base is evaluated as |R|^(2k) so the two
// parameterizations of the same transformation are bitwise identical, which
// the long-memory battery relies on.
struct VolatilityProxy {
    std::vector<double> values;
    ProxyBase base = ProxyBase::Absolute;
    double power_k = 1.0;
};

struct SummaryStats {
    double mean = 0.0;      // percent
    double std_dev = 0.0;   // percent, divide-by-(n-1)
    double skewness = 0.0;  // m3 / m2^1.5, divide-by-n moments
    double kurtosis = 0.0;  // m4 / m2^2, raw (Gaussian = 3)
    double jarque_bera = 0.0;
    std::size_t n = 0;
};

// R_t = 100 * (ln p_{t+1} - ln p_t).
ReturnSeries log_returns(const PriceSeries& prices);

VolatilityProxy volatility_proxy(const ReturnSeries& r, ProxyBase base,
                                 double k);
VolatilityProxy volatility_proxy(const std::vector<double>& values,
                                 ProxyBase base, double k);

SummaryStats summary_stats(const std::vector<double>& x);

// 100 * (ln v_{t+1} - ln v_t), aligned one-to-one with log_returns output.
std::vector<double> volume_change(const PriceSeries& prices);

// n/6 * (S^2 + (K-3)^2 / 4) with raw kurtosis K.
double jarque_bera(double skewness, double kurtosis, std::size_t n);

double mean(const std::vector<double>& x);
double variance_biased(const std::vector<double>& x);  // divide-by-n

}  // namespace longmem
