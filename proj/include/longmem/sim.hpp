#pragma once

#include "longmem/garch.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace longmem {

enum class SimFamily { Arfima0d0, Garch11, Figarch1d1, Fiegarch1d1 };

struct SimConfig {
    SimFamily family = SimFamily::Arfima0d0;
    ParamVector true_params;      // volatility families
    double arfima_d = 0.0;        // Arfima0d0
    std::size_t n = 4096;
    int burn_in = -1;             // < 0: family default (2x truncation)
    std::uint64_t seed = 1;
    int replications = 1;
    int truncation_K = 1000;
    Distribution shock_dist = Distribution::StudentT;
    bool with_volume = false;     // Fiegarch: co-generate a volume regressor
    double volume_sd = 20.0;      // percent scale of the synthetic regressor
};

struct SimulatedPath {
    std::vector<double> values;   // returns (or the ARFIMA level series)
    std::vector<double> sigma2;   // generator-internal variance path
    std::vector<double> volume;   // co-generated regressor, when configured
    SimConfig truth;
    std::uint64_t seed = 0;
};

// (1-L)^{-d} applied to Gaussian noise through the truncated MA expansion
// psi_k = psi_{k-1} (k-1+d)/k; truncation equals the burn-in, and the first
// burn_in points are discarded.
SimulatedPath simulate_arfima(double d, std::size_t n, int burn_in,
                              std::uint64_t seed);

// Runs the configured variance filter forward on standardized shocks,
// r_t = sigma_t z_t.
SimulatedPath simulate_volmodel(const SimConfig& config);

// Theoretical ARFIMA(0,d,0) autocorrelation rho(j) = prod_{k<=j} (k-1+d)/(k-d).
double arfima_theoretical_acf(double d, int lag);

// One Monte Carlo replication row.
struct McRep {
    int rep = 0;
    double estimate = 0.0;   // d estimate, or the p-value for lb/lm
    double statistic = 0.0;  // test statistic
    bool reject5 = false;
    bool reject1 = false;
    bool failed = false;
    std::string error;
};

struct McSummary {
    std::vector<McRep> reps;
    double mean_estimate = 0.0;
    double sd_estimate = 0.0;
    double reject5_rate = 0.0;
    double reject1_rate = 0.0;
    int failures = 0;

    std::string to_csv() const;  // rep,estimate,statistic,reject5,reject1
};

// Estimator tags: "gph", "rs", "rsd", "lb", "lm". Replication r (1-based)
// draws its path from seed XOR r unless splitting is disabled, in which case
// every replication reuses the base seed. `use_abs` applies the estimator to
// |values| (the k=1 volatility proxy).
McSummary monte_carlo(const SimConfig& config, const std::string& estimator,
                      bool use_abs = false, bool split_seeds = true,
                      int threads = 0);

}  // namespace longmem
