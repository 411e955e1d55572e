#include "longmem/sim.hpp"

#include "longmem/acf.hpp"
#include "longmem/dist.hpp"
#include "longmem/errors.hpp"
#include "longmem/fracdiff.hpp"
#include "longmem/memory_tests.hpp"
#include "longmem/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace longmem {

namespace {

double draw_shock(Rng& rng, Distribution dist, double nu) {
    return dist == Distribution::StudentT ? rng.std_t(nu) : rng.gaussian();
}

int default_burn(const SimConfig& c) {
    if (c.burn_in >= 0) return c.burn_in;
    return 2 * c.truncation_K;
}

}  // namespace

SimulatedPath simulate_arfima(double d, std::size_t n, int burn_in,
                              std::uint64_t seed) {
    if (!(std::fabs(d) < 0.5))
        throw input_error("simulate_arfima: |d| must be below 0.5");
    if (burn_in < 0) throw input_error("simulate_arfima: burn_in must be >= 0");
    const std::size_t total = n + static_cast<std::size_t>(burn_in);
    const int K = std::max(burn_in, 1);
    const std::vector<double> psi = fracint_ma_coeffs(d, K);

    Rng rng(seed);
    std::vector<double> z(total);
    for (double& v : z) v = rng.gaussian();

    SimulatedPath out;
    out.seed = seed;
    out.truth.family = SimFamily::Arfima0d0;
    out.truth.arfima_d = d;
    out.truth.n = n;
    out.truth.burn_in = burn_in;
    out.truth.seed = seed;
    out.values.resize(n);
    for (std::size_t t = 0; t < total; ++t) {
        const std::size_t kmax = std::min<std::size_t>(t, psi.size() - 1);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k) acc += psi[k] * z[t - k];
        if (t >= static_cast<std::size_t>(burn_in))
            out.values[t - burn_in] = acc;
    }
    return out;
}

double arfima_theoretical_acf(double d, int lag) {
    double rho = 1.0;
    for (int k = 1; k <= lag; ++k)
        rho *= (static_cast<double>(k) - 1.0 + d) / (static_cast<double>(k) - d);
    return rho;
}

SimulatedPath simulate_volmodel(const SimConfig& config) {
    const ParamVector& p = config.true_params;
    const int burn = default_burn(config);
    const std::size_t total = config.n + static_cast<std::size_t>(burn);
    const int K = config.truncation_K;
    Rng rng(config.seed);

    SimulatedPath out;
    out.seed = config.seed;
    out.truth = config;
    out.truth.burn_in = burn;
    out.values.resize(config.n);
    out.sigma2.resize(config.n);

    auto keep = [&](std::size_t t, double r, double s2) {
        if (t >= static_cast<std::size_t>(burn)) {
            out.values[t - burn] = r;
            out.sigma2[t - burn] = s2;
        }
    };

    switch (config.family) {
        case SimFamily::Arfima0d0:
            throw input_error("simulate_volmodel: use simulate_arfima");
        case SimFamily::Garch11: {
            if (!(p.a > 0.0 && p.arch1 >= 0.0 && p.garch1 >= 0.0 &&
                  p.arch1 + p.garch1 < 1.0))
                throw input_error("simulate_volmodel: inadmissible GARCH truth");
            double s2 = p.a / (1.0 - p.arch1 - p.garch1);
            for (std::size_t t = 0; t < total; ++t) {
                const double z = draw_shock(rng, config.shock_dist, p.nu);
                const double r = std::sqrt(s2) * z;
                keep(t, r, s2);
                s2 = p.a + p.arch1 * r * r + p.garch1 * s2;
            }
            break;
        }
        case SimFamily::Figarch1d1: {
            const ArchInftyWeights w =
                arch_infty_weights(p.d, p.arch1, p.garch1, K);
            if (!w.admissible() || !(p.a > 0.0) || !(p.garch1 < 1.0))
                throw input_error("simulate_volmodel: inadmissible FIGARCH truth");
            double lam_sum = 0.0;
            for (double l : w.lambda) lam_sum += l;
            if (!(lam_sum < 1.0))
                throw input_error("simulate_volmodel: truncated weights sum to "
                                  ">= 1; raise K or lower d");
            const double omega = p.a / (1.0 - p.garch1);
            // Stationary variance of the truncated ARCH(inf) model; also the
            // pre-sample value for eps^2.
            const double v0 = omega / (1.0 - lam_sum);
            std::vector<double> eps2(total, v0);
            std::vector<double> suffix(K + 1, 0.0);
            for (int k = K; k >= 1; --k) suffix[k - 1] = suffix[k] + w.lambda[k - 1];
            for (std::size_t t = 0; t < total; ++t) {
                const std::size_t kmax = std::min<std::size_t>(t, K);
                double s2 = omega;
                for (std::size_t k = 1; k <= kmax; ++k)
                    s2 += w.lambda[k - 1] * eps2[t - k];
                if (kmax < static_cast<std::size_t>(K)) s2 += suffix[kmax] * v0;
                const double z = draw_shock(rng, config.shock_dist, p.nu);
                const double r = std::sqrt(s2) * z;
                eps2[t] = r * r;
                keep(t, r, s2);
            }
            break;
        }
        case SimFamily::Fiegarch1d1: {
            if (!(std::fabs(p.garch1) < 1.0) || !(p.d >= 0.0 && p.d < 1.0))
                throw input_error("simulate_volmodel: inadmissible FIEGARCH truth");
            const std::vector<double> ma = fracint_ma_coeffs(p.d, K);
            std::vector<double> psi(K);
            psi[0] = 1.0;
            for (int j = 1; j < K; ++j) psi[j] = p.garch1 * psi[j - 1] + ma[j];
            const double eabs = (config.shock_dist == Distribution::StudentT)
                                    ? std_t_abs_mean(p.nu)
                                    : normal_abs_mean();
            const double intercept = p.a / (1.0 - p.garch1);
            if (config.with_volume) out.volume.resize(config.n);
            std::vector<double> g(total, 0.0);
            for (std::size_t t = 0; t < total; ++t) {
                double lv = intercept;
                double vt = 0.0;
                if (config.with_volume) {
                    vt = config.volume_sd * rng.gaussian();
                    lv += p.volume_coef * vt;
                }
                const std::size_t jmax = std::min<std::size_t>(t, K);
                for (std::size_t j = 1; j <= jmax; ++j)
                    lv += psi[j - 1] * g[t - j];
                lv = std::clamp(lv, -50.0, 50.0);
                const double s2 = std::exp(lv);
                const double z = draw_shock(rng, config.shock_dist, p.nu);
                g[t] = p.leverage * z + p.arch1 * (std::fabs(z) - eabs);
                keep(t, std::sqrt(s2) * z, s2);
                if (config.with_volume && t >= static_cast<std::size_t>(burn))
                    out.volume[t - burn] = vt;
            }
            break;
        }
    }
    return out;
}

namespace {

McRep run_one_rep(const SimConfig& config, const std::string& estimator,
                  bool use_abs, std::uint64_t rep_seed, int rep_index) {
    McRep rep;
    rep.rep = rep_index;
    try {
        SimConfig rc = config;
        rc.seed = rep_seed;
        SimulatedPath path =
            (config.family == SimFamily::Arfima0d0)
                ? simulate_arfima(config.arfima_d, config.n,
                                  config.burn_in >= 0
                                      ? config.burn_in
                                      : static_cast<int>(config.n) / 2,
                                  rep_seed)
                : simulate_volmodel(rc);
        std::vector<double> x = std::move(path.values);
        if (use_abs)
            for (double& v : x) v = std::fabs(v);

        if (estimator == "gph") {
            const GphResult g = gph_estimate(x);
            rep.estimate = g.d_estimate;
            rep.statistic = g.t_statistic;
            rep.reject5 = std::fabs(g.t_statistic) > kGphCrit5;
            rep.reject1 = std::fabs(g.t_statistic) > kGphCrit1;
        } else if (estimator == "rs") {
            const RsResult r = modified_rs(x);
            rep.estimate = r.d_estimate;
            rep.statistic = r.q_stat;
            rep.reject5 = r.q_stat > kRsCrit5;
            rep.reject1 = r.q_stat > kRsCrit1;
        } else if (estimator == "rsd") {
            rep.estimate = rs_d_estimate(x, default_rs_window_grid(x.size()));
            rep.statistic = rep.estimate;
        } else if (estimator == "lb") {
            std::vector<double> x2(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) x2[i] = x[i] * x[i];
            const PortmanteauResult r = ljung_box(x2, 12);
            rep.estimate = r.p_value;
            rep.statistic = r.statistic;
            rep.reject5 = r.p_value < 0.05;
            rep.reject1 = r.p_value < 0.01;
        } else if (estimator == "lm") {
            const PortmanteauResult r = engle_lm(x, 12);
            rep.estimate = r.p_value;
            rep.statistic = r.statistic;
            rep.reject5 = r.p_value < 0.05;
            rep.reject1 = r.p_value < 0.01;
        } else {
            throw input_error("monte_carlo: unknown estimator '" + estimator +
                              "'");
        }
    } catch (const input_error&) {
        throw;  // configuration problems abort the experiment
    } catch (const std::exception& e) {
        rep.failed = true;
        rep.error = e.what();
    }
    return rep;
}

}  // namespace

std::string McSummary::to_csv() const {
    std::string out = "rep,estimate,statistic,reject5,reject1\n";
    char buf[128];
    for (const McRep& r : reps) {
        if (r.failed) {
            std::snprintf(buf, sizeof(buf), "%d,,,,\n", r.rep);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%d,%d\n", r.rep,
                          r.estimate, r.statistic, r.reject5 ? 1 : 0,
                          r.reject1 ? 1 : 0);
        }
        out += buf;
    }
    return out;
}

McSummary monte_carlo(const SimConfig& config, const std::string& estimator,
                      bool use_abs, bool split_seeds, int threads) {
    if (config.replications < 2)
        throw input_error("monte_carlo: need at least 2 replications");
    if (estimator != "gph" && estimator != "rs" && estimator != "rsd" &&
        estimator != "lb" && estimator != "lm")
        throw input_error("monte_carlo: unknown estimator '" + estimator + "'");
    const int R = config.replications;
    McSummary summary;
    summary.reps.resize(R);

    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = std::min<int>(threads, R);

    // Configuration problems (inadmissible truth, series too short for the
    // estimator) surface from the first replication; they must not escape a
    // worker thread.
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string config_error;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= R) return;
            const std::uint64_t rep_seed =
                split_seeds ? (config.seed ^ static_cast<std::uint64_t>(i + 1))
                            : config.seed;
            try {
                summary.reps[i] =
                    run_one_rep(config, estimator, use_abs, rep_seed, i + 1);
            } catch (const input_error& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (config_error.empty()) config_error = e.what();
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!config_error.empty()) throw input_error(config_error);

    double sum = 0.0, sum2 = 0.0;
    int ok = 0, r5 = 0, r1 = 0;
    for (const McRep& r : summary.reps) {
        if (r.failed) {
            ++summary.failures;
            continue;
        }
        ++ok;
        sum += r.estimate;
        sum2 += r.estimate * r.estimate;
        r5 += r.reject5 ? 1 : 0;
        r1 += r.reject1 ? 1 : 0;
    }
    if (ok > 0) {
        summary.mean_estimate = sum / ok;
        const double var =
            std::max(0.0, sum2 / ok - summary.mean_estimate * summary.mean_estimate);
        summary.sd_estimate = std::sqrt(var * ok / std::max(1, ok - 1));
        summary.reject5_rate = static_cast<double>(r5) / ok;
        summary.reject1_rate = static_cast<double>(r1) / ok;
    }
    return summary;
}

}  // namespace longmem
