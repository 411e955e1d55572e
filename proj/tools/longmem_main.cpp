// longmem: long-memory volatility analysis of daily return series.
//
// Subcommands:
//   analyze   full battery on a price CSV (summary stats, ACFs, modified
//             R/S + GPH tests, FI(E)GARCH fits, plots, report)
//   simulate  generate a synthetic price CSV from a known-truth model
//   mc        Monte Carlo size/power/consistency experiments

#include "longmem/errors.hpp"
#include "longmem/pipeline.hpp"
#include "longmem/rng.hpp"
#include "longmem/sim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace lm = longmem;

namespace {

// Flat key=value config file ('#' comments allowed). Flags win over file
// entries, file entries win over defaults; the precedence is enforced by
// only applying a file entry when its flag was not given on the command
// line.
std::map<std::string, std::string> read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lm::input_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw lm::input_error("config line " + std::to_string(line_no) +
                                  ": expected key=value");
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

// Applies file entries for every analyze option the user did not pass as a
// flag.
void apply_config_file(const std::string& path, CLI::App* analyze,
                       lm::AnalysisConfig& cfg) {
    const auto kv = read_flat_config(path);
    const auto fresh = [&](const char* flag) {
        return analyze->get_option(flag)->count() == 0;
    };
    for (const auto& [key, value] : kv) {
        const std::string flag = "--" + key;
        if (key == "input") {
            if (fresh(flag.c_str())) cfg.input_path = value;
        } else if (key == "out") {
            if (fresh(flag.c_str())) cfg.out_dir = value;
        } else if (key == "date-col") {
            if (fresh(flag.c_str())) cfg.mapping.date_col = value;
        } else if (key == "price-col") {
            if (fresh(flag.c_str())) cfg.mapping.price_col = value;
        } else if (key == "volume-col") {
            if (fresh(flag.c_str())) cfg.mapping.volume_col = value;
        } else if (key == "powers") {
            if (fresh(flag.c_str())) cfg.powers = parse_double_list(value);
        } else if (key == "models") {
            if (fresh(flag.c_str())) cfg.models = parse_string_list(value);
        } else if (key == "gph-m") {
            if (fresh(flag.c_str())) cfg.gph_m = std::stoi(value);
        } else if (key == "nw-q") {
            if (fresh(flag.c_str())) cfg.nw_q = std::stoi(value);
        } else if (key == "trunc-k") {
            if (fresh(flag.c_str())) cfg.truncation_K = std::stoi(value);
        } else if (key == "loglik-burn") {
            if (fresh(flag.c_str())) cfg.loglik_burn = std::stoi(value);
        } else if (key == "seed") {
            if (fresh(flag.c_str())) cfg.seed = std::stoull(value);
        } else if (key == "acf-lags") {
            if (fresh(flag.c_str())) cfg.acf_lags = std::stoi(value);
        } else {
            throw lm::input_error("config file: unknown key '" + key + "'");
        }
    }
}

lm::SimFamily parse_family(const std::string& s) {
    if (s == "arfima") return lm::SimFamily::Arfima0d0;
    if (s == "garch") return lm::SimFamily::Garch11;
    if (s == "figarch") return lm::SimFamily::Figarch1d1;
    if (s == "fiegarch") return lm::SimFamily::Fiegarch1d1;
    throw lm::input_error("unknown family '" + s + "'");
}

void write_price_csv(const lm::SimulatedPath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw lm::input_error("cannot write '" + file + "'");
    const bool vol = !path.volume.empty();
    out << (vol ? "date,price,volume\n" : "date,price\n");
    // Price level reconstructed from percent log returns; volume level from
    // percent log changes around a 1e6-share base.
    lm::Date day{1990, 1, 1};
    double logp = std::log(100.0);
    double logv = std::log(1e6);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10f", std::exp(logp));
    out << day.to_string() << ',' << buf;
    if (vol) {
        std::snprintf(buf, sizeof(buf), "%.6f", std::exp(logv));
        out << ',' << buf;
    }
    out << '\n';
    for (std::size_t t = 0; t < path.values.size(); ++t) {
        day = lm::add_days(day, 1);
        logp += path.values[t] / 100.0;
        std::snprintf(buf, sizeof(buf), "%.10f", std::exp(logp));
        out << day.to_string() << ',' << buf;
        if (vol) {
            logv += path.volume[t] / 100.0;
            std::snprintf(buf, sizeof(buf), "%.6f", std::exp(logv));
            out << ',' << buf;
        }
        out << '\n';
    }
}

int run(int argc, char** argv) {
    CLI::App app{"long-memory volatility toolkit"};
    app.require_subcommand(1);

    // analyze ---------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "run the full battery");
    std::string config_path;
    analyze->add_option("--config", config_path,
                        "flat key=value config file; command-line flags "
                        "override file entries");
    lm::AnalysisConfig cfg;
    analyze->add_option("--input", cfg.input_path, "price CSV");
    analyze->add_option("--date-col", cfg.mapping.date_col, "date column name");
    analyze->add_option("--price-col", cfg.mapping.price_col,
                        "price column name");
    analyze->add_option("--volume-col", cfg.mapping.volume_col,
                        "volume column name");
    analyze->add_option("--powers", cfg.powers,
                        "power transformations of the volatility proxies")
        ->delimiter(',');
    analyze->add_option("--gph-m", cfg.gph_m,
                        "GPH bandwidth (0 = T^{4/5} rule)");
    analyze->add_option("--nw-q", cfg.nw_q,
                        "Newey-West lags (-1 = automatic)");
    analyze->add_option("--models", cfg.models,
                        "models to fit: garch, figarch, fiegarch, "
                        "fiegarch-volume, or none")
        ->delimiter(',');
    analyze->add_option("--trunc-k", cfg.truncation_K,
                        "ARCH(inf) truncation lag");
    analyze->add_option("--loglik-burn", cfg.loglik_burn,
                        "drop the first N likelihood terms (sensitivity runs)");
    analyze->add_option("--seed", cfg.seed, "run seed (recorded in manifest)");
    analyze->add_option("--out", cfg.out_dir, "output directory");
    analyze->add_option("--acf-lags", cfg.acf_lags, "lags in the ACF plots");

    // simulate --------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "generate synthetic data");
    std::string sim_family = "figarch";
    lm::SimConfig sc;
    std::string sim_out = "simulated.csv";
    std::string sim_dist = "student-t";
    simulate->add_option("--family", sim_family,
                         "arfima | garch | figarch | fiegarch");
    simulate->add_option("--n", sc.n, "observations after burn-in");
    simulate->add_option("--burn-in", sc.burn_in, "burn-in (-1 = default)");
    simulate->add_option("--seed", sc.seed, "generator seed");
    simulate->add_option("--d", sc.true_params.d, "fractional parameter");
    simulate->add_option("--a", sc.true_params.a, "intercept");
    simulate->add_option("--arch", sc.true_params.arch1, "ARCH coefficient");
    simulate->add_option("--garch", sc.true_params.garch1, "GARCH coefficient");
    simulate->add_option("--leverage", sc.true_params.leverage,
                         "FIEGARCH leverage");
    simulate->add_option("--volume-coef", sc.true_params.volume_coef,
                         "FIEGARCH volume coefficient");
    simulate->add_flag("--with-volume", sc.with_volume,
                       "co-generate a volume series (FIEGARCH)");
    simulate->add_option("--nu", sc.true_params.nu, "student-t dof");
    simulate->add_option("--dist", sim_dist, "student-t | gaussian");
    simulate->add_option("--trunc-k", sc.truncation_K, "truncation lag");
    simulate->add_option("--out", sim_out, "output CSV (date,price[,volume])");

    // mc ---------------------------------------------------------------------
    auto* mc = app.add_subcommand("mc", "Monte Carlo experiments");
    std::string mc_est = "gph";
    std::string mc_family = "arfima";
    std::string mc_dist = "student-t";
    lm::SimConfig mcc;
    mcc.replications = 100;
    bool mc_abs = false;
    bool mc_no_split = false;
    std::string mc_out;
    mc->add_option("--estimator", mc_est, "gph | rs | rsd | lb | lm");
    mc->add_option("--family", mc_family, "arfima | garch | figarch | fiegarch");
    mc->add_option("--d", mcc.arfima_d, "true d (arfima) ");
    mc->add_option("--model-d", mcc.true_params.d, "true d (vol models)");
    mc->add_option("--a", mcc.true_params.a, "intercept");
    mc->add_option("--arch", mcc.true_params.arch1, "ARCH coefficient");
    mc->add_option("--garch", mcc.true_params.garch1, "GARCH coefficient");
    mc->add_option("--leverage", mcc.true_params.leverage, "leverage");
    mc->add_option("--nu", mcc.true_params.nu, "student-t dof");
    mc->add_option("--dist", mc_dist, "student-t | gaussian");
    mc->add_option("--n", mcc.n, "series length");
    mc->add_option("--burn-in", mcc.burn_in, "burn-in (-1 = default)");
    mc->add_option("--reps", mcc.replications, "replications");
    mc->add_option("--seed", mcc.seed, "base seed");
    mc->add_option("--trunc-k", mcc.truncation_K, "truncation lag");
    mc->add_flag("--abs", mc_abs, "apply the estimator to |x|");
    mc->add_flag("--no-split", mc_no_split,
                 "disable per-replication seed splitting");
    mc->add_option("--out", mc_out, "write per-replication CSV here");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        if (!config_path.empty()) apply_config_file(config_path, analyze, cfg);
        if (cfg.input_path.empty())
            throw lm::input_error("analyze: --input is required (flag or "
                                  "config file)");
        if (cfg.out_dir.empty())
            throw lm::input_error("analyze: --out is required (flag or "
                                  "config file)");
        const lm::ReportBundle b = lm::run_analysis(cfg);
        std::cout << "wrote analysis for " << b.returns.size()
                  << " returns to " << cfg.out_dir << "\n"
                  << "GPH bandwidth: " << b.gph_bandwidth
                  << "  Newey-West bandwidth: " << b.nw_bandwidth << "\n";
        return 0;
    }

    if (simulate->parsed()) {
        sc.family = parse_family(sim_family);
        sc.shock_dist = sim_dist == "gaussian" ? lm::Distribution::Gaussian
                                               : lm::Distribution::StudentT;
        const lm::SimulatedPath path =
            sc.family == lm::SimFamily::Arfima0d0
                ? lm::simulate_arfima(sc.true_params.d, sc.n,
                                      sc.burn_in >= 0 ? sc.burn_in
                                                      : (int)sc.n / 2,
                                      sc.seed)
                : lm::simulate_volmodel(sc);
        write_price_csv(path, sim_out);
        std::cout << "wrote " << path.values.size() << " observations to "
                  << sim_out << " (seed " << sc.seed << ", generator "
                  << lm::Rng::generator_name() << ")\n";
        return 0;
    }

    if (mc->parsed()) {
        mcc.family = parse_family(mc_family);
        mcc.shock_dist = mc_dist == "gaussian" ? lm::Distribution::Gaussian
                                               : lm::Distribution::StudentT;
        const lm::McSummary s =
            lm::monte_carlo(mcc, mc_est, mc_abs, !mc_no_split);
        std::printf("%s over %d reps: mean %.6g  sd %.6g  reject5 %.3f  "
                    "reject1 %.3f  failures %d\n",
                    mc_est.c_str(), mcc.replications, s.mean_estimate,
                    s.sd_estimate, s.reject5_rate, s.reject1_rate, s.failures);
        std::printf("seed %llu, generator %s\n",
                    (unsigned long long)mcc.seed, lm::Rng::generator_name());
        if (!mc_out.empty()) {
            std::ofstream out(mc_out, std::ios::binary);
            if (!out) throw lm::input_error("cannot write '" + mc_out + "'");
            out << s.to_csv();
        }
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lm::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const lm::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const lm::fit_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
