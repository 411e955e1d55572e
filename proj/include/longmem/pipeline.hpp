#pragma once

#include "longmem/acf.hpp"
#include "longmem/csv.hpp"
#include "longmem/garch.hpp"
#include "longmem/memory_tests.hpp"
#include "longmem/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace longmem {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalysisConfig {
    std::string input_path;
    CsvMapping mapping;
    std::vector<double> powers = {0.25, 0.5, 1.0, 1.5, 2.0};
    int gph_m = 0;    // 0: bandwidth rule T^{4/5}
    int nw_q = -1;    // < 0: automatic bandwidth
    std::vector<std::string> models = {"garch", "figarch", "fiegarch",
                                       "fiegarch-volume"};
    int truncation_K = 1000;
    int loglik_burn = 0;  // leading likelihood terms dropped in model fits
    std::uint64_t seed = 1;
    std::string out_dir;  // empty: compute only, write nothing
    int acf_lags = 100;
};

// One row of the long-memory table: the full battery on one series.
struct LongMemoryCell {
    std::string series;  // "returns", "absolute", "squared"
    double k = 0.0;      // 0 for the returns row
    RsResult rs;
    GphResult gph;
};

struct FittedModel {
    std::string name;
    ModelFit fit;
};

struct ReportBundle {
    ReturnSeries returns;
    std::vector<double> volume_changes;  // empty when input has no volume

    SummaryStats stats_returns, stats_abs, stats_squared;

    std::vector<LongMemoryCell> longmem;

    AcfResult acf_returns;
    // Parallel to the proxy rows of `longmem` (series/k in the same order).
    std::vector<std::pair<std::string, AcfResult>> acf_proxies;

    std::vector<FittedModel> models;
    std::vector<std::string> skipped_models;
    std::vector<std::string> warnings;

    int gph_bandwidth = 0;  // bandwidth actually used on this input
    int nw_bandwidth = 0;
};

// Runs the full battery in order (returns, summary stats, ACFs, long-memory
// tests, model fits) and, when config.out_dir is set, writes the report,
// table CSVs, plot CSV+SVG pairs and the run manifest there. Any stage
// failure throws with a stage-tagged message and removes files already
// written.
ReportBundle run_analysis(const AnalysisConfig& config);

// Writes the bundle's plot-data files (CSV + SVG per plot) into dir.
// Returns the paths written.
std::vector<std::string> emit_plots(const ReportBundle& bundle,
                                    const std::string& dir);

// Full output set: report.txt, summary.csv, longmem.csv, models.csv,
// model_stats.csv, plots, run_manifest.json.
std::vector<std::string> write_outputs(const ReportBundle& bundle,
                                       const AnalysisConfig& config);

// Formatting used across report tables: 4-significant-digit statistics,
// 5-decimal coefficients, scientific p-values below 1e-4.
std::string fmt_stat(double v);
std::string fmt_coef(double v);
std::string fmt_pval(double p);
std::string significance_stars(Significance s);

}  // namespace longmem
