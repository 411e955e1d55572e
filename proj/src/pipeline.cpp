#include "longmem/pipeline.hpp"

#include "longmem/errors.hpp"
#include "longmem/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace longmem {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// Full-precision CSV number; bitwise-equal doubles print identically.
std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    return fmt("%.12g", v);
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const input_error& e) {
        throw input_error(std::string("[") + name + "] " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("[") + name + "] " + e.what());
    }
}

LongMemoryCell battery(const std::string& series_name, double k,
                       const std::vector<double>& x, const AnalysisConfig& cfg) {
    LongMemoryCell cell;
    cell.series = series_name;
    cell.k = k;
    cell.rs = modified_rs(x, cfg.nw_q);
    cell.gph = gph_estimate(x, cfg.gph_m);
    return cell;
}

bool wants_model(const AnalysisConfig& cfg, const std::string& name) {
    return std::find(cfg.models.begin(), cfg.models.end(), name) !=
           cfg.models.end();
}

// --- plot rendering -------------------------------------------------------

// Data-space drawing inside a transformed <g>, so every coordinate that
// appears in the SVG is a raw data value (matching the CSV to the %.6g it
// is printed with). Stroke widths ride on vector-effect so the scale does
// not fatten them.
struct SvgFrame {
    double xmin, xmax, ymin, ymax;
    std::string open(int w, int h) const {
        const double ml = 60, mr = 20, mt = 30, mb = 40;
        const double sx = (w - ml - mr) / std::max(xmax - xmin, 1e-300);
        const double sy = (h - mt - mb) / std::max(ymax - ymin, 1e-300);
        std::ostringstream os;
        os << "<g transform=\"translate(" << fmt("%.6g", ml - xmin * sx) << ","
           << fmt("%.6g", h - mb + ymin * sy) << ") scale(" << fmt("%.6g", sx)
           << "," << fmt("%.6g", -sy) << ")\">\n";
        return os.str();
    }
};

std::string svg_header(int w, int h, const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"12\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
       << title << "</text>\n";
    return os.str();
}

std::string svg_axis_labels(int w, int h, double xmin, double xmax,
                            double ymin, double ymax) {
    std::ostringstream os;
    os << "<text x=\"56\" y=\"" << h - 8
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt("%.6g", xmin)
       << "</text>\n"
       << "<text x=\"" << w - 60 << "\" y=\"" << h - 8
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt("%.6g", xmax)
       << "</text>\n"
       << "<text x=\"4\" y=\"" << h - 40
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt("%.6g", ymin)
       << "</text>\n"
       << "<text x=\"4\" y=\"38\" font-family=\"sans-serif\" font-size=\"10\">"
       << fmt("%.6g", ymax) << "</text>\n";
    return os.str();
}

std::string svg_line_plot(const std::string& title,
                          const std::vector<double>& ys) {
    const int w = 840, h = 420;
    double ymin = ys.empty() ? 0.0 : ys[0], ymax = ymin;
    for (double v : ys) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymin == ymax) {
        ymin -= 1;
        ymax += 1;
    }
    SvgFrame f{0.0, static_cast<double>(ys.size() > 1 ? ys.size() - 1 : 1),
               ymin, ymax};
    std::ostringstream os;
    os << svg_header(w, h, title) << f.open(w, h);
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" "
          "vector-effect=\"non-scaling-stroke\" points=\"";
    for (std::size_t t = 0; t < ys.size(); ++t) {
        if (t) os << ' ';
        os << fmt("%.6g", static_cast<double>(t)) << ',' << fmt("%.6g", ys[t]);
    }
    os << "\"/>\n</g>\n"
       << svg_axis_labels(w, h, 0, static_cast<double>(ys.size() - 1), ymin,
                          ymax)
       << "</svg>\n";
    return os.str();
}

std::string svg_acf_plot(const std::string& title, const AcfResult& a) {
    const int w = 840, h = 420;
    double ymin = -a.ci_halfwidth, ymax = a.ci_halfwidth;
    for (double v : a.rho) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    ymin = std::min(ymin * 1.1, -0.05);
    ymax = std::max(ymax * 1.1, 0.05);
    const double xmax = static_cast<double>(a.lags.back());
    SvgFrame f{0.0, xmax, ymin, ymax};
    std::ostringstream os;
    os << svg_header(w, h, title) << f.open(w, h);
    // zero line and the +-1.96/sqrt(n) band
    os << "<line x1=\"0\" y1=\"0\" x2=\"" << fmt("%.6g", xmax)
       << "\" y2=\"0\" stroke=\"#000\" stroke-width=\"1\" "
          "vector-effect=\"non-scaling-stroke\"/>\n";
    for (int sgn : {1, -1}) {
        const double b = sgn * a.ci_halfwidth;
        os << "<line x1=\"0\" y1=\"" << fmt("%.6g", b) << "\" x2=\""
           << fmt("%.6g", xmax) << "\" y2=\"" << fmt("%.6g", b)
           << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\" "
              "stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>\n";
    }
    for (std::size_t i = 0; i < a.lags.size(); ++i) {
        os << "<line x1=\"" << a.lags[i] << "\" y1=\"0\" x2=\"" << a.lags[i]
           << "\" y2=\"" << fmt("%.6g", a.rho[i])
           << "\" stroke=\"#1f77b4\" stroke-width=\"2\" "
              "vector-effect=\"non-scaling-stroke\"/>\n";
    }
    os << "</g>\n" << svg_axis_labels(w, h, 0, xmax, ymin, ymax) << "</svg>\n";
    return os.str();
}

// --- output writing -------------------------------------------------------

class OutputWriter {
public:
    explicit OutputWriter(const std::string& dir) : dir_(dir) {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out)
                throw input_error("cannot write to '" + tmp.string() + "'");
            out << content;
        }
        fs::rename(tmp, target);
        written_.push_back(target.string());
    }

    // Removes everything written so far (stage-failure cleanup).
    void rollback() {
        for (const std::string& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& files() const { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

std::string acf_csv(const AcfResult& a) {
    std::string out = "lag,rho,ci\n";
    for (std::size_t i = 0; i < a.lags.size(); ++i)
        out += std::to_string(a.lags[i]) + "," + csv_num(a.rho[i]) + "," +
               csv_num(a.ci_halfwidth) + "\n";
    return out;
}

std::string slug(const std::string& series, double k) {
    std::string s = series + "_k" + fmt("%.4g", k);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

std::string fmt_stat(double v) { return fmt("%.4g", v); }
std::string fmt_coef(double v) { return fmt("%.5f", v); }

std::string fmt_pval(double p) {
    if (p < 1e-4) return fmt("%.2E", p);
    return fmt("%.4g", p);
}

std::string significance_stars(Significance s) {
    switch (s) {
        case Significance::One: return "**";
        case Significance::Five: return "*";
        default: return "";
    }
}

ReportBundle run_analysis(const AnalysisConfig& config) {
    ReportBundle b;

    const PriceSeries prices = stage("ingest", [&] {
        return ingest_csv(config.input_path, config.mapping, &b.warnings);
    });

    stage("returns", [&] {
        b.returns = log_returns(prices);
        if (!(variance_biased(b.returns.values) > 0.0))
            throw numeric_error("return series has zero variance");
        if (prices.has_volume()) b.volume_changes = volume_change(prices);
        return 0;
    });

    for (double k : config.powers)
        if (!(k > 0.0))
            throw input_error("[config] power grid entries must be > 0");

    const std::vector<double>& r = b.returns.values;
    std::vector<double> abs_r(r.size()), sq_r(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        abs_r[i] = std::fabs(r[i]);
        sq_r[i] = r[i] * r[i];
    }

    stage("summary", [&] {
        b.stats_returns = summary_stats(r);
        b.stats_abs = summary_stats(abs_r);
        b.stats_squared = summary_stats(sq_r);
        return 0;
    });

    stage("acf", [&] {
        const int lags =
            std::min<int>(config.acf_lags, static_cast<int>(r.size()) - 1);
        b.acf_returns = acf(r, lags);
        for (const char* base : {"absolute", "squared"}) {
            for (double k : config.powers) {
                const VolatilityProxy vp = volatility_proxy(
                    r,
                    base == std::string("absolute") ? ProxyBase::Absolute
                                                    : ProxyBase::Squared,
                    k);
                b.acf_proxies.emplace_back(slug(base, k), acf(vp.values, lags));
            }
        }
        return 0;
    });

    stage("longmem", [&] {
        b.longmem.push_back(battery("returns", 0.0, r, config));
        b.nw_bandwidth = b.longmem[0].rs.bandwidth_q;
        b.gph_bandwidth = b.longmem[0].gph.bandwidth_m;
        for (const char* base : {"absolute", "squared"}) {
            for (double k : config.powers) {
                const VolatilityProxy vp = volatility_proxy(
                    r,
                    base == std::string("absolute") ? ProxyBase::Absolute
                                                    : ProxyBase::Squared,
                    k);
                b.longmem.push_back(battery(base, k, vp.values, config));
            }
        }
        // The squared battery at power k is the absolute battery at 2k; a
        // mismatch means the proxy identity broke somewhere upstream.
        for (const LongMemoryCell& sq : b.longmem) {
            if (sq.series != "squared") continue;
            for (const LongMemoryCell& ab : b.longmem) {
                if (ab.series != "absolute" || ab.k != 2.0 * sq.k) continue;
                if (sq.rs.q_stat != ab.rs.q_stat ||
                    sq.gph.d_estimate != ab.gph.d_estimate)
                    throw numeric_error(
                        "proxy identity violated: squared k=" +
                        fmt("%.4g", sq.k) + " differs from absolute k=" +
                        fmt("%.4g", 2.0 * sq.k));
            }
        }
        return 0;
    });

    stage("models", [&] {
        auto run_fit = [&](const std::string& name, Family fam, bool volume) {
            if (volume && b.volume_changes.empty()) {
                b.skipped_models.push_back(name + " (input has no volume)");
                return;
            }
            ModelSpec ms;
            ms.family = fam;
            ms.truncation_K = config.truncation_K;
            ms.loglik_burn = config.loglik_burn;
            if (volume) {
                // Volume changes align with returns one-to-one.
                ms.exog_volume = b.volume_changes;
            }
            try {
                b.models.push_back({name, fit(b.returns, ms)});
            } catch (const fit_error& e) {
                throw numeric_error(name + ": " + e.what());
            }
        };
        if (wants_model(config, "garch"))
            run_fit("GARCH(1,1)", Family::Garch, false);
        if (wants_model(config, "figarch"))
            run_fit("FIGARCH(1,d,1)", Family::Figarch, false);
        if (wants_model(config, "fiegarch"))
            run_fit("FIEGARCH(1,d,1)", Family::Fiegarch, false);
        if (wants_model(config, "fiegarch-volume"))
            run_fit("FIEGARCH(1,d,1)+volume", Family::Fiegarch, true);
        return 0;
    });

    if (!config.out_dir.empty()) stage("write", [&] { return write_outputs(b, config); });
    return b;
}

namespace {

std::string summary_csv(const ReportBundle& b) {
    std::string out = "series,mean,std_dev,skewness,kurtosis,jarque_bera,n\n";
    auto row = [&](const char* name, const SummaryStats& s) {
        out += std::string(name) + "," + csv_num(s.mean) + "," +
               csv_num(s.std_dev) + "," + csv_num(s.skewness) + "," +
               csv_num(s.kurtosis) + "," + csv_num(s.jarque_bera) + "," +
               std::to_string(s.n) + "\n";
    };
    row("returns", b.stats_returns);
    row("absolute", b.stats_abs);
    row("squared", b.stats_squared);
    return out;
}

std::string longmem_csv(const ReportBundle& b) {
    std::string out =
        "series,k,rs_stat,rs_sig,gph_stat,gph_sig,rs_d,gph_d,nw_q,gph_m\n";
    for (const LongMemoryCell& c : b.longmem) {
        const char* gph_sig = std::fabs(c.gph.t_statistic) > kGphCrit1 ? "**"
                              : std::fabs(c.gph.t_statistic) > kGphCrit5
                                  ? "*"
                                  : "";
        out += c.series + "," + (c.k > 0.0 ? csv_num(c.k) : "") + "," +
               csv_num(c.rs.q_stat) + "," +
               significance_stars(c.rs.significance) + "," +
               csv_num(c.gph.t_statistic) + "," + gph_sig + "," +
               csv_num(c.rs.d_estimate) + "," + csv_num(c.gph.d_estimate) +
               "," + std::to_string(c.rs.bandwidth_q) + "," +
               std::to_string(c.gph.bandwidth_m) + "\n";
    }
    return out;
}

std::string models_csv(const ReportBundle& b) {
    std::string out = "model,param,estimate,std_error,p_value\n";
    for (const FittedModel& m : b.models) {
        for (std::size_t i = 0; i < m.fit.param_names.size(); ++i) {
            out += m.name + "," + m.fit.param_names[i] + "," +
                   csv_num(m.fit.estimates[i]) + ",";
            if (m.fit.se_available)
                out += csv_num(m.fit.std_errors[i]) + "," +
                       csv_num(m.fit.p_values[i]);
            else
                out += ",";
            out += "\n";
        }
    }
    return out;
}

std::string model_stats_csv(const ReportBundle& b) {
    std::string out =
        "model,loglik,aic,bic,lm12,lm12_p,q2_12,q2_12_p,grad_norm,n\n";
    for (const FittedModel& m : b.models) {
        out += m.name + "," + csv_num(m.fit.loglik) + "," +
               csv_num(m.fit.aic) + "," + csv_num(m.fit.bic) + "," +
               csv_num(m.fit.lm12.statistic) + "," +
               csv_num(m.fit.lm12.p_value) + "," +
               csv_num(m.fit.q2_12.statistic) + "," +
               csv_num(m.fit.q2_12.p_value) + "," +
               csv_num(m.fit.grad_inf_norm) + "," +
               std::to_string(m.fit.n_obs) + "\n";
    }
    return out;
}

std::string render_report(const ReportBundle& b, const AnalysisConfig& cfg) {
    std::ostringstream os;
    os << "Long-memory volatility analysis\n"
       << "input: " << cfg.input_path << "\n"
       << "observations: " << b.returns.size() << " returns";
    if (!b.returns.dates.empty())
        os << " (" << b.returns.dates.front().to_string() << " .. "
           << b.returns.dates.back().to_string() << ")";
    os << "\n\n";

    os << "== Summary statistics ==\n";
    os << "series      mean      std dev   skewness  kurtosis  Jarque-Bera\n";
    auto srow = [&](const char* name, const SummaryStats& s) {
        os << name << "  " << fmt_stat(s.mean) << "  " << fmt_stat(s.std_dev)
           << "  " << fmt_stat(s.skewness) << "  " << fmt_stat(s.kurtosis)
           << "  " << fmt_stat(s.jarque_bera) << "\n";
    };
    srow("returns ", b.stats_returns);
    srow("absolute", b.stats_abs);
    srow("squared ", b.stats_squared);

    os << "\n== Long-memory tests (R/S bandwidth q=" << b.nw_bandwidth
       << ", GPH bandwidth m=" << b.gph_bandwidth << ") ==\n";
    os << "series    k      R/S        GPH        R/S d      GPH d\n";
    for (const LongMemoryCell& c : b.longmem) {
        const char* gph_sig = std::fabs(c.gph.t_statistic) > kGphCrit1 ? "**"
                              : std::fabs(c.gph.t_statistic) > kGphCrit5
                                  ? "*"
                                  : "";
        os << c.series << "  " << (c.k > 0 ? fmt_stat(c.k) : "-") << "  "
           << fmt_stat(c.rs.q_stat) << significance_stars(c.rs.significance)
           << "  " << fmt_stat(c.gph.t_statistic) << gph_sig << "  "
           << (std::isnan(c.rs.d_estimate) ? std::string("n/a")
                                           : fmt_stat(c.rs.d_estimate))
           << "  " << fmt_stat(c.gph.d_estimate) << "\n";
    }
    os << "* significant at 5%, ** at 1%\n";

    for (const FittedModel& m : b.models) {
        os << "\n== " << m.name << " (student-t MLE) ==\n";
        for (std::size_t i = 0; i < m.fit.param_names.size(); ++i) {
            os << m.fit.param_names[i] << " = "
               << fmt_coef(m.fit.estimates[i]);
            if (m.fit.se_available)
                os << "  (se " << fmt_coef(m.fit.std_errors[i]) << ", p "
                   << fmt_pval(m.fit.p_values[i]) << ")";
            os << "\n";
        }
        os << "loglik = " << fmt("%.4f", m.fit.loglik)
           << "  AIC = " << fmt("%.4f", m.fit.aic)
           << "  BIC = " << fmt("%.4f", m.fit.bic) << "\n";
        os << "LM(12) = " << fmt_stat(m.fit.lm12.statistic) << " (p "
           << fmt_pval(m.fit.lm12.p_value) << ")   Q2(12) = "
           << fmt_stat(m.fit.q2_12.statistic) << " (p "
           << fmt_pval(m.fit.q2_12.p_value) << ")\n";
        for (const std::string& w : m.fit.warnings)
            os << "warning: " << w << "\n";
    }
    for (const std::string& s : b.skipped_models)
        os << "\nskipped: " << s << "\n";
    if (!b.warnings.empty()) {
        os << "\n== Warnings ==\n";
        for (const std::string& w : b.warnings) os << w << "\n";
    }
    return os.str();
}

std::string manifest_json(const ReportBundle& b, const AnalysisConfig& cfg,
                          const std::vector<std::string>& files) {
    nlohmann::json j;
    j["tool"] = "longmem";
    j["version"] = kToolVersion;
    j["generator"] = Rng::generator_name();
    j["seed"] = cfg.seed;
    j["config"] = {{"input", cfg.input_path},
                   {"date_col", cfg.mapping.date_col},
                   {"price_col", cfg.mapping.price_col},
                   {"volume_col", cfg.mapping.volume_col},
                   {"powers", cfg.powers},
                   {"gph_m", cfg.gph_m},
                   {"nw_q", cfg.nw_q},
                   {"models", cfg.models},
                   {"trunc_k", cfg.truncation_K},
                   {"loglik_burn", cfg.loglik_burn},
                   {"acf_lags", cfg.acf_lags}};
    j["n_returns"] = b.returns.size();
    j["gph_bandwidth"] = b.gph_bandwidth;
    j["nw_bandwidth"] = b.nw_bandwidth;
    j["warnings"] = b.warnings;
    j["skipped_models"] = b.skipped_models;
    std::vector<std::string> names;
    for (const std::string& f : files)
        names.push_back(fs::path(f).filename().string());
    j["files"] = names;
    return j.dump(2) + "\n";
}

}  // namespace

std::vector<std::string> emit_plots(const ReportBundle& bundle,
                                    const std::string& dir) {
    OutputWriter w(dir);
    try {
        {
            std::string csv = "date,value\n";
            for (std::size_t i = 0; i < bundle.returns.size(); ++i)
                csv += bundle.returns.dates[i].to_string() + "," +
                       csv_num(bundle.returns.values[i]) + "\n";
            w.write("timeseries_returns.csv", csv);
            w.write("timeseries_returns.svg",
                    svg_line_plot("daily returns (percent)",
                                  bundle.returns.values));
        }
        if (!bundle.volume_changes.empty()) {
            std::string csv = "date,value\n";
            for (std::size_t i = 0; i < bundle.volume_changes.size(); ++i)
                csv += bundle.returns.dates[i].to_string() + "," +
                       csv_num(bundle.volume_changes[i]) + "\n";
            w.write("timeseries_volume_change.csv", csv);
            w.write("timeseries_volume_change.svg",
                    svg_line_plot("daily volume change (percent)",
                                  bundle.volume_changes));
        }
        w.write("acf_returns.csv", acf_csv(bundle.acf_returns));
        w.write("acf_returns.svg",
                svg_acf_plot("ACF: returns", bundle.acf_returns));
        for (const auto& [name, a] : bundle.acf_proxies) {
            w.write("acf_" + name + ".csv", acf_csv(a));
            w.write("acf_" + name + ".svg", svg_acf_plot("ACF: " + name, a));
        }
        for (const FittedModel& m : bundle.models) {
            std::string nm = m.name;
            for (char& c : nm)
                if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
            std::string csv = "date,sigma2,sigma\n";
            for (std::size_t i = 0; i < m.fit.sigma2_path.size(); ++i)
                csv += bundle.returns.dates[i].to_string() + "," +
                       csv_num(m.fit.sigma2_path[i]) + "," +
                       csv_num(std::sqrt(m.fit.sigma2_path[i])) + "\n";
            w.write("condvol_" + nm + ".csv", csv);
            std::vector<double> sigma(m.fit.sigma2_path.size());
            for (std::size_t i = 0; i < sigma.size(); ++i)
                sigma[i] = std::sqrt(m.fit.sigma2_path[i]);
            w.write("condvol_" + nm + ".svg",
                    svg_line_plot("conditional volatility: " + m.name, sigma));
        }
    } catch (...) {
        w.rollback();
        throw;
    }
    return w.files();
}

std::vector<std::string> write_outputs(const ReportBundle& bundle,
                                       const AnalysisConfig& config) {
    OutputWriter w(config.out_dir);
    std::vector<std::string> plots;
    try {
        w.write("report.txt", render_report(bundle, config));
        w.write("summary.csv", summary_csv(bundle));
        w.write("longmem.csv", longmem_csv(bundle));
        w.write("models.csv", models_csv(bundle));
        w.write("model_stats.csv", model_stats_csv(bundle));
        plots = emit_plots(bundle, config.out_dir);
        std::vector<std::string> all = w.files();
        all.insert(all.end(), plots.begin(), plots.end());
        w.write("run_manifest.json", manifest_json(bundle, config, all));
        all.push_back(w.files().back());
        return all;
    } catch (...) {
        // A failed stage leaves no partial output behind; emit_plots rolls
        // back its own files, anything after it is removed here.
        for (const std::string& p : plots) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        w.rollback();
        throw;
    }
}

}  // namespace longmem
