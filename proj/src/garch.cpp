#include "longmem/garch.hpp"

#include "longmem/dist.hpp"
#include "longmem/errors.hpp"
#include "longmem/fracdiff.hpp"
#include "longmem/linalg.hpp"
#include "longmem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace longmem {

namespace {

constexpr double kPenalty = 1e10;
constexpr double kLogVarClamp = 50.0;
constexpr double kPi = 3.14159265358979323846;

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

bool garch_admissible(const ParamVector& p) {
    return p.a > 0.0 && p.arch1 >= 0.0 && p.garch1 >= 0.0 &&
           p.arch1 + p.garch1 < 1.0;
}

}  // namespace

ParamVector garch_to_figarch(const ParamVector& g) {
    ParamVector f = g;
    f.arch1 = g.arch1 + g.garch1;  // phi1
    f.garch1 = g.garch1;           // b1
    f.d = 0.0;
    return f;
}

std::vector<double> garch_filter(const std::vector<double>& eps,
                                 const ParamVector& p) {
    if (!garch_admissible(p))
        throw numeric_error("garch_filter: inadmissible parameters");
    const std::size_t n = eps.size();
    if (n == 0) throw input_error("garch_filter: empty series");
    const double v0 = variance_biased(eps);
    std::vector<double> sigma2(n);
    // Pre-sample eps^2 and sigma^2 both sit at the sample variance.
    sigma2[0] = p.a + (p.arch1 + p.garch1) * v0;
    for (std::size_t t = 1; t < n; ++t)
        sigma2[t] = p.a + p.arch1 * eps[t - 1] * eps[t - 1] +
                    p.garch1 * sigma2[t - 1];
    return sigma2;
}

std::vector<double> figarch_filter(const std::vector<double>& eps,
                                   const ParamVector& p, int K) {
    const std::size_t n = eps.size();
    if (n == 0) throw input_error("figarch_filter: empty series");
    if (!(p.a > 0.0)) throw numeric_error("figarch_filter: intercept must be > 0");
    if (!(p.garch1 < 1.0))
        throw numeric_error("figarch_filter: b1 must be < 1");
    const ArchInftyWeights w = arch_infty_weights(p.d, p.arch1, p.garch1, K);
    if (!w.admissible())
        throw numeric_error("figarch_filter: negative ARCH(inf) weight at lag " +
                            std::to_string(w.first_negative));

    const double v0 = variance_biased(eps);
    std::vector<double> eps2(n);
    for (std::size_t t = 0; t < n; ++t) eps2[t] = eps[t] * eps[t];

    // Suffix sums of lambda let the pre-sample block collapse to one term.
    std::vector<double> suffix(K + 1, 0.0);
    for (int k = K; k >= 1; --k) suffix[k - 1] = suffix[k] + w.lambda[k - 1];

    const double omega = p.a / (1.0 - p.garch1);
    std::vector<double> sigma2(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t kmax = std::min<std::size_t>(t, K);
        double acc = omega;
        for (std::size_t k = 1; k <= kmax; ++k)
            acc += w.lambda[k - 1] * eps2[t - k];
        if (kmax < static_cast<std::size_t>(K)) acc += suffix[kmax] * v0;
        sigma2[t] = acc;
    }
    return sigma2;
}

std::vector<double> fiegarch_filter(const std::vector<double>& eps,
                                    const ParamVector& p, int K,
                                    Distribution dist,
                                    const std::vector<double>& volume,
                                    int* clamped) {
    const std::size_t n = eps.size();
    if (n == 0) throw input_error("fiegarch_filter: empty series");
    if (!(std::fabs(p.garch1) < 1.0))
        throw numeric_error("fiegarch_filter: |phi1| must be < 1");
    if (!(p.d >= 0.0 && p.d < 1.0))
        throw numeric_error("fiegarch_filter: d must lie in [0, 1)");
    if (!volume.empty() && volume.size() != n)
        throw input_error("fiegarch_filter: volume length mismatch");

    // psi_j: (1-L)^{-d} convolved with (1 - phi1 L)^{-1}, lags 0..K-1.
    const std::vector<double> ma = fracint_ma_coeffs(p.d, K);
    std::vector<double> psi(K);
    psi[0] = 1.0;
    for (int j = 1; j < K; ++j) psi[j] = p.garch1 * psi[j - 1] + ma[j];

    const double eabs = (dist == Distribution::StudentT)
                            ? std_t_abs_mean(p.nu)
                            : normal_abs_mean();
    const double intercept = p.a / (1.0 - p.garch1);

    std::vector<double> sigma2(n), g(n, 0.0);
    int n_clamped = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double lv = intercept;
        if (!volume.empty()) lv += p.volume_coef * volume[t];
        const std::size_t jmax = std::min<std::size_t>(t, K);  // g known for t-1..t-jmax
        for (std::size_t j = 1; j <= jmax; ++j)
            lv += psi[j - 1] * g[t - j];
        if (lv > kLogVarClamp) {
            lv = kLogVarClamp;
            ++n_clamped;
        } else if (lv < -kLogVarClamp) {
            lv = -kLogVarClamp;
            ++n_clamped;
        }
        sigma2[t] = std::exp(lv);
        const double x = eps[t] / std::sqrt(sigma2[t]);
        g[t] = p.leverage * x + p.arch1 * (std::fabs(x) - eabs);
    }
    if (clamped) *clamped = n_clamped;
    return sigma2;
}

double student_t_loglik(const std::vector<double>& eps,
                        const std::vector<double>& sigma2, double nu,
                        int burn) {
    const std::size_t n = eps.size();
    if (sigma2.size() != n)
        throw input_error("student_t_loglik: length mismatch");
    if (!(nu > 2.0)) throw numeric_error("student_t_loglik: nu must exceed 2");
    const double c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                     0.5 * std::log(kPi * (nu - 2.0));
    double ll = 0.0;
    for (std::size_t t = static_cast<std::size_t>(std::max(burn, 0)); t < n;
         ++t) {
        if (!(sigma2[t] > 0.0))
            throw numeric_error("student_t_loglik: nonpositive variance");
        ll += c - 0.5 * std::log(sigma2[t]) -
              0.5 * (nu + 1.0) *
                  std::log1p(eps[t] * eps[t] / ((nu - 2.0) * sigma2[t]));
    }
    return ll;
}

double gaussian_loglik(const std::vector<double>& eps,
                       const std::vector<double>& sigma2, int burn) {
    const std::size_t n = eps.size();
    if (sigma2.size() != n) throw input_error("gaussian_loglik: length mismatch");
    const double c = -0.5 * std::log(2.0 * kPi);
    double ll = 0.0;
    for (std::size_t t = static_cast<std::size_t>(std::max(burn, 0)); t < n;
         ++t) {
        if (!(sigma2[t] > 0.0))
            throw numeric_error("gaussian_loglik: nonpositive variance");
        ll += c - 0.5 * std::log(sigma2[t]) -
              0.5 * eps[t] * eps[t] / sigma2[t];
    }
    return ll;
}

std::pair<double, double> info_criteria(double loglik, int p, std::size_t n) {
    if (p < 1) throw input_error("info_criteria: p must be >= 1");
    if (n <= static_cast<std::size_t>(p))
        throw input_error("info_criteria: need n > p");
    const double aic = -2.0 * loglik + 2.0 * p;
    const double bic = -2.0 * loglik + p * std::log(static_cast<double>(n));
    return {aic, bic};
}

PortmanteauResult engle_lm(const std::vector<double>& std_residuals, int m) {
    const std::size_t n = std_residuals.size();
    if (m < 1) throw input_error("engle_lm: m must be >= 1");
    if (n <= static_cast<std::size_t>(m) + 1)
        throw input_error("engle_lm: series too short for m lags");
    std::vector<double> y2(n);
    for (std::size_t t = 0; t < n; ++t)
        y2[t] = std_residuals[t] * std_residuals[t];

    const std::size_t rows = n - m;
    const std::size_t cols = static_cast<std::size_t>(m) + 1;
    std::vector<double> X(rows * cols), y(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        X[t * cols] = 1.0;
        for (int j = 1; j <= m; ++j) X[t * cols + j] = y2[t + m - j];
        y[t] = y2[t + m];
    }
    std::vector<double> beta;
    if (!ols(X, rows, cols, y, beta))
        throw numeric_error("engle_lm: degenerate regressor matrix");

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(rows);
    double tss = 0.0, rss = 0.0;
    for (std::size_t t = 0; t < rows; ++t) {
        double fitv = 0.0;
        for (std::size_t j = 0; j < cols; ++j) fitv += X[t * cols + j] * beta[j];
        rss += (y[t] - fitv) * (y[t] - fitv);
        tss += (y[t] - ybar) * (y[t] - ybar);
    }
    if (!(tss > 0.0)) throw numeric_error("engle_lm: constant residuals");
    const double r2 = 1.0 - rss / tss;

    PortmanteauResult out;
    out.statistic = static_cast<double>(rows) * std::max(r2, 0.0);
    out.lags_used = m;
    out.p_value = chi2_upper_tail(out.statistic, static_cast<double>(m));
    return out;
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

namespace {

struct FitContext {
    Family family;
    Distribution dist;
    bool leverage;
    bool volume;
    int K;
    int burn;
    const std::vector<double>* eps;
    const std::vector<double>* vol;
    double sample_var;
};

// Free-parameter layout (report order): a, garch1, arch1, [leverage],
// [volume], [d], [nu].
std::vector<std::string> param_names(const FitContext& c) {
    std::vector<std::string> names = {"a", "garch1", "arch1"};
    if (c.family == Family::Fiegarch && c.leverage) names.push_back("leverage");
    if (c.family == Family::Fiegarch && c.volume) names.push_back("volume");
    if (c.family != Family::Garch) names.push_back("d");
    if (c.dist == Distribution::StudentT) names.push_back("nu");
    return names;
}

std::vector<double> pack_params(const FitContext& c, const ParamVector& p) {
    std::vector<double> v = {p.a, p.garch1, p.arch1};
    if (c.family == Family::Fiegarch && c.leverage) v.push_back(p.leverage);
    if (c.family == Family::Fiegarch && c.volume) v.push_back(p.volume_coef);
    if (c.family != Family::Garch) v.push_back(p.d);
    if (c.dist == Distribution::StudentT) v.push_back(p.nu);
    return v;
}

ParamVector unpack_params(const FitContext& c, const std::vector<double>& v) {
    ParamVector p;
    std::size_t i = 0;
    p.a = v[i++];
    p.garch1 = v[i++];
    p.arch1 = v[i++];
    if (c.family == Family::Fiegarch && c.leverage) p.leverage = v[i++];
    if (c.family == Family::Fiegarch && c.volume) p.volume_coef = v[i++];
    if (c.family != Family::Garch) p.d = v[i++];
    p.nu = (c.dist == Distribution::StudentT) ? v[i++] : 1e6;
    return p;
}

// Unconstrained parameterization for the optimizer. Bounded coordinates go
// through logistic transforms; FIGARCH lambda admissibility stays a
// rejection inside the objective.
std::vector<double> to_unconstrained(const FitContext& c, const ParamVector& p) {
    std::vector<double> t;
    switch (c.family) {
        case Family::Garch: {
            const double s = p.arch1 + p.garch1;
            t = {std::log(p.a), logit(s), logit(p.arch1 / s)};
            break;
        }
        case Family::Figarch:
            t = {std::log(p.a), logit(p.garch1), logit(p.arch1), logit(p.d)};
            break;
        case Family::Fiegarch:
            t = {p.a, std::atanh(p.garch1), p.arch1};
            if (c.leverage) t.push_back(p.leverage);
            if (c.volume) t.push_back(p.volume_coef);
            t.push_back(logit(p.d));
            break;
    }
    if (c.dist == Distribution::StudentT) t.push_back(std::log(p.nu - 2.0));
    return t;
}

ParamVector from_unconstrained(const FitContext& c,
                               const std::vector<double>& t) {
    ParamVector p;
    std::size_t i = 0;
    switch (c.family) {
        case Family::Garch: {
            p.a = std::exp(t[i++]);
            const double s = sigmoid(t[i++]);
            const double u = sigmoid(t[i++]);
            p.arch1 = s * u;
            p.garch1 = s * (1.0 - u);
            break;
        }
        case Family::Figarch:
            p.a = std::exp(t[i++]);
            p.garch1 = sigmoid(t[i++]);
            p.arch1 = sigmoid(t[i++]);
            p.d = sigmoid(t[i++]);
            break;
        case Family::Fiegarch:
            p.a = t[i++];
            p.garch1 = std::tanh(t[i++]);
            p.arch1 = t[i++];
            if (c.leverage) p.leverage = t[i++];
            if (c.volume) p.volume_coef = t[i++];
            p.d = sigmoid(t[i++]);
            break;
    }
    p.nu = (c.dist == Distribution::StudentT) ? 2.0 + std::exp(t[i++]) : 1e6;
    return p;
}

double loglik_at(const FitContext& c, const ParamVector& p) {
    std::vector<double> sigma2;
    switch (c.family) {
        case Family::Garch:
            sigma2 = garch_filter(*c.eps, p);
            break;
        case Family::Figarch:
            sigma2 = figarch_filter(*c.eps, p, c.K);
            break;
        case Family::Fiegarch:
            sigma2 = fiegarch_filter(*c.eps, p, c.K, c.dist,
                                     c.volume ? *c.vol : std::vector<double>{});
            break;
    }
    return (c.dist == Distribution::StudentT)
               ? student_t_loglik(*c.eps, sigma2, p.nu, c.burn)
               : gaussian_loglik(*c.eps, sigma2, c.burn);
}

// Mean negative log-likelihood over the unconstrained coordinates; the
// 1e-5 gradient target is meaningful on this per-observation scale.
double mean_nll(const FitContext& c, const std::vector<double>& t) {
    ParamVector p;
    try {
        p = from_unconstrained(c, t);
        const double ll = loglik_at(c, p);
        if (!std::isfinite(ll)) return kPenalty;
        return -ll / static_cast<double>(c.eps->size());
    } catch (const numeric_error&) {
        return kPenalty;  // rejection: outside the admissible region
    }
}

std::vector<ParamVector> start_points(const FitContext& c) {
    const double v = c.sample_var;
    std::vector<ParamVector> starts;
    auto mk = [&](double a, double g1, double a1, double d, double lev,
                  double vc) {
        ParamVector p;
        p.a = a;
        p.garch1 = g1;
        p.arch1 = a1;
        p.d = d;
        p.leverage = lev;
        p.volume_coef = vc;
        p.nu = 8.0;
        return p;
    };
    switch (c.family) {
        case Family::Garch:
            starts = {mk(v * 0.05, 0.85, 0.10, 0, 0, 0),
                      mk(v * 0.05, 0.90, 0.05, 0, 0, 0),
                      mk(v * 0.10, 0.70, 0.20, 0, 0, 0),
                      mk(v * 0.37, 0.60, 0.03, 0, 0, 0),
                      mk(v * 0.30, 0.40, 0.30, 0, 0, 0)};
            break;
        case Family::Figarch:
            // (garch1 = b1, arch1 = phi1); every point checked admissible.
            starts = {mk(v * 0.05, 0.45, 0.20, 0.35, 0, 0),
                      mk(v * 0.08, 0.25, 0.10, 0.20, 0, 0),
                      mk(v * 0.03, 0.35, 0.05, 0.50, 0, 0),
                      mk(v * 0.10, 0.10, 0.05, 0.10, 0, 0),
                      mk(v * 0.05, 0.60, 0.30, 0.60, 0, 0)};
            break;
        case Family::Fiegarch: {
            const double lv = std::log(v);
            const double vc = c.volume ? 0.01 : 0.0;
            starts = {mk(lv * 0.80, 0.20, 0.30, 0.55, c.leverage ? -0.05 : 0, vc),
                      mk(lv * 0.50, 0.50, 0.15, 0.40, c.leverage ? -0.10 : 0, vc),
                      mk(lv * 0.90, 0.10, 0.20, 0.25, 0.0, vc),
                      mk(lv * 0.30, 0.70, 0.40, 0.65, c.leverage ? -0.03 : 0, vc),
                      mk(lv * 1.00, 0.00, 0.10, 0.10, c.leverage ? 0.05 : 0, vc)};
            break;
        }
    }
    return starts;
}

bool lexicographic_less(const std::vector<double>& a,
                        const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

}  // namespace

ModelFit fit(const ReturnSeries& r, const ModelSpec& spec) {
    return fit(r.values, spec);
}

ModelFit fit(const std::vector<double>& returns, const ModelSpec& spec) {
    const std::size_t n = returns.size();
    if (n < 500) throw input_error("fit: need at least 500 observations");
    if (!spec.exog_volume.empty()) {
        if (spec.family != Family::Fiegarch)
            throw input_error("fit: volume regressor is only valid for FIEGARCH");
        if (spec.exog_volume.size() != n)
            throw input_error("fit: volume series length mismatch");
    }

    const double mu = mean(returns);
    std::vector<double> eps(n);
    for (std::size_t t = 0; t < n; ++t) eps[t] = returns[t] - mu;

    FitContext c;
    c.family = spec.family;
    c.dist = spec.distribution;
    c.leverage = spec.family == Family::Fiegarch && spec.include_leverage;
    c.volume = spec.family == Family::Fiegarch && !spec.exog_volume.empty();
    c.K = spec.truncation_K;
    c.burn = spec.loglik_burn;
    c.eps = &eps;
    c.vol = &spec.exog_volume;
    c.sample_var = variance_biased(eps);
    if (!(c.sample_var > 0.0)) throw numeric_error("fit: constant return series");

    const auto objective = [&c](const std::vector<double>& t) {
        return mean_nll(c, t);
    };

    std::vector<ParamVector> starts = start_points(c);
    if (spec.family == Family::Figarch) {
        // A GARCH(1,1) prefit mapped through the d = 0 embedding replaces
        // one fixed start; it anchors the search near the short-memory
        // corner so the FIGARCH likelihood can never fall below the nested
        // model's by an optimization miss.
        try {
            ModelSpec gs = spec;
            gs.family = Family::Garch;
            gs.exog_volume.clear();
            const ModelFit g = fit(returns, gs);
            ParamVector mapped = garch_to_figarch(g.params);
            mapped.d = 0.02;
            mapped.nu = g.params.nu;
            ParamVector probe = mapped;
            std::vector<double> t0 = to_unconstrained(c, probe);
            if (mean_nll(c, t0) < 0.5 * kPenalty) starts[3] = mapped;
        } catch (const std::exception&) {
            // keep the fixed start table
        }
    }

    struct Candidate {
        std::vector<double> theta;
        ParamVector params;
        double mean_nll = kPenalty;
        double grad = std::numeric_limits<double>::infinity();
        bool converged = false;
    };
    Candidate best;
    bool have_best = false;

    for (const ParamVector& s : starts) {
        std::vector<double> t0;
        try {
            t0 = to_unconstrained(c, s);
        } catch (...) {
            continue;
        }
        if (!std::isfinite(mean_nll(c, t0))) continue;
        OptimResult nm = nelder_mead(objective, t0, 0.25, 300 * (int)t0.size());
        OptimResult qb = bfgs(objective, nm.x, 1e-5, 250);

        Candidate cand;
        cand.theta = qb.x;
        cand.params = from_unconstrained(c, qb.x);
        cand.mean_nll = qb.f;
        cand.grad = qb.grad_inf_norm;
        cand.converged = qb.converged || qb.grad_inf_norm < 1e-4;
        if (!std::isfinite(cand.mean_nll) || cand.mean_nll >= 0.5 * kPenalty)
            continue;

        if (!have_best) {
            best = cand;
            have_best = true;
            continue;
        }
        if (cand.mean_nll < best.mean_nll) {
            best = cand;
        } else if (cand.mean_nll == best.mean_nll) {
            // Same likelihood: BIC cannot split identical (ll, p), so fall
            // through to the parameter-order rule.
            if (lexicographic_less(pack_params(c, cand.params),
                                   pack_params(c, best.params)))
                best = cand;
        }
    }
    if (!have_best)
        throw fit_error("fit: no admissible start point produced a finite "
                        "likelihood",
                        ModelFit{});

    ModelFit out;
    out.family = spec.family;
    out.distribution = spec.distribution;
    out.params = best.params;
    out.param_names = param_names(c);
    out.estimates = pack_params(c, best.params);
    out.n_obs = n;
    out.mean_return = mu;
    out.grad_inf_norm = best.grad;
    out.n_free_params = static_cast<int>(out.estimates.size());
    out.loglik = -best.mean_nll * static_cast<double>(n);
    const auto [aic, bic] = info_criteria(out.loglik, out.n_free_params, n);
    out.aic = aic;
    out.bic = bic;

    if (!best.converged) {
        throw fit_error("fit: optimizer failed to reach the gradient "
                        "tolerance from any start (best grad " +
                            std::to_string(best.grad) + ")",
                        out);
    }

    // Paths and diagnostics at the optimum.
    switch (c.family) {
        case Family::Garch:
            out.sigma2_path = garch_filter(eps, best.params);
            break;
        case Family::Figarch:
            out.sigma2_path = figarch_filter(eps, best.params, c.K);
            break;
        case Family::Fiegarch: {
            int clamped = 0;
            out.sigma2_path =
                fiegarch_filter(eps, best.params, c.K, c.dist,
                                c.volume ? *c.vol : std::vector<double>{},
                                &clamped);
            if (clamped > 0)
                out.warnings.push_back("log-variance clamped on " +
                                       std::to_string(clamped) +
                                       " observations");
            break;
        }
    }
    out.std_residuals.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        out.std_residuals[t] = eps[t] / std::sqrt(out.sigma2_path[t]);
    {
        const double zvar = variance_biased(out.std_residuals);
        if (zvar < 0.8 || zvar > 1.2)
            out.warnings.push_back(
                "standardized residual variance " + std::to_string(zvar) +
                " outside [0.8, 1.2]");
    }
    std::vector<double> z2(n);
    for (std::size_t t = 0; t < n; ++t)
        z2[t] = out.std_residuals[t] * out.std_residuals[t];
    out.q2_12 = ljung_box(z2, 12);
    out.lm12 = engle_lm(out.std_residuals, 12);

    // Observed information in the original parameter space.
    const auto orig_nll_total = [&c](const std::vector<double>& v) {
        try {
            const ParamVector p = unpack_params(c, v);
            const double ll = loglik_at(c, p);
            return std::isfinite(ll) ? -ll : kPenalty;
        } catch (const numeric_error&) {
            return kPenalty;
        }
    };
    const std::vector<double> H =
        numerical_hessian(orig_nll_total, out.estimates, 1e-4);
    std::vector<double> cov;
    const std::size_t np = out.estimates.size();
    if (invert_spd(H, np, cov)) {
        bool ok = true;
        out.std_errors.resize(np);
        out.p_values.resize(np);
        for (std::size_t i = 0; i < np; ++i) {
            const double var = cov[i * np + i];
            if (!(var > 0.0) || !std::isfinite(var)) {
                ok = false;
                break;
            }
            out.std_errors[i] = std::sqrt(var);
            out.p_values[i] =
                normal_pvalue_two_sided(out.estimates[i] / out.std_errors[i]);
        }
        out.se_available = ok;
        if (!ok) {
            out.std_errors.clear();
            out.p_values.clear();
        }
    } else {
        out.se_available = false;
        out.warnings.push_back(
            "Hessian not positive definite; standard errors unavailable");
    }
    return out;
}

}  // namespace longmem
