#pragma once

#include "longmem/acf.hpp"
#include "longmem/series.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace longmem {

enum class Family { Garch, Figarch, Fiegarch };
enum class Distribution { StudentT, Gaussian };

// What to fit. Volume enters only the FIEGARCH log-variance equation (the
// regressor can be negative, which a level-variance equation cannot absorb).
struct ModelSpec {
    Family family = Family::Figarch;
    bool include_leverage = true;            // FIEGARCH only
    std::vector<double> exog_volume;         // aligned volume changes, optional
    int truncation_K = 1000;
    Distribution distribution = Distribution::StudentT;
    int loglik_burn = 0;  // leading likelihood terms to drop (sensitivity runs)
};

// One point in parameter space. Role of the slots by family:
//   Garch:    a = intercept, arch1 = alpha, garch1 = beta
//   Figarch:  a = intercept, arch1 = phi1, garch1 = b1, d
//   Fiegarch: a = log-variance intercept, arch1 = magnitude coefficient,
//             garch1 = AR(1) root phi1, leverage, volume_coef, d
struct ParamVector {
    double a = 0.0;
    double arch1 = 0.0;
    double garch1 = 0.0;
    double d = 0.0;
    double leverage = 0.0;
    double volume_coef = 0.0;
    double nu = 8.0;
};

struct ModelFit {
    Family family = Family::Garch;
    Distribution distribution = Distribution::StudentT;
    ParamVector params;
    std::vector<std::string> param_names;  // free parameters, report order
    std::vector<double> estimates;         // aligned with param_names
    std::vector<double> std_errors;
    std::vector<double> p_values;
    bool se_available = false;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::vector<double> sigma2_path;
    std::vector<double> std_residuals;
    PortmanteauResult q2_12;   // Ljung-Box on squared standardized residuals
    PortmanteauResult lm12;    // Engle LM, 12th order
    double grad_inf_norm = 0.0;  // of the mean-NLL at the optimum
    std::size_t n_obs = 0;
    int n_free_params = 0;
    double mean_return = 0.0;  // the constant mean-equation estimate
    std::vector<std::string> warnings;
};

// Raised when no start converges; carries the best point reached so the
// caller can inspect what went wrong.
class fit_error : public std::runtime_error {
public:
    fit_error(const std::string& msg, ModelFit incumbent)
        : std::runtime_error(msg), best_incumbent(std::move(incumbent)) {}
    ModelFit best_incumbent;
};

// Conditional-variance recursions. All take centered innovations; fit()
// handles the constant mean equation. Pre-sample squared innovations and
// variances start at the sample variance of eps.
std::vector<double> garch_filter(const std::vector<double>& eps,
                                 const ParamVector& p);

// sigma2_t = a/(1-b1) + sum_k lambda_k eps2_{t-k}; throws numeric_error when
// an ARCH(inf) weight is negative (the fitter treats that as a rejection).
std::vector<double> figarch_filter(const std::vector<double>& eps,
                                   const ParamVector& p, int K);

// Log-variance recursion with news impact g(x) = leverage*x + arch1*(|x| -
// E|x|) pushed through (1-phi1 L)^{-1} (1-L)^{-d}, plus the optional volume
// term. Log-variance is clamped at +-50; `clamped`, when given, reports how
// often.
std::vector<double> fiegarch_filter(const std::vector<double>& eps,
                                    const ParamVector& p, int K,
                                    Distribution dist,
                                    const std::vector<double>& volume = {},
                                    int* clamped = nullptr);

double student_t_loglik(const std::vector<double>& eps,
                        const std::vector<double>& sigma2, double nu,
                        int burn = 0);
double gaussian_loglik(const std::vector<double>& eps,
                       const std::vector<double>& sigma2, int burn = 0);

// (aic, bic) = (-2 ll + 2p, -2 ll + p ln n).
std::pair<double, double> info_criteria(double loglik, int p, std::size_t n);

// Engle's LM test: squared standardized residuals regressed on a constant
// and m own lags; statistic (n-m) R^2 against chi-square(m).
PortmanteauResult engle_lm(const std::vector<double>& std_residuals, int m);

// Student-t maximum likelihood over the admissible region: Nelder-Mead from
// five deterministic starts, BFGS polish, best likelihood wins (ties by BIC,
// then parameter order). Standard errors from the finite-difference Hessian.
ModelFit fit(const ReturnSeries& r, const ModelSpec& spec);
ModelFit fit(const std::vector<double>& returns, const ModelSpec& spec);

// The d = 0 embedding of a GARCH(1,1) into FIGARCH(1,d,1):
// phi1 = alpha + beta, b1 = beta.
ParamVector garch_to_figarch(const ParamVector& garch);

}  // namespace longmem
