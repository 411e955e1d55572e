#pragma once

#include <cstddef>
#include <vector>

namespace longmem {

// Truncated expansion of the fractional difference operator (1-L)^d.
// coeffs[0] = 1 and coeffs[k] = coeffs[k-1] * (k-1-d) / k; for d in (0,1)
// every coefficient past lag 0 is negative and the partial sums fall to 0.
struct FracDiffFilter {
    double d = 0.0;
    std::vector<double> coeffs;  // pi_0 .. pi_K
    int truncation_K = 0;
};

// ARCH(infinity) weights of a FIGARCH(1,d,1):
//   lambda_1 = phi1 - b1 + d
//   lambda_k = b1*lambda_{k-1} + (pi'_k - phi1*pi'_{k-1}),  pi'_k = -pi_k.
// Conditional variance needs every weight nonnegative; the index of the
// first violation is reported so the fitter can reject the point.
struct ArchInftyWeights {
    std::vector<double> lambda;  // lambda_1 .. lambda_K
    double d = 0.0;
    double phi1 = 0.0;
    double b1 = 0.0;
    int first_negative = -1;  // 1-based lag of the first negative weight

    bool admissible() const { return first_negative < 0; }
};

FracDiffFilter fracdiff_coeffs(double d, int K);

// y_t = sum_{k=0}^{min(t,K)} pi_k x_{t-k}; pre-sample values are zero.
std::vector<double> fracdiff_filter(const std::vector<double>& x, double d,
                                    int K);

ArchInftyWeights arch_infty_weights(double d, double phi1, double b1, int K);

// MA(infinity) weights of (1-L)^{-d}: psi_0 = 1,
// psi_k = psi_{k-1} * (k-1+d) / k. Used by the ARFIMA generator and the
// FIEGARCH log-variance filter.
std::vector<double> fracint_ma_coeffs(double d, int K);

}  // namespace longmem
