#include "longmem/fracdiff.hpp"

#include "longmem/errors.hpp"

#include <algorithm>
#include <cstddef>

namespace longmem {

FracDiffFilter fracdiff_coeffs(double d, int K) {
    if (!(d > -1.0 && d <= 1.0))
        throw input_error("fracdiff_coeffs: d must lie in (-1, 1]");
    if (K < 1) throw input_error("fracdiff_coeffs: K must be >= 1");
    FracDiffFilter f;
    f.d = d;
    f.truncation_K = K;
    f.coeffs.resize(static_cast<std::size_t>(K) + 1);
    f.coeffs[0] = 1.0;
    for (int k = 1; k <= K; ++k)
        f.coeffs[k] = f.coeffs[k - 1] * (static_cast<double>(k - 1) - d) /
                      static_cast<double>(k);
    return f;
}

std::vector<double> fracdiff_filter(const std::vector<double>& x, double d,
                                    int K) {
    const FracDiffFilter f = fracdiff_coeffs(d, K);
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t kmax = std::min<std::size_t>(t, f.coeffs.size() - 1);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k) acc += f.coeffs[k] * x[t - k];
        y[t] = acc;
    }
    return y;
}

ArchInftyWeights arch_infty_weights(double d, double phi1, double b1, int K) {
    if (!(d >= 0.0 && d < 1.0))
        throw input_error("arch_infty_weights: d must lie in [0, 1)");
    if (K < 1) throw input_error("arch_infty_weights: K must be >= 1");
    const FracDiffFilter f = fracdiff_coeffs(d, K);

    ArchInftyWeights w;
    w.d = d;
    w.phi1 = phi1;
    w.b1 = b1;
    w.lambda.resize(K);
    double prev = phi1 - b1 + d;
    w.lambda[0] = prev;
    // pi'_k = -pi_k are the positive-lag coefficients of -(1-L)^d.
    double pip_prev = -f.coeffs[1];
    for (int k = 2; k <= K; ++k) {
        const double pip_k = -f.coeffs[k];
        const double lam = b1 * prev + (pip_k - phi1 * pip_prev);
        w.lambda[k - 1] = lam;
        prev = lam;
        pip_prev = pip_k;
    }
    for (int k = 0; k < K; ++k) {
        if (w.lambda[k] < 0.0) {
            w.first_negative = k + 1;
            break;
        }
    }
    return w;
}

std::vector<double> fracint_ma_coeffs(double d, int K) {
    if (!(d > -1.0 && d < 1.0))
        throw input_error("fracint_ma_coeffs: d must lie in (-1, 1)");
    if (K < 1) throw input_error("fracint_ma_coeffs: K must be >= 1");
    std::vector<double> psi(static_cast<std::size_t>(K) + 1);
    psi[0] = 1.0;
    for (int k = 1; k <= K; ++k)
        psi[k] = psi[k - 1] * (static_cast<double>(k - 1) + d) /
                 static_cast<double>(k);
    return psi;
}

}  // namespace longmem
