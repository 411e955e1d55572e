#include "longmem/linalg.hpp"

#include <cmath>

namespace longmem {

bool cholesky(const std::vector<double>& a, std::size_t n,
              std::vector<double>& lower) {
    lower.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                sum -= lower[i * n + k] * lower[j * n + k];
            if (i == j) {
                if (!(sum > 0.0) || !std::isfinite(sum)) return false;
                lower[i * n + i] = std::sqrt(sum);
            } else {
                lower[i * n + j] = sum / lower[j * n + j];
            }
        }
    }
    return true;
}

bool solve_spd(const std::vector<double>& a, std::size_t n,
               const std::vector<double>& b, std::vector<double>& x) {
    std::vector<double> L;
    if (!cholesky(a, n, L)) return false;
    // Forward then backward substitution.
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
        y[i] = s / L[i * n + i];
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L[k * n + ii] * x[k];
        x[ii] = s / L[ii * n + ii];
    }
    return true;
}

bool invert_spd(const std::vector<double>& a, std::size_t n,
                std::vector<double>& inv) {
    inv.assign(n * n, 0.0);
    std::vector<double> e(n, 0.0), col;
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        if (!solve_spd(a, n, e, col)) return false;
        for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
    }
    return true;
}

bool ols(const std::vector<double>& X, std::size_t n_rows, std::size_t n_cols,
         const std::vector<double>& y, std::vector<double>& beta) {
    std::vector<double> xtx(n_cols * n_cols, 0.0), xty(n_cols, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double* row = &X[r * n_cols];
        for (std::size_t i = 0; i < n_cols; ++i) {
            xty[i] += row[i] * y[r];
            for (std::size_t j = 0; j <= i; ++j)
                xtx[i * n_cols + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < n_cols; ++i)
        for (std::size_t j = i + 1; j < n_cols; ++j)
            xtx[i * n_cols + j] = xtx[j * n_cols + i];
    return solve_spd(xtx, n_cols, xty, beta);
}

}  // namespace longmem
