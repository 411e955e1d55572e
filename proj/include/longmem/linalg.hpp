#pragma once

#include <cstddef>
#include <vector>

namespace longmem {

// Small dense helpers for the regression and Hessian work in this project
// (matrices never exceed ~13x13). Row-major flat storage.

// Cholesky factor of a symmetric positive-definite matrix; returns false
// if the matrix is not positive definite. On success `lower` holds L with
// a(i,j) = sum_k L(i,k) L(j,k).
bool cholesky(const std::vector<double>& a, std::size_t n,
              std::vector<double>& lower);

// Solve a x = b for SPD a via Cholesky; returns false when not PD.
bool solve_spd(const std::vector<double>& a, std::size_t n,
               const std::vector<double>& b, std::vector<double>& x);

// Inverse of an SPD matrix; returns false when not PD.
bool invert_spd(const std::vector<double>& a, std::size_t n,
                std::vector<double>& inv);

// Ordinary least squares: X is n_rows x n_cols (row-major), y length
// n_rows. Returns false when the normal equations are singular.
bool ols(const std::vector<double>& X, std::size_t n_rows, std::size_t n_cols,
         const std::vector<double>& y, std::vector<double>& beta);

}  // namespace longmem
