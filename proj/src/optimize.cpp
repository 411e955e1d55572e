#include "longmem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace longmem {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

std::vector<double> numerical_gradient(const ObjectiveFn& f,
                                       const std::vector<double>& x,
                                       double rel_step) {
    const std::size_t p = x.size();
    std::vector<double> g(p, 0.0), xp = x;
    for (std::size_t i = 0; i < p; ++i) {
        const double h = rel_step * std::max(1.0, std::fabs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<double> numerical_hessian(const ObjectiveFn& f,
                                      const std::vector<double>& x,
                                      double rel_step) {
    const std::size_t p = x.size();
    std::vector<double> h(p);
    for (std::size_t i = 0; i < p; ++i)
        h[i] = rel_step * std::max(0.01, std::fabs(x[i]));

    std::vector<double> H(p * p, 0.0), xp = x;
    const double f0 = f(x);
    for (std::size_t i = 0; i < p; ++i) {
        xp[i] = x[i] + h[i];
        const double fp = f(xp);
        xp[i] = x[i] - h[i];
        const double fm = f(xp);
        xp[i] = x[i];
        H[i * p + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            xp[i] = x[i] + h[i];
            xp[j] = x[j] + h[j];
            const double fpp = f(xp);
            xp[j] = x[j] - h[j];
            const double fpm = f(xp);
            xp[i] = x[i] - h[i];
            const double fmm = f(xp);
            xp[j] = x[j] + h[j];
            const double fmp = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            H[i * p + j] = v;
            H[j * p + i] = v;
        }
    }
    return H;
}

OptimResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                        double step, int max_iter, double ftol) {
    const std::size_t p = x0.size();
    const std::size_t m = p + 1;
    std::vector<std::vector<double>> simplex(m, x0);
    std::vector<double> fv(m);
    int evals = 0;
    for (std::size_t i = 1; i < m; ++i)
        simplex[i][i - 1] += step * std::max(1.0, std::fabs(x0[i - 1]));
    for (std::size_t i = 0; i < m; ++i) {
        fv[i] = f(simplex[i]);
        ++evals;
    }

    std::vector<std::size_t> order(m);
    auto sort_simplex = [&]() {
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };

    std::vector<double> centroid(p), xr(p), xe(p), xc(p);
    for (int it = 0; it < max_iter; ++it) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[m - 1],
                          second = order[m - 2];
        if (std::fabs(fv[worst] - fv[best]) <=
            ftol * (std::fabs(fv[best]) + std::fabs(fv[worst]) + 1e-300))
            break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < p; ++k) centroid[k] += simplex[i][k];
        }
        for (std::size_t k = 0; k < p; ++k) centroid[k] /= static_cast<double>(p);

        for (std::size_t k = 0; k < p; ++k)
            xr[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
        const double fr = f(xr);
        ++evals;

        if (fr < fv[order[0]]) {
            for (std::size_t k = 0; k < p; ++k)
                xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            if (outside) {
                for (std::size_t k = 0; k < p; ++k)
                    xc[k] = centroid[k] + 0.5 * (xr[k] - centroid[k]);
            } else {
                for (std::size_t k = 0; k < p; ++k)
                    xc[k] = centroid[k] - 0.5 * (centroid[k] - simplex[worst][k]);
            }
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < p; ++k)
                        simplex[i][k] = simplex[best][k] +
                                        0.5 * (simplex[i][k] - simplex[best][k]);
                    fv[i] = f(simplex[i]);
                    ++evals;
                }
            }
        }
    }
    sort_simplex();
    OptimResult out;
    out.x = simplex[order[0]];
    out.f = fv[order[0]];
    out.evaluations = evals;
    out.converged = true;  // simplex convergence is advisory; BFGS decides
    return out;
}

OptimResult bfgs(const ObjectiveFn& f, const std::vector<double>& x0,
                 double gtol, int max_iter) {
    const std::size_t p = x0.size();
    std::vector<double> x = x0;
    double fx = f(x);
    int evals = 1;
    std::vector<double> g = numerical_gradient(f, x);
    evals += static_cast<int>(2 * p);

    // Inverse Hessian approximation, started at identity.
    std::vector<double> Hinv(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) Hinv[i * p + i] = 1.0;

    std::vector<double> dir(p), xn(p), gn(p), s(p), yv(p), Hy(p);
    bool converged = inf_norm(g) < gtol;

    for (int it = 0; it < max_iter && !converged; ++it) {
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += Hinv[i * p + j] * g[j];
            dir[i] = -acc;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
        if (!(slope < 0.0)) {
            // Bad curvature state; restart from steepest descent.
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    Hinv[i * p + j] = (i == j) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < p; ++i) dir[i] = -g[i];
            slope = 0.0;
            for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
            if (!(slope < 0.0)) break;
        }

        // Backtracking Armijo search.
        double alpha = 1.0;
        double fn = std::numeric_limits<double>::infinity();
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < p; ++i) xn[i] = x[i] + alpha * dir[i];
            fn = f(xn);
            ++evals;
            if (std::isfinite(fn) && fn <= fx + 1e-4 * alpha * slope) {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!ok) break;

        gn = numerical_gradient(f, xn);
        evals += static_cast<int>(2 * p);

        double sy = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            s[i] = xn[i] - x[i];
            yv[i] = gn[i] - g[i];
            sy += s[i] * yv[i];
        }
        const double f_prev = fx;
        x = xn;
        fx = fn;
        g = gn;
        if (inf_norm(g) < gtol) {
            converged = true;
            break;
        }
        // Stalled: objective and step both at machine-level resolution.
        double snorm = inf_norm(s);
        if (std::fabs(f_prev - fx) <=
                1e-14 * (std::fabs(fx) + std::fabs(f_prev) + 1e-300) &&
            snorm < 1e-12)
            break;

        if (sy > 1e-12 * snorm * inf_norm(yv)) {
            // Standard BFGS inverse update.
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < p; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < p; ++j)
                    acc += Hinv[i * p + j] * yv[j];
                Hy[i] = acc;
            }
            double yHy = 0.0;
            for (std::size_t i = 0; i < p; ++i) yHy += yv[i] * Hy[i];
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t j = 0; j < p; ++j) {
                    Hinv[i * p + j] +=
                        (1.0 + rho * yHy) * rho * s[i] * s[j] -
                        rho * (Hy[i] * s[j] + s[i] * Hy[j]);
                }
            }
        }
    }

    OptimResult out;
    out.x = x;
    out.f = fx;
    out.grad_inf_norm = inf_norm(g);
    out.evaluations = evals;
    out.converged = converged || out.grad_inf_norm < gtol;
    return out;
}

}  // namespace longmem
