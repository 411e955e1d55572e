#pragma once

#include <functional>
#include <vector>

namespace longmem {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct OptimResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_inf_norm = 0.0;  // of the central-difference gradient at x
    int evaluations = 0;
    bool converged = false;
};

// Derivative-free simplex search. `step` sets the initial simplex spread
// per coordinate.
OptimResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                        double step = 0.25, int max_iter = 2000,
                        double ftol = 1e-10);

// Quasi-Newton polish with central-difference gradients and backtracking
// line search. Converged means the gradient inf-norm fell below gtol.
OptimResult bfgs(const ObjectiveFn& f, const std::vector<double>& x0,
                 double gtol = 1e-5, int max_iter = 300);

std::vector<double> numerical_gradient(const ObjectiveFn& f,
                                       const std::vector<double>& x,
                                       double rel_step = 1e-6);

// Symmetrized central-difference Hessian, relative step per coordinate.
std::vector<double> numerical_hessian(const ObjectiveFn& f,
                                      const std::vector<double>& x,
                                      double rel_step = 1e-4);

}  // namespace longmem
