#pragma once

#include <functional>

namespace cusptrace {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int evals = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 8192;
};

// Globally adaptive Gauss-Kronrod (G7,K15) on [a,b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// [a, +inf), mapped through r = a + tan(theta).
QuadResult integrate_half_line(const std::function<double(double)>& f, double a,
                               const QuadOptions& opt = {});

// Raises NumericalError with `what` if the estimate failed to converge and the
// error estimate exceeds `hard_limit` (absolute).
void require_quadrature(const QuadResult& q, double hard_limit, const char* what);

}  // namespace cusptrace
