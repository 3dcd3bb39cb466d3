#pragma once

#include <functional>

namespace abcert {

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (61 point). Stops when the error estimate is below
// max(abs_tol, rel_tol * L1).
double integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol = 0.0);

// Independent check path: tanh-sinh on a finite interval.
double integrate_tanh_sinh(const Integrand& f, double a, double b, double rel_tol = 1e-13);

}  // namespace abcert
