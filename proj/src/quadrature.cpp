#include "abcert/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace abcert {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

double recurse(const Integrand& f, double a, double b, double tol_density, double rel_tol,
               int depth)
{
    double err = 0.0, l1 = 0.0;
    double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    // below a few hundred ulps of the L1 norm the estimate is round-off
    double floor = 256.0 * std::numeric_limits<double>::epsilon() * l1;
    double tol = std::max({tol_density * (b - a), rel_tol * l1, floor});
    if (err <= tol || depth >= 40 || b - a <= 1e-15 * (std::abs(a) + std::abs(b)))
        return v;
    double m = 0.5 * (a + b);
    return recurse(f, a, m, tol_density, rel_tol, depth + 1) +
           recurse(f, m, b, tol_density, rel_tol, depth + 1);
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol)
{
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, abs_tol, rel_tol);
    return recurse(f, a, b, abs_tol / (b - a), rel_tol, 0);
}

double integrate_tanh_sinh(const Integrand& f, double a, double b, double rel_tol)
{
    if (a == b) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, rel_tol);
}

}  // namespace abcert
