#include "abcert/kinematics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace abcert {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// beyond this, std::erfc underflows or loses its relative accuracy
constexpr double kErfcSwitch = 25.0;

}  // namespace

double log_erfc(double x)
{
    if (x < kErfcSwitch) return std::log(std::erfc(x));
    // erfc(x) = e^{-x^2}/(x sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4) - 15/(8x^6) + ...)
    double t = 1.0 / (2.0 * x * x);
    double series = 1.0 - t + 3.0 * t * t - 15.0 * t * t * t;
    return -x * x - std::log(x * kSqrtPi) + std::log(series);
}

double erf_diff(double l, double u)
{
    if (l >= 0.0) return std::erfc(l) - std::erfc(u);
    if (u <= 0.0) return std::erfc(-u) - std::erfc(-l);
    return std::erf(u) - std::erf(l);
}

double rho(double sigma, double mv, double z)
{
    double s = sigma * mv;
    return s / std::hypot(sigma * s, z);
}

double theta_inv(double sigma, double mv, double z, double s, double zeta)
{
    return (zeta - s) * rho(sigma, mv, z);
}

double theta_inv(const DerivedGeometry& g, double sigma, double z)
{
    return theta_inv(sigma, g.mv(), z, z, g.h(sigma));
}

double upsilon(double sigma, double mv, double z, double s, double zeta)
{
    double l = theta_inv(sigma, mv, z, s, -zeta);
    double u = theta_inv(sigma, mv, z, z, zeta);
    if (l == u) return 0.0;
    return 0.5 * kSqrtPi * erf_diff(l, u);
}

double theta_big(double sigma, double mv, double z, double s, double zeta)
{
    double l = theta_inv(sigma, mv, z, s, -zeta);
    double u = theta_inv(sigma, mv, z, z, zeta);
    if (l == u) return 0.0;
    return 0.25 * kSqrtPi * erf_diff(l, u) - 0.5 * (u * std::exp(-u * u) - l * std::exp(-l * l));
}

XReal upsilon_x(double sigma, double mv, double z, double s, double zeta)
{
    double l = theta_inv(sigma, mv, z, s, -zeta);
    double u = theta_inv(sigma, mv, z, z, zeta);
    if (!(l < u)) return XReal();
    double lg;
    if (u <= -kErfcSwitch) {
        double a = log_erfc(-u), b = log_erfc(-l);
        lg = a + std::log1p(-std::exp(b - a));
    } else if (l >= kErfcSwitch) {
        double a = log_erfc(l), b = log_erfc(u);
        lg = a + std::log1p(-std::exp(b - a));
    } else {
        return XReal::from_f64(0.5 * kSqrtPi * erf_diff(l, u));
    }
    if (std::isinf(lg)) return XReal();
    double v = std::log(0.5 * kSqrtPi) + lg;
    return XReal::from_log(std::nextafter(v, std::numeric_limits<double>::infinity()));
}

double z_crossing(double omega_inv, double sigma, double mv, double zeta)
{
    double S = sigma * mv;
    if (!(omega_inv >= 0.0) || !(omega_inv < S))
        throw domain_error("z_crossing: need 0 < omega_inv < sigma*mv");
    if (omega_inv == 0.0) return zeta;
    double w = omega_inv;
    double D = (S - w) * (S + w);
    double root = S * w * std::sqrt(zeta * zeta + sigma * sigma * D);
    double z;
    if (zeta >= 0.0) {
        z = (zeta * S * S + root) / D;
    } else {
        double zm = (zeta * S * S - root) / D;
        z = S * S * (zeta * zeta - w * w * sigma * sigma) / (D * zm);
    }
    // one Newton step on (z - zeta) rho(z) = w
    double q = sigma * S;
    double n2 = q * q + z * z;
    double r = S / std::sqrt(n2);
    double f = (z - zeta) * r - w;
    double fp = r - (z - zeta) * r * z / n2;
    if (fp != 0.0 && std::isfinite(f / fp)) z -= f / fp;
    return z;
}

double z_crossing2(double omega_inv, double sigma1, double sigma2, double mv, double zeta)
{
    return std::max(z_crossing(omega_inv, sigma1, mv, zeta),
                    z_crossing(omega_inv, sigma2, mv, zeta));
}

double omega_tilde_inv(double sigma, double mv)
{
    return std::min(std::sqrt(33.0 / 34.0) * sigma * mv, std::sqrt(2000.0));
}

double z_of_sigma(const DerivedGeometry& g, double sigma)
{
    return z_crossing(omega_tilde_inv(sigma, g.mv()), sigma, g.mv(), g.h(sigma));
}

double r_pair(double sigma1, double sigma2, double r1, double mv)
{
    auto lam = [&](double s) {
        if (!(s > 0.0 && s < r1)) throw domain_error("r_pair: sigma must lie in (0, r1)");
        return s * mv * std::sqrt((r1 - s) * (r1 + s));
    };
    return std::min(lam(sigma1), lam(sigma2));
}

double evolved_density_radial(const GaussianState& st, double z, double dist)
{
    double r = rho(st.sigma, st.mv, z);
    return std::pow(std::numbers::pi, -1.5) * r * r * r * std::exp(-dist * dist * r * r);
}

double evolved_density(const GaussianState& st, double z, const Point& x)
{
    double d2 = x[0] * x[0] + x[1] * x[1] + (x[2] - z) * (x[2] - z);
    return evolved_density_radial(st, z, std::sqrt(d2));
}

double hole_miss_probability(const GaussianState& st, double z, double r1)
{
    double r = rho(st.sigma, st.mv, z);
    return std::exp(-r1 * r1 * r * r);
}

double packet_radius(double sigma) { return kRadiusFactor * sigma; }

double opening_angle_deg(double sigma, double mv)
{
    double s = kRadiusFactor / (sigma * mv);
    if (!(s <= 1.0)) throw domain_error("opening angle undefined: 2.382/(sigma*mv) > 1");
    return 2.0 * std::asin(s) * 180.0 / std::numbers::pi;
}

}  // namespace abcert
