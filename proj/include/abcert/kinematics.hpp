#pragma once

#include "abcert/config.hpp"
#include "abcert/xreal.hpp"

#include <array>

namespace abcert {

// erf(u) - erf(l) without cancellation in the tails
double erf_diff(double l, double u);
// log erfc(x), valid for all x (asymptotic series beyond the double range)
double log_erfc(double x);

double rho(double sigma, double mv, double z);
double theta_inv(double sigma, double mv, double z, double s, double zeta);
// short form theta_inv(sigma, z) = theta_inv(sigma, z, z, h(sigma))
double theta_inv(const DerivedGeometry& g, double sigma, double z);

double upsilon(double sigma, double mv, double z, double s, double zeta);
double theta_big(double sigma, double mv, double z, double s, double zeta);
// Upsilon as an XReal, usable when both limits sit deep in the tail
XReal upsilon_x(double sigma, double mv, double z, double s, double zeta);

// Solution of (z - zeta) rho(sigma, z) = omega_inv.
double z_crossing(double omega_inv, double sigma, double mv, double zeta);
// max over the two variances
double z_crossing2(double omega_inv, double sigma1, double sigma2, double mv, double zeta);

double omega_tilde_inv(double sigma, double mv);
double z_of_sigma(const DerivedGeometry& g, double sigma);

double r_pair(double sigma1, double sigma2, double r1, double mv);

struct GaussianState {
    double sigma;
    double mv;
};
using Point = std::array<double, 3>;

double evolved_density(const GaussianState& st, double z, const Point& x);
// density as a function of the distance from the packet centre
double evolved_density_radial(const GaussianState& st, double z, double dist);
// probability that the packet at time z lies outside the cylinder r <= r1
double hole_miss_probability(const GaussianState& st, double z, double r1);

double packet_radius(double sigma);
double opening_angle_deg(double sigma, double mv);

inline constexpr double kRadiusFactor = 2.382;

}  // namespace abcert
