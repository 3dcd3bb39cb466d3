#pragma once

#include "abcert/config.hpp"
#include "abcert/kinematics.hpp"
#include "abcert/xreal.hpp"

#include <array>
#include <vector>

namespace abcert {

using Vec3 = std::array<double, 3>;

// integral of e^{-1/(1-z^2)} over (-1, 1)
double iota();
// max of |d/dz e^{-1/(1-z^2)}|, closed form
double n_cap();

// normalized bump psi(z) = e^{-1/(1-z^2)}/iota and its first derivative
double psi_smooth(double z);
double psi_smooth_d1(double z);
// integral of psi over [lo, hi], by quadrature
double psi_mass(double lo, double hi);

// psi_{a,b,eps}: convolution of the indicator of [a,b] with psi_eps
class Mollifier {
public:
    Mollifier(double a, double b, double eps);
    double a() const { return a_; }
    double b() const { return b_; }
    double eps() const { return eps_; }

    double value(double z) const;
    double d1(double z) const;
    double d2(double z) const;
    // integral of value over [lo, hi]
    double integral(double lo, double hi) const;
    // breakpoints a-eps, a+eps, b-eps, b+eps
    std::array<double, 4> knots() const;

private:
    double a_, b_, eps_;
};

double psi_plateau(double a, double b, double eps, double z);

struct SupNormBounds {
    double B, dB_transverse, dB_vertical;  // m.13 - m.15
    double eta, p_eta;                     // m.16 - m.17
    double A, dA_transverse, dA_vertical;  // m.20 - m.22
};

struct CutoffBounds {
    double chi, dchi_transverse, dchi_vertical, laplacian;  // m.27 - m.30
};

struct CutoffDerivs {
    double value;
    Vec3 grad;
    double laplacian;
};

class FieldModel {
public:
    explicit FieldModel(const DerivedGeometry& g);

    const DerivedGeometry& geometry() const { return g_; }
    const Mollifier& radial() const { return radial_; }
    const Mollifier& vertical() const { return vertical_; }
    double normalization() const { return C_; }
    double normalization_lower() const;

    Vec3 b_field(const Point& x) const;
    // J[i][j] = d B_i / d x_j, closed form from the mollifier derivatives
    std::array<Vec3, 3> b_jacobian(const Point& x) const;
    Vec3 a_potential(const Point& x) const;
    Vec3 a3_gradient(const Point& x) const;
    double a3(double r, double x3) const;
    // integral of the radial plateau from r outward
    double radial_tail(double r) const;

    double flux_line_integral(double r, double theta) const;

    struct Segment {
        Point from, to;
    };
    double path_integral(const std::vector<Segment>& path) const;
    std::vector<Segment> gauge_path(const Point& x) const;
    // a second admissible path: radial move at the base height, then vertical
    std::vector<Segment> gauge_path_alt(const Point& x) const;
    double lambda_gauge(const Point& x) const;
    bool in_magnet(const Point& x) const;
    bool on_cut(const Point& x) const;

    SupNormBounds sup_bounds() const;

private:
    DerivedGeometry g_;
    Mollifier radial_, vertical_;
    double C_;
};

class Cutoff {
public:
    Cutoff(const DerivedGeometry& g, double sigma);
    double value(const Point& x) const;
    CutoffDerivs derivs(const Point& x) const;
    CutoffBounds bounds() const;
    double h() const { return h_; }
    double delta() const { return delta_; }

private:
    const DerivedGeometry* g_;
    double delta_, h_;
    Mollifier radial_, vertical_;
};

double cutoff_chi(const DerivedGeometry& g, const Point& x, double sigma);

struct CConstants {
    double pp, ps, sp, ss;
};

class FieldConstants {
public:
    explicit FieldConstants(const DerivedGeometry& g);
    double Icap() const { return I_; }
    double Jcap() const { return J_; }
    // m_bar evaluated at an explicit delta
    std::array<double, 5> m_bar_at_delta(double delta) const;
    std::array<double, 5> m_bar(double sigma) const;
    CConstants c_constants(double sigma) const;
    XReal r_tail(double zeta, double Z, double sigma) const;

private:
    DerivedGeometry g_;
    double I_, J_;
};

}  // namespace abcert
