#include "abcert/field_checks.hpp"

#include "abcert/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace abcert {

namespace {

void record(CheckReport& rep, const Point& x, const char* what, double value, double bound)
{
    ++rep.samples;
    double ratio = bound > 0.0 ? value / bound : (value > 0.0 ? INFINITY : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (!(value <= bound)) rep.violations.push_back({x[0], x[1], x[2], what, value, bound});
}

Point cyl(double r, double th, double z) { return {r * std::cos(th), r * std::sin(th), z}; }

// uniform point of the magnet K~
Point in_magnet_point(const DerivedGeometry& g, std::mt19937_64& rng)
{
    const auto& m = g.magnet;
    std::uniform_real_distribution<double> ur(m.r1_tilde, m.r2_tilde), ut(0, 2 * std::numbers::pi),
        uz(-m.h_tilde, m.h_tilde);
    return cyl(ur(rng), ut(rng), uz(rng));
}

}  // namespace

CheckReport check_flux(const DerivedGeometry& g)
{
    CheckReport rep;
    rep.name = "flux";
    FieldModel fm(g);
    const auto& m = g.magnet;
    double Phi = g.flux, tol = 1e-9 * std::abs(Phi);
    for (double r : {0.0, 0.25 * m.r1_tilde, 0.5 * m.r1_tilde, 0.9 * m.r1_tilde, m.r1_tilde})
        for (double th : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0})
            record(rep, cyl(r, th, 0), "flux_inside", std::abs(fm.flux_line_integral(r, th) - Phi), tol);
    for (double r : {m.r2_tilde, 1.5 * m.r2_tilde, 2.0 * m.r2_tilde})
        for (double th : {0.0, 2.5})
            record(rep, cyl(r, th, 0), "flux_outside", std::abs(fm.flux_line_integral(r, th)), tol);

    double h = m.h_tilde;
    const Point below[] = {{0, 0, -5 * h}, cyl(0.5 * m.r1_tilde, 0.3, -2 * h),
                           cyl(1.3 * m.r2_tilde, 1.1, -1.5 * h), cyl(0.5 * (m.r1_tilde + m.r2_tilde), 2, -1.01 * h)};
    const Point above[] = {{0, 0, 5 * h}, cyl(0.5 * m.r1_tilde, 0.3, 2 * h),
                           cyl(1.3 * m.r2_tilde, 1.1, 1.5 * h), cyl(0.5 * (m.r1_tilde + m.r2_tilde), 2, 1.01 * h)};
    for (const auto& x : below) record(rep, x, "lambda_below", std::abs(fm.lambda_gauge(x)), tol);
    for (const auto& x : above) record(rep, x, "lambda_above", std::abs(fm.lambda_gauge(x) - Phi), tol);

    const Point pairs[] = {cyl(0.5 * m.r1_tilde, 0.0, 0.3 * h), cyl(m.r1_tilde / 3, 1.0, -0.5 * h),
                           cyl(1.2 * m.r2_tilde, 0.7, 0.5 * h), cyl(1.2 * m.r2_tilde, 4.0, -0.5 * h),
                           cyl(0.5 * m.r1_tilde, 2.0, 1.5 * h)};
    for (const auto& x : pairs) {
        double a = fm.lambda_gauge(x), b = fm.path_integral(fm.gauge_path_alt(x));
        record(rep, x, "lambda_two_paths", std::abs(a - b), tol);
    }
    return rep;
}

CheckReport check_divergence(const DerivedGeometry& g, size_t n, uint64_t seed)
{
    CheckReport rep;
    rep.name = "divergence";
    FieldModel fm(g);
    std::mt19937_64 rng(seed);
    double scale = std::min(g.eps_tilde, g.delta_tilde);
    double step = 1e-3 * scale;
    double bound = 1e-4 * fm.sup_bounds().B / scale;
    for (size_t i = 0; i < n; ++i) {
        Point x = in_magnet_point(g, rng);
        double div = 0.0;
        for (int j = 0; j < 3; ++j) {
            Point p = x, q = x;
            p[j] += step;
            q[j] -= step;
            div += (fm.b_field(p)[j] - fm.b_field(q)[j]) / (2 * step);
        }
        record(rep, x, "div_B", std::abs(div), bound);
    }
    return rep;
}

CheckReport check_gauge(const DerivedGeometry& g, size_t n, uint64_t seed)
{
    CheckReport rep;
    rep.name = "gauge";
    FieldModel fm(g);
    std::mt19937_64 rng(seed);
    double step = 1e-3 * std::min(g.eps_tilde, g.delta_tilde);
    double floor = 1e-6 * fm.sup_bounds().B;
    for (size_t i = 0; i < n; ++i) {
        Point x = in_magnet_point(g, rng);
        auto d = [&](int j) {
            Point p = x, q = x;
            p[j] += step;
            q[j] -= step;
            return (fm.a_potential(p)[2] - fm.a_potential(q)[2]) / (2 * step);
        };
        Vec3 curl{d(1), -d(0), 0.0};
        Vec3 B = fm.b_field(x);
        double tol = 1e-3 * std::max(std::hypot(B[0], B[1], B[2]), floor);
        for (int j = 0; j < 3; ++j) record(rep, x, "curl_A_minus_B", std::abs(curl[j] - B[j]), tol);
    }
    return rep;
}

CheckReport check_supnorms(const DerivedGeometry& g, size_t n, uint64_t seed)
{
    CheckReport rep;
    rep.name = "supnorms";
    FieldModel fm(g);
    SupNormBounds sb = fm.sup_bounds();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& m = g.magnet;
    const double two_pi = 2 * std::numbers::pi;

    // field samples: half uniform around K~, half in the transition bands
    const auto& rad = fm.radial();
    const auto& ver = fm.vertical();
    auto band = [&](const Mollifier& mo) {
        double lo = u(rng) < 0.5 ? mo.a() - mo.eps() : mo.b() - mo.eps();
        return lo + 2 * mo.eps() * u(rng);
    };
    size_t nf = n / 2;
    for (size_t i = 0; i < nf; ++i) {
        double r, z;
        if (i % 2 == 0) {
            r = 1.2 * m.r2_tilde * u(rng);
            z = (2 * u(rng) - 1) * 1.2 * m.h_tilde;
        } else {
            r = u(rng) < 0.5 ? band(rad) : m.r1_tilde + (m.r2_tilde - m.r1_tilde) * u(rng);
            z = u(rng) < 0.5 ? band(ver) : (2 * u(rng) - 1) * m.h_tilde;
        }
        Point x = cyl(r, two_pi * u(rng), z);
        Vec3 B = fm.b_field(x);
        record(rep, x, "B", std::hypot(B[0], B[1], B[2]), sb.B);
        auto J = fm.b_jacobian(x);
        double dt = 0, dv = 0;
        for (int c = 0; c < 3; ++c) {
            dt = std::max({dt, std::abs(J[c][0]), std::abs(J[c][1])});
            dv = std::max(dv, std::abs(J[c][2]));
        }
        record(rep, x, "dB_transverse", dt, sb.dB_transverse);
        record(rep, x, "dB_vertical", dv, sb.dB_vertical);
        record(rep, x, "A", std::abs(fm.a_potential(x)[2]), sb.A);
        Vec3 dA = fm.a3_gradient(x);
        record(rep, x, "dA_transverse", std::max(std::abs(dA[0]), std::abs(dA[1])), sb.dA_transverse);
        record(rep, x, "dA_vertical", std::abs(dA[2]), sb.dA_vertical);
    }

    // cutoff samples over a spread of variances
    const double sigmas[] = {g.sigma_min(), g.sigma0, 1e-6, g.sigma_max()};
    size_t nc = (n - nf) / 4;
    for (double s : sigmas) {
        Cutoff chi(g, s);
        CutoffBounds cb = chi.bounds();
        double h = chi.h(), dl = chi.delta();
        for (size_t i = 0; i < nc; ++i) {
            // transition bands of chi are [r1, r1+eps] and [r2-eps, r2]
            double r = u(rng) < 0.5 ? (u(rng) < 0.5 ? g.r1 : g.r2 - g.eps) + g.eps * u(rng)
                                    : 1.2 * g.r2 * u(rng);
            double z = u(rng) < 0.5 ? (u(rng) < 0.5 ? -h : h - dl) + dl * u(rng)
                                    : (2 * u(rng) - 1) * 1.2 * h;
            Point x = cyl(r, two_pi * u(rng), z);
            CutoffDerivs d = chi.derivs(x);
            record(rep, x, "chi", std::abs(d.value), cb.chi);
            record(rep, x, "dchi_transverse", std::hypot(d.grad[0], d.grad[1]), cb.dchi_transverse);
            record(rep, x, "dchi_vertical", std::abs(d.grad[2]), cb.dchi_vertical);
            record(rep, x, "laplacian_chi", std::abs(d.laplacian), cb.laplacian);
        }
    }
    return rep;
}

CheckReport run_field_check(const std::string& which, const DerivedGeometry& g)
{
    if (which == "flux") return check_flux(g);
    if (which == "divergence") return check_divergence(g);
    if (which == "gauge") return check_gauge(g);
    if (which == "supnorms") return check_supnorms(g);
    throw std::invalid_argument("unknown field check '" + which + "'");
}

std::string check_csv(const CheckReport& rep)
{
    std::ostringstream os;
    os.precision(10);
    os << "x1,x2,x3,quantity,value,bound\n";
    for (const auto& v : rep.violations)
        os << v.x1 << ',' << v.x2 << ',' << v.x3 << ',' << v.quantity << ',' << v.value << ','
           << v.bound << '\n';
    return os.str();
}

}  // namespace abcert
