#include "abcert/field.hpp"
#include "abcert/field_checks.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace abcert;

namespace {

const double kPi = std::numbers::pi;
const double kE = std::numbers::e;

DerivedGeometry k2e1() { return derive(builtin_magnets().k2, builtin_beams().e1); }

double bump(double z) { return std::abs(z) < 1 ? std::exp(-1 / (1 - z * z)) : 0.0; }

}  // namespace

TEST_CASE("iota and N")
{
    double ref = oracle::tanh_sinh(bump, -1, 1);
    CHECK(iota() == doctest::Approx(ref).epsilon(1e-13));
    CHECK(iota() == doctest::Approx(0.443994).epsilon(2e-6));
    double t = 1.5 + std::sqrt(0.75);
    CHECK(n_cap() == doctest::Approx(2 * std::exp(-t) * t * t * std::sqrt(1 - 1 / t)).epsilon(1e-15));
    CHECK(n_cap() == doctest::Approx(0.7980).epsilon(1e-3));
}

TEST_CASE("psi_plateau examples")
{
    CHECK(psi_plateau(0, 1, 0.1, 0.5) == 1.0);
    CHECK(psi_plateau(0, 1, 0.1, -0.2) == 0.0);
    CHECK(psi_plateau(0, 1, 0.1, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(psi_plateau(0, 1, 0.1, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(psi_plateau(0, 1, 0.5, 0.2), domain_error);
    CHECK_THROWS_AS(Mollifier(0, 1, 0.0), domain_error);
}

TEST_CASE("mollifier value against the convolution integral")
{
    // psi_{a,b,eps}(z) = int_a^b psi_eps(z - y) dy, computed directly
    double a = 0.3, b = 2.1, eps = 0.25, io = oracle::tanh_sinh(bump, -1, 1);
    Mollifier m(a, b, eps);
    for (int i = 0; i <= 200; ++i) {
        double z = a - 2 * eps + i * (b - a + 4 * eps) / 200;
        double lo = std::max(a, z - eps), hi = std::min(b, z + eps);
        double ref = hi > lo ? oracle::gauss([&](double y) { return bump((z - y) / eps) / (io * eps); }, lo, hi, 8) : 0.0;
        CHECK(m.value(z) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("mollifier bounds")
{
    double io = iota(), N = n_cap();
    for (double eps : {0.01, 0.1, 1.0}) {
        Mollifier m(0.0, 10.0, eps);
        double d1max = 0, d2max = 0;
        for (int i = 0; i <= 20000; ++i) {
            double z = -2 * eps + i * 4 * eps / 20000;
            double v = m.value(z);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            d1max = std::max(d1max, std::abs(m.d1(z)));
            d2max = std::max(d2max, std::abs(m.d2(z)));
        }
        CHECK(d1max <= 1 / (io * kE * eps) * (1 + 1e-14));
        CHECK(d1max == doctest::Approx(1 / (io * kE * eps)).epsilon(1e-6));
        CHECK(d2max * io * eps * eps / 2 <= N * (1 + 1e-14));
        // the closed form carries a factor two of slack over the sampled maximum
        CHECK(d2max * io * eps * eps / 2 == doctest::Approx(N / 2).epsilon(1e-4));
        CHECK(m.value(eps) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.value(10 - eps) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.value(10 + eps) == 0.0);
        CHECK(m.value(-eps) == 0.0);
    }
}

TEST_CASE("mollifier integral")
{
    Mollifier m(0.3, 2.1, 0.25);
    // mass is preserved by the convolution
    CHECK(m.integral(0.0, 3.0) == doctest::Approx(1.8).epsilon(1e-13));
    for (auto [lo, hi] : {std::pair{0.0, 0.4}, {0.1, 1.0}, {0.5, 2.2}, {2.0, 2.3}, {-1.0, 0.2}}) {
        double ref = oracle::gauss([&](double z) { return m.value(z); }, lo, hi, 16);
        CHECK(m.integral(lo, hi) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(m.integral(hi, lo) == doctest::Approx(-ref).epsilon(1e-12));
    }
}

TEST_CASE("field and potential basics")
{
    auto g = k2e1();
    FieldModel fm(g);
    const auto& mg = g.magnet;
    // normalization: each mollifier integrates to its plateau length
    double C = (mg.r2_tilde - mg.r1_tilde - 2 * g.eps_tilde) * (2 * mg.h_tilde - 2 * g.delta_tilde);
    CHECK(fm.normalization() == doctest::Approx(C).epsilon(1e-10));
    CHECK(fm.normalization() >= fm.normalization_lower());

    auto B = fm.b_field({mg.r1_tilde / 2, 0, 0});
    CHECK(B[0] == 0.0);
    CHECK(B[1] == 0.0);
    CHECK(B[2] == 0.0);
    auto B2 = fm.b_field({0, 0.5 * (mg.r1_tilde + mg.r2_tilde), 0});
    CHECK(std::hypot(B2[0], B2[1]) == doctest::Approx(g.flux / C).epsilon(1e-12));
    CHECK(std::hypot(B2[0], B2[1]) <= kPi / ((mg.h_tilde - 2 * g.delta_tilde) * (mg.r2_tilde - mg.r1_tilde - 4 * g.eps_tilde)));

    // A vanishes outside the convex hull of the magnet
    CHECK(fm.a_potential({2 * mg.r2_tilde, 0, 0})[2] == 0.0);
    CHECK(fm.a_potential({0, 0, 2 * mg.h_tilde})[2] == 0.0);
    double a0 = fm.a_potential({0, 0, 0})[2];
    CHECK(a0 == doctest::Approx(g.flux / C * (mg.r2_tilde - mg.r1_tilde - 2 * g.eps_tilde)).epsilon(1e-10));

    // radial tail against direct quadrature of the radial profile
    const auto& rad = fm.radial();
    auto k = rad.knots();
    for (double r : {0.0, k[0] + 0.3 * rad.eps(), 0.5 * (k[1] + k[2]), k[2] + 0.7 * rad.eps()}) {
        double lo = std::max(r, k[0]);
        // split at the knots so each panel sees a smooth piece
        double ref = 0;
        for (int j = 0; j < 3; ++j) {
            double a = std::max(lo, k[j]);
            if (a < k[j + 1]) ref += oracle::gauss([&](double t) { return rad.value(t); }, a, k[j + 1], 32);
        }
        CHECK(fm.radial_tail(r) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("cutoff chi")
{
    auto g = k2e1();
    const auto& mg = g.magnet;
    double s = 1e-7;
    CHECK(cutoff_chi(g, {mg.r1_tilde + g.eps_tilde, 0, 0}, s) == 0.0);
    CHECK(cutoff_chi(g, {0, 0, 0}, s) == 1.0);
    double v = cutoff_chi(g, {g.r1 + g.eps / 4, 0, 0}, s);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(cutoff_chi(g, {0.5 * (mg.r1_tilde + mg.r2_tilde), 0, 2 * g.h(s)}, s) == 1.0);
    CHECK_THROWS_AS(Cutoff(g, 0.0), domain_error);
}

TEST_CASE("flux through the hole")
{
    auto g = k2e1();
    FieldModel fm(g);
    const auto& mg = g.magnet;
    double Phi = g.flux;
    CHECK(fm.flux_line_integral(0, 0) == doctest::Approx(Phi).epsilon(1e-9));
    double spread_lo = INFINITY, spread_hi = -INFINITY;
    for (double th = 0; th < 6.3; th += 0.7) {
        double f = fm.flux_line_integral(mg.r1_tilde / 2, th);
        spread_lo = std::min(spread_lo, f);
        spread_hi = std::max(spread_hi, f);
        CHECK(f == doctest::Approx(Phi).epsilon(1e-9));
    }
    CHECK(spread_hi - spread_lo <= 1e-9 * Phi);
    CHECK(std::abs(fm.flux_line_integral(2 * mg.r2_tilde, 1.0)) <= 1e-9 * Phi);
    CHECK(std::abs(fm.flux_line_integral(mg.r2_tilde, 0.2)) <= 1e-9 * Phi);
}

TEST_CASE("gauge function")
{
    auto g = k2e1();
    FieldModel fm(g);
    double h = g.magnet.h_tilde;
    CHECK(std::abs(fm.lambda_gauge({0, 0, -5 * h})) <= 1e-9);
    CHECK(fm.lambda_gauge({0, 0, 5 * h}) == doctest::Approx(g.flux).epsilon(1e-9));
    Point p{1.2 * g.magnet.r2_tilde, 0.3 * g.magnet.r2_tilde, 0.4 * h};
    CHECK(fm.lambda_gauge(p) == doctest::Approx(fm.path_integral(fm.gauge_path_alt(p))).epsilon(1e-9));
    CHECK_THROWS_AS(fm.lambda_gauge({0.5 * (g.magnet.r1_tilde + g.magnet.r2_tilde), 0, 0}), domain_error);
    CHECK_THROWS_AS(fm.lambda_gauge({2 * g.magnet.r2_tilde, 0, 0}), domain_error);
}

TEST_CASE("field constants for K2")
{
    auto g = k2e1();
    FieldConstants fc(g);
    CHECK(fc.Icap() == doctest::Approx(3.0570e-11).epsilon(1e-4));
    CHECK(fc.Jcap() == doctest::Approx(3.2712e6).epsilon(1e-4));
    CHECK(fc.m_bar(1e-8)[4] == doctest::Approx(6.5424e6).epsilon(1e-4));
    for (double s : {1e-9, 1e-8, 1e-6, 5e-5}) {
        auto m = fc.m_bar(s);
        for (double v : m) {
            CHECK(std::isfinite(v));
            CHECK(v > 0);
        }
        auto c = fc.c_constants(s);
        CHECK(c.pp > 0);
        CHECK(c.ps > 0);
        CHECK(c.sp > 0);
        CHECK(c.ss > 0);
    }
    // delta(sigma) is constant below h~/10, so c_sp sigma is too
    double ref = fc.c_constants(1e-9).sp * 1e-9;
    for (double s : {2e-9, 1e-8, 5e-8, 1e-7})
        CHECK(fc.c_constants(s).sp * s == doctest::Approx(ref).epsilon(1e-14));
    CHECK_THROWS_AS(fc.m_bar(0.0), domain_error);
}

TEST_CASE("R tail")
{
    auto g = k2e1();
    FieldConstants fc(g);
    double s = 1e-7, zeta = 3e-6, Z = 5e-6, S = s * g.mv(), h = g.h(s);
    double n2 = s * s * S * S + zeta * zeta;
    double ref = fc.m_bar(s)[4] / 2 * std::sqrt(n2) / S * std::sqrt(kPi) * std::exp(-(h - Z) * (h - Z) * S * S / (2 * n2));
    CHECK(fc.r_tail(zeta, Z, s).to_f64_clamped() == doctest::Approx(ref).epsilon(1e-12));
    CHECK_THROWS_AS(fc.r_tail(zeta, 0.5 * h, s), domain_error);

    // R(0, z(sigma)) <= 10^{-10^8} on [4.5/mv, sigma0]
    for (int i = 0; i < 200; ++i) {
        double t = i / 199.0;
        double sg = std::exp(std::log(g.sigma_min()) + t * (std::log(g.sigma0) - std::log(g.sigma_min())));
        double zs = z_of_sigma(g, sg);
        CHECK(fc.r_tail(0.0, zs, sg).log10() <= -1e8);
    }
}

TEST_CASE("field certificates on small samples")
{
    for (const Magnet& m : {builtin_magnets().k1, builtin_magnets().k2}) {
        auto g = derive(m, builtin_beams().e1);
        CHECK(check_flux(g).pass());
        CHECK(check_divergence(g, 200, 5).pass());
        CHECK(check_gauge(g, 200, 6).pass());
        auto sup = check_supnorms(g, 20000, 7);
        CHECK(sup.pass());
        CHECK(sup.samples > 0);
    }
    CHECK_THROWS(run_field_check("nope", k2e1()));
}
