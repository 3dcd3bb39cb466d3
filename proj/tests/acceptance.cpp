// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned here.

#include "abcert/bounds.hpp"
#include "abcert/certify.hpp"
#include "abcert/field_checks.hpp"
#include "abcert/kinematics.hpp"
#include "abcert/report.hpp"

#include "grid_cases.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace abcert;

namespace {

constexpr double kTableTol = 5e-3;
constexpr double kMassTol = 1e-3;
constexpr double kFactorTol = 1e-4;
constexpr double kFastSeconds = 1.0;
constexpr double kSweepSeconds = 600.0;
constexpr double kResidualTol = 1e-10;
constexpr double kClosedFormTol = 1e-12;
constexpr double kOracleSlack = 1e-12;

int failures = 0;

void report(int n, bool pass, const std::string& detail)
{
    std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

void info(const std::string& detail)
{
    std::printf("  info: %s\n", detail.c_str());
    std::fflush(stdout);
}

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

DerivedGeometry k2e1() { return derive(builtin_magnets().k2, builtin_beams().e1); }

std::vector<DerivedGeometry> all_configs()
{
    std::vector<DerivedGeometry> v;
    for (const Magnet& m : {builtin_magnets().k1, builtin_magnets().k2})
        for (const Beam& b : {builtin_beams().e1, builtin_beams().e2, builtin_beams().e3}) v.push_back(derive(m, b));
    return v;
}

std::vector<double> log_grid(double a, double b, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(std::exp(std::log(a) + i * (std::log(b) - std::log(a)) / (n - 1)));
    v.back() = b;
    return v;
}

double rel(double x, double ref) { return std::abs(x / ref - 1); }

// reference rows, targets 10^-1 ... 10^-10
const double kBig[] = {.34305, .27626, .23764, .21170, .19274, .17811, .16637, .15668, .14851, .14150};
const double kSmall[] = {1.6001e-6, 1.7234e-6, 1.8384e-6, 1.9467e-6, 2.0492e-6,
                         2.1469e-6, 2.2403e-6, 2.3299e-6, 2.4162e-6, 2.4996e-6};
const double kRadius[] = {.81716, .65806, .56606, .50427, .45911, .42425, .39629, .37322, .35376, .33703};
const double kAngle[] = {51.8407, 47.8885, 44.7231, 42.1135, 39.9137,
                         38.0265, 36.3842, 34.9380, 33.6517, 32.4979};

void table_criterion(int n, TableKind kind, const double* ref, const std::string& extra_name, bool extra_ok,
                     const std::string& extra_detail)
{
    Clock c;
    auto rows = emit_table(kind, k2e1());
    double secs = c.seconds();
    double worst = 0;
    bool ok = rows.size() == 10;
    for (size_t i = 0; ok && i < 10; ++i) {
        ok = ok && rows[i].defined;
        worst = std::max(worst, rel(rows[i].value, ref[i]));
    }
    ok = ok && worst <= kTableTol;
    bool timed = n <= 2;
    std::ostringstream os;
    os.precision(3);
    os << table_kind_name(kind) << " table: worst relative deviation " << worst << " (tol " << kTableTol << ")";
    if (timed) os << ", " << secs << " s (limit " << kFastSeconds << " s)";
    if (!extra_name.empty()) os << "; " << extra_name << " " << extra_detail;
    report(n, ok && (!timed || secs < kFastSeconds) && extra_ok, os.str());
}

void criterion3()
{
    auto g = k2e1();
    double s = 2e-9;
    GaussianState st{s, g.mv()};
    double R = packet_radius(s);
    double mass = oracle::gauss(
        [&](double d) { return 4 * std::numbers::pi * d * d * evolved_density_radial(st, 0.0, d); }, 0, R);
    std::ostringstream os;
    os.precision(6);
    os << "= " << mass << " (0.990 +/- " << kMassTol << ")";
    table_criterion(3, TableKind::Radius, kRadius, "radius mass", std::abs(mass - 0.990) <= kMassTol, os.str());
}

void criterion4()
{
    auto g = k2e1();
    auto rows = emit_table(TableKind::Angle, g);
    double worst = 0;
    for (const auto& r : rows) {
        double sm = r.sigma * g.mv();
        double om = r.value * std::numbers::pi / 180;
        double lhs = (33.0 / 34.0) * sm * sm / 2;
        double rhs = 2.7535 / std::pow(std::sin(om / 2), 2);
        worst = std::max(worst, rel(lhs, rhs));
    }
    std::ostringstream os;
    os.precision(3);
    os << "worst " << worst << " (tol " << kFactorTol << ")";
    table_criterion(4, TableKind::Angle, kAngle, "factor identity", worst <= kFactorTol, os.str());
}

void criterion5()
{
    auto g = k2e1();
    Clock c;
    XReal worst_b = XReal::zero(), worst_p = XReal::zero();
    for (double s : log_grid(1.1592e-9, 7.7955e-6, 1000)) {
        worst_b = std::max(worst_b, final_bound(s, g).total);
        worst_p = std::max(worst_p, interaction_probability(s, g));
    }
    double secs = c.seconds();
    bool ok = worst_b <= XReal::pow10(-99) && worst_p <= XReal::pow10(-199) && secs < kFastSeconds;
    std::ostringstream os;
    os.precision(3);
    os << "intermediate regime: max bound " << to_sci_string(worst_b) << " (<= 1e-99), max interaction "
       << to_sci_string(worst_p) << " (<= 1e-199), " << secs << " s";
    report(5, ok, os.str());
}

void criterion6()
{
    size_t viol = 0;
    double zmin = INFINITY, zmax = 0, smin = INFINITY, smax = 0, q3 = 0, q4 = 0, r5lo = INFINITY, r5hi = 0;
    for (const auto& g : all_configs()) {
        double mv = g.mv();
        for (double s : log_grid(g.sigma0, g.sigma_max(), 10000)) {
            double z = z_of_sigma(g, s), S1 = g.S1(s), h = g.h(s);
            double a = std::sqrt(h * g.r2 * g.r2 * std::pow(s * mv, 3)) / std::sqrt(std::max(z, S1));
            double b = std::sqrt(s * s + 33 * z * z / (34 * 2000.0));
            viol += !(z >= 2.1023e-6 && z <= .0673) + !(S1 >= .0042 && S1 <= 303.8306) + !(a <= 2.9127e5) +
                    !(b <= 0.0015);
            zmin = std::min(zmin, z);
            zmax = std::max(zmax, z);
            smin = std::min(smin, S1);
            smax = std::max(smax, S1);
            q3 = std::max(q3, a);
            q4 = std::max(q4, b);
        }
        double ht = g.magnet.h_tilde;
        for (double s : log_grid(g.sigma_min(), g.sigma0, 10000)) {
            double r = z_of_sigma(g, s) / ht;
            viol += !(r >= 134.99 && r <= 136.82);
            r5lo = std::min(r5lo, r);
            r5hi = std::max(r5hi, r);
        }
    }
    std::ostringstream os;
    os.precision(5);
    os << "interval certificates, 6 configurations x 10^4 points: " << viol << " violations; z in [" << zmin
       << ", " << zmax << "], S1 in [" << smin << ", " << smax << "], q3 max " << q3 << ", q4 max " << q4
       << ", z/h~ in [" << r5lo << ", " << r5hi << "]";
    report(6, viol == 0, os.str());
}

void criterion7()
{
    auto g = k2e1();
    Clock c;
    SweepOptions opt;
    auto rep = lemma64_sweep(g, opt);
    double secs = c.seconds();
    size_t hyp = 0;
    for (const auto& r : rep.rows) hyp += !r.hyp.all();
    std::ostringstream os;
    os.precision(3);
    os << "(K2,E1) pair sweep: " << rep.rows.size() << " pairs, " << rep.failures() << " failures, " << hyp
       << " hypothesis failures, " << secs << " s (limit " << kSweepSeconds << " s)";
    report(7, rep.failures() == 0 && hyp == 0 && secs < kSweepSeconds, os.str());

    // the other configurations, with failed pairs re-checked on finer grids
    for (const auto& gc : all_configs()) {
        if (gc.magnet.id == g.magnet.id && gc.beam.id == g.beam.id) continue;
        std::ostringstream is;
        is << "(" << gc.magnet.id << "," << gc.beam.id << ")";
        for (double f : {10.0, 100.0}) {
            SweepOptions o;
            o.refine_factor = f;
            auto r = lemma64_sweep(gc, o);
            if (f == 10.0) is << " " << r.failures() << " failures at the default pitch";
            is << ", " << r.residual_failures() << " after " << f << "x refinement";
            if (r.residual_failures() == 0) break;
        }
        info(is.str());
    }
}

void criterion8()
{
    std::mt19937_64 rng(8);
    size_t viol = 0, n = 0;
    double tight = INFINITY;
    for (GridKind k : {GridKind::B3, GridKind::B4, GridKind::B5, GridKind::B6}) {
        for (int i = 0; i < 1000; ++i, ++n) {
            auto c = gridcase::draw(k, rng);
            XReal b = grid_upper_bound(k, c.sigma, c.mv, c.zeta, c.s, c.Z, c.delta0, c.r1);
            double t = gridcase::truth(c);
            if (!(b >= XReal::from_f64(t * (1 - kOracleSlack)))) ++viol;
            if (t > 0) tight = std::min(tight, b.to_f64_clamped() / t);
        }
    }
    std::ostringstream os;
    os.precision(4);
    os << "grid majorants vs quadrature: " << n << " tuples, " << viol << " violations, smallest ratio " << tight;
    report(8, viol == 0, os.str());
}

void criterion9()
{
    bool ok = true;
    std::ostringstream os;
    os.precision(3);
    os << "field certificates:";
    for (const Magnet& m : {builtin_magnets().k2, builtin_magnets().k1}) {
        auto g = derive(m, builtin_beams().e1);
        for (const auto& rep : {check_flux(g), check_divergence(g), check_gauge(g), check_supnorms(g)}) {
            ok = ok && rep.pass();
            os << " " << m.id << "/" << rep.name << " " << (rep.pass() ? "ok" : "VIOLATED") << " (" << rep.samples
               << " samples, worst " << rep.worst_ratio << ")";
        }
    }
    report(9, ok, os.str());
}

struct Signed {
    int sign;
    double log_abs;
};

Signed angle_times(double p, double sigma, double mv)
{
    double a = 33.0 / 34.0 * (sigma * mv) * (sigma * mv) / 2;
    if (p == 0) return {0, -INFINITY};
    return {p > 0 ? 1 : -1, std::log(std::abs(p)) - a};
}

bool le(Signed x, Signed y)
{
    if (x.sign != y.sign) return x.sign < y.sign;
    if (x.sign == 0) return true;
    return x.sign > 0 ? x.log_abs <= y.log_abs + 1e-12 : x.log_abs >= y.log_abs - 1e-12;
}

void criterion10()
{
    size_t mono = 0, order = 0, env = 0, resid = 0, closed = 0;
    const double mv1 = 1.9842e10;

    for (const auto& g : all_configs()) {
        auto cv = calibrated_vectors(g);
        auto grid = log_grid(g.sigma_min(), g.sigma_max(), 10000);
        for (GIndex j : {GIndex::MinusInf, GIndex::Zero, GIndex::Inf}) {
            Signed prev = angle_times(p_poly(cv, j, grid[0]), grid[0], g.mv());
            for (size_t i = 1; i < grid.size(); ++i) {
                Signed cur = angle_times(p_poly(cv, j, grid[i]), grid[i], g.mv());
                mono += !le(cur, prev);
                prev = cur;
            }
        }
        for (double s : log_grid(g.sigma_min(), g.sigma_max(), 1000)) {
            auto a = regime_bound(Regime::Incoming, s, g).total;
            auto b = regime_bound(Regime::Interacting, s, g).total;
            auto c = regime_bound(Regime::Outgoing, s, g).total;
            order += !(a <= b && b <= c);
        }
    }

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1), ls(std::log(2.3e-10), std::log(8e-5)),
        lz(std::log(1e-8), std::log(1e-3));
    for (int i = 0; i < 1000; ++i) {
        double a = std::exp(ls(rng)), b = std::exp(ls(rng)), c = std::exp(ls(rng));
        double lo = std::min({a, b, c}), hi = std::max({a, b, c}), mid = a + b + c - lo - hi;
        double w = u(rng) * 0.999 * std::min(lo * mv1, 50.0);
        double zeta = std::exp(lz(rng));
        double zm = z_crossing(w, mid, mv1, zeta);
        env += !(zm <= std::max(z_crossing(w, hi, mv1, zeta), z_crossing(w, lo, mv1, zeta)) * (1 + 1e-13));
    }

    for (int i = 0; i < 10000; ++i) {
        double s = std::exp(ls(rng)), zeta = std::exp(lz(rng));
        double w = u(rng) * 0.999 * std::min(s * mv1, 100.0);
        if (w == 0) continue;
        double z = z_crossing(w, s, mv1, zeta);
        resid += !(std::abs((z - zeta) * oracle::rho(s, mv1, z) - w) <= kResidualTol * w);
    }

    std::uniform_real_distribution<double> lm(std::log(1e-9), std::log(1e-2)), sg(-1, 1);
    auto sgn = [&] { return sg(rng) < 0 ? -1.0 : 1.0; };
    for (int i = 0; i < 10000; ++i) {
        double s = std::exp(ls(rng));
        double z = sgn() * std::exp(lm(rng)), sv = sgn() * std::exp(lm(rng)), zeta = sgn() * std::exp(lm(rng));
        double r = oracle::rho(s, mv1, z);
        double l = std::clamp((-zeta - sv) * r, -40.0, 40.0), h = std::clamp((zeta - z) * r, -40.0, 40.0);
        double ups = oracle::gauss([](double t) { return std::exp(-t * t); }, l, h);
        double th = oracle::gauss([](double t) { return t * t * std::exp(-t * t); }, l, h);
        closed += !(std::abs(upsilon(s, mv1, z, sv, zeta) - ups) <= kClosedFormTol &&
                    std::abs(theta_big(s, mv1, z, sv, zeta) - th) <= kClosedFormTol);
    }

    std::ostringstream os;
    os << "property suites, violations: angle-weighted monotonicity (6x3x10^4) " << mono
       << ", regime ordering (6x10^3) " << order << ", crossing envelope (10^3) " << env
       << ", crossing residual (10^4) " << resid << ", closed forms vs quadrature (10^4) " << closed;
    report(10, mono + order + env + resid + closed == 0, os.str());
}

}  // namespace

int main()
{
    auto run = [](auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            std::printf("  error: %s\n", e.what());
            ++failures;
        }
    };
    run([] { table_criterion(1, TableKind::BigSigma, kBig, "", true, ""); });
    run([] { table_criterion(2, TableKind::SmallSigma, kSmall, "", true, ""); });
    run(criterion3);
    run(criterion4);
    run(criterion5);
    run(criterion6);
    run(criterion7);
    run(criterion8);
    run(criterion9);
    run(criterion10);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
