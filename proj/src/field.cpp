#include "abcert/field.hpp"
#include "abcert/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace abcert {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double bump(double z)
{
    double t = 1.0 - z * z;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

double bump_d1(double z)
{
    double t = 1.0 - z * z;
    return t > 0.0 ? -2.0 * z / (t * t) * std::exp(-1.0 / t) : 0.0;
}

}  // namespace

double iota()
{
    static const double v = integrate(bump, -1.0, 1.0, 1e-15, 1e-15);
    return v;
}

double n_cap()
{
    double t = 1.5 + std::sqrt(0.75);
    return 2.0 * std::exp(-t) * t * t * std::sqrt(1.0 - 1.0 / t);
}

double psi_smooth(double z) { return bump(z) / iota(); }

double psi_smooth_d1(double z) { return bump_d1(z) / iota(); }

double psi_mass(double lo, double hi)
{
    lo = std::max(lo, -1.0);
    hi = std::min(hi, 1.0);
    if (hi <= lo) return 0.0;
    return integrate(bump, lo, hi, 1e-14, 0.0) / iota();
}

Mollifier::Mollifier(double a, double b, double eps) : a_(a), b_(b), eps_(eps)
{
    if (!(eps > 0.0) || !(eps < 0.5 * (b - a)))
        throw domain_error("mollifier needs 0 < eps < (b - a)/2");
}

std::array<double, 4> Mollifier::knots() const
{
    return {a_ - eps_, a_ + eps_, b_ - eps_, b_ + eps_};
}

double Mollifier::value(double z) const
{
    double hi = (z - a_) / eps_;
    double lo = (z - b_) / eps_;
    if (hi <= -1.0 || lo >= 1.0) return 0.0;
    if (lo <= -1.0 && hi >= 1.0) return 1.0;
    double m = psi_mass(lo, hi);
    return std::clamp(m, 0.0, 1.0);
}

double Mollifier::d1(double z) const
{
    return (psi_smooth((z - a_) / eps_) - psi_smooth((z - b_) / eps_)) / eps_;
}

double Mollifier::d2(double z) const
{
    return (psi_smooth_d1((z - a_) / eps_) - psi_smooth_d1((z - b_) / eps_)) / (eps_ * eps_);
}

namespace {

// integral of Psi(t) = psi_mass(-1, t) over [t0, t1] inside [-1, 1], by parts:
// [t Psi]_{t0}^{t1} - int t psi
double psi_cdf_integral(double t0, double t1)
{
    t0 = std::max(t0, -1.0);
    t1 = std::min(t1, 1.0);
    if (t1 <= t0) return 0.0;
    double moment = integrate([](double t) { return t * bump(t); }, t0, t1, 1e-16, 1e-14) / iota();
    return t1 * psi_mass(-1.0, t1) - t0 * psi_mass(-1.0, t0) - moment;
}

}  // namespace

double Mollifier::integral(double lo, double hi) const
{
    if (hi < lo) return -integral(hi, lo);
    auto k = knots();
    double total = 0.0;
    // rising edge: value = Psi((z - a)/eps); falling edge: value = 1 - Psi((z - b)/eps)
    double r0 = std::max(lo, k[0]), r1 = std::min(hi, k[1]);
    if (r1 > r0) total += eps_ * psi_cdf_integral((r0 - a_) / eps_, (r1 - a_) / eps_);
    double p0 = std::max(lo, k[1]), p1 = std::min(hi, k[2]);
    if (p1 > p0) total += p1 - p0;
    double f0 = std::max(lo, k[2]), f1 = std::min(hi, k[3]);
    if (f1 > f0) total += (f1 - f0) - eps_ * psi_cdf_integral((f0 - b_) / eps_, (f1 - b_) / eps_);
    return total;
}

double psi_plateau(double a, double b, double eps, double z) { return Mollifier(a, b, eps).value(z); }

FieldModel::FieldModel(const DerivedGeometry& g)
    : g_(g),
      radial_(g.magnet.r1_tilde + g.eps_tilde, g.magnet.r2_tilde - g.eps_tilde, g.eps_tilde),
      vertical_(-g.magnet.h_tilde + g.delta_tilde, g.magnet.h_tilde - g.delta_tilde, g.delta_tilde)
{
    auto kr = radial_.knots();
    auto kz = vertical_.knots();
    double cr = radial_.integral(kr[0], kr[3]);
    double cz = vertical_.integral(kz[0], kz[3]);
    C_ = cr * cz;
}

double FieldModel::normalization_lower() const
{
    const auto& m = g_.magnet;
    return 2.0 * (m.h_tilde - 2.0 * g_.delta_tilde) * (m.r2_tilde - m.r1_tilde - 4.0 * g_.eps_tilde);
}

Vec3 FieldModel::b_field(const Point& x) const
{
    double r = std::hypot(x[0], x[1]);
    if (r == 0.0) return {0, 0, 0};
    double f = radial_.value(r);
    if (f == 0.0) return {0, 0, 0};
    double F = g_.flux / C_ * f * vertical_.value(x[2]);
    return {-F * x[1] / r, F * x[0] / r, 0.0};
}

std::array<Vec3, 3> FieldModel::b_jacobian(const Point& x) const
{
    std::array<Vec3, 3> J{};
    double r = std::hypot(x[0], x[1]);
    if (r == 0.0) return J;
    double K = g_.flux / C_;
    double fr = radial_.value(r), fz = vertical_.value(x[2]);
    double F = K * fr * fz;
    double Fr = K * radial_.d1(r) * fz;
    double Fz = K * fr * vertical_.d1(x[2]);
    double q = (Fr - F / r) / (r * r);
    double X = x[0], Y = x[1];
    J[0] = {-X * Y * q, -F / r - Y * Y * q, -Fz * Y / r};
    J[1] = {F / r + X * X * q, X * Y * q, Fz * X / r};
    J[2] = {0, 0, 0};
    return J;
}

double FieldModel::radial_tail(double r) const
{
    auto k = radial_.knots();
    if (r >= k[3]) return 0.0;
    double eps = radial_.eps();
    double total = 0.0;
    // rising edge [k0, k1]; a full edge integrates to eps by the symmetry of the bump
    if (r <= k[0]) total += eps;
    else if (r < k[1]) total += radial_.integral(r, k[1]);
    // plateau
    double p0 = std::max(r, k[1]);
    if (p0 < k[2]) total += k[2] - p0;
    // falling edge [k2, k3]
    if (r <= k[2]) total += eps;
    else total += radial_.integral(r, k[3]);
    return total;
}

double FieldModel::a3(double r, double x3) const
{
    double fz = vertical_.value(x3);
    if (fz == 0.0) return 0.0;
    return g_.flux / C_ * fz * radial_tail(r);
}

Vec3 FieldModel::a_potential(const Point& x) const
{
    return {0.0, 0.0, a3(std::hypot(x[0], x[1]), x[2])};
}

Vec3 FieldModel::a3_gradient(const Point& x) const
{
    double r = std::hypot(x[0], x[1]);
    double K = g_.flux / C_;
    double fz = vertical_.value(x[2]);
    double dr = r > 0.0 ? -K * fz * radial_.value(r) / r : 0.0;
    return {dr * x[0], dr * x[1], K * vertical_.d1(x[2]) * radial_tail(r)};
}

double FieldModel::path_integral(const std::vector<Segment>& path) const
{
    double total = 0.0;
    for (const auto& s : path) {
        Vec3 t{s.to[0] - s.from[0], s.to[1] - s.from[1], s.to[2] - s.from[2]};
        if (t[2] == 0.0) continue;  // A is vertical
        if (t[0] == 0.0 && t[1] == 0.0) {
            // A3 factorizes into a radial and a vertical profile
            double r = std::hypot(s.from[0], s.from[1]);
            double tail = radial_tail(r);
            if (tail != 0.0) total += g_.flux / C_ * tail * vertical_.integral(s.from[2], s.to[2]);
        } else {
            auto f = [&](double u) {
                Point p{s.from[0] + u * t[0], s.from[1] + u * t[1], s.from[2] + u * t[2]};
                return a3(std::hypot(p[0], p[1]), p[2]) * t[2];
            };
            total += integrate(f, 0.0, 1.0, 1e-16, 1e-13);
        }
    }
    return total;
}

double FieldModel::flux_line_integral(double r, double theta) const
{
    double H = 2.0 * g_.magnet.h_tilde;
    double x = r * std::cos(theta), y = r * std::sin(theta);
    return path_integral({{{x, y, -H}, {x, y, H}}});
}

bool FieldModel::in_magnet(const Point& x) const
{
    double r = std::hypot(x[0], x[1]);
    const auto& m = g_.magnet;
    return r >= m.r1_tilde && r <= m.r2_tilde && std::abs(x[2]) <= m.h_tilde;
}

bool FieldModel::on_cut(const Point& x) const
{
    return x[2] == 0.0 && std::hypot(x[0], x[1]) > g_.magnet.r2_tilde;
}

std::vector<FieldModel::Segment> FieldModel::gauge_path(const Point& x) const
{
    if (in_magnet(x)) throw domain_error("lambda_gauge: point lies inside the magnet");
    if (on_cut(x)) throw domain_error("lambda_gauge: point lies on the cut surface");
    double ht = g_.magnet.h_tilde;
    Point x0{0, 0, -10.0 * ht};
    if (x[2] < 0.0) {
        Point p{x[0], x[1], x0[2]};
        return {{x0, p}, {p, x}};
    }
    double H = std::max(x[2], 2.0 * ht);
    Point up{0, 0, H}, over{x[0], x[1], H};
    return {{x0, up}, {up, over}, {over, x}};
}

std::vector<FieldModel::Segment> FieldModel::gauge_path_alt(const Point& x) const
{
    if (in_magnet(x)) throw domain_error("lambda_gauge: point lies inside the magnet");
    if (on_cut(x)) throw domain_error("lambda_gauge: point lies on the cut surface");
    double ht = g_.magnet.h_tilde;
    double r = std::hypot(x[0], x[1]);
    Point x0{0, 0, -10.0 * ht};
    if (r < g_.magnet.r1_tilde) {
        if (x[2] >= 0.0) {
            Point p{x[0], x[1], x0[2]};
            return {{x0, p}, {p, x}};
        }
        double H = 3.0 * ht;
        Point up{0, 0, H}, over{x[0], x[1], H};
        return {{x0, up}, {up, over}, {over, x}};
    }
    // Cartesian legs at a different height than the primary path
    double H = x[2] < 0.0 ? -20.0 * ht : std::max(x[2], 3.0 * ht) + 2.0 * ht;
    Point a{0, 0, H}, b{x[0], 0, H}, c{x[0], x[1], H};
    return {{x0, a}, {a, b}, {b, c}, {c, x}};
}

double FieldModel::lambda_gauge(const Point& x) const { return path_integral(gauge_path(x)); }

SupNormBounds FieldModel::sup_bounds() const
{
    const auto& m = g_.magnet;
    double P = kPi / ((m.h_tilde - 2.0 * g_.delta_tilde) * (m.r2_tilde - m.r1_tilde - 4.0 * g_.eps_tilde));
    double io = iota();
    double tr = 1.0 / (io * kE * g_.eps_tilde) + 1.0 / m.r1_tilde;
    SupNormBounds s;
    s.B = P;
    s.dB_transverse = P * tr;
    s.dB_vertical = P / (io * kE * g_.delta_tilde);
    s.eta = 2.0 * m.h_tilde * P;
    s.p_eta = 2.0 * m.h_tilde * P * tr;
    s.A = P * (m.r2_tilde - m.r1_tilde);
    s.dA_transverse = P;
    s.dA_vertical = P / (io * kE * g_.delta_tilde) * (m.r2_tilde - m.r1_tilde);
    return s;
}

Cutoff::Cutoff(const DerivedGeometry& g, double sigma)
    : g_(&g),
      delta_(g.delta(sigma)),
      h_(g.magnet.h_tilde + delta_),
      radial_(g.r1 + g.eps / 2, g.r2 - g.eps / 2, g.eps / 2),
      vertical_(-h_ + delta_ / 2, h_ - delta_ / 2, delta_ / 2)
{
    if (!(sigma > 0.0)) throw domain_error("cutoff: sigma must be positive");
}

double Cutoff::value(const Point& x) const
{
    double f = radial_.value(std::hypot(x[0], x[1]));
    if (f == 0.0) return 1.0;
    return 1.0 - f * vertical_.value(x[2]);
}

CutoffDerivs Cutoff::derivs(const Point& x) const
{
    double r = std::hypot(x[0], x[1]);
    double f = radial_.value(r), f1 = radial_.d1(r), f2 = radial_.d2(r);
    double g = vertical_.value(x[2]), g1 = vertical_.d1(x[2]), g2 = vertical_.d2(x[2]);
    CutoffDerivs d;
    d.value = 1.0 - f * g;
    double cx = r > 0.0 ? x[0] / r : 0.0, cy = r > 0.0 ? x[1] / r : 0.0;
    d.grad = {-f1 * g * cx, -f1 * g * cy, -f * g1};
    double radial_lap = f2 + (r > 0.0 ? f1 / r : 0.0);
    d.laplacian = -(radial_lap * g + f * g2);
    return d;
}

CutoffBounds Cutoff::bounds() const
{
    double io = iota(), N = n_cap();
    double eps = g_->eps, r1 = g_->r1, dl = delta_;
    return {1.0, 2.0 / (io * kE * eps), 2.0 / (io * kE * dl),
            8.0 * N / (io * eps * eps) + 2.0 / (kE * r1 * io * eps) + 8.0 * N / (io * dl * dl)};
}

double cutoff_chi(const DerivedGeometry& g, const Point& x, double sigma)
{
    return Cutoff(g, sigma).value(x);
}

FieldConstants::FieldConstants(const DerivedGeometry& g) : g_(g)
{
    const auto& m = g.magnet;
    I_ = (m.h_tilde - 2.0 * g.delta_tilde) * (m.r2_tilde - m.r1_tilde - 4.0 * g.eps_tilde) / kPi;
    J_ = (m.r2_tilde - m.r1_tilde) / I_;
}

std::array<double, 5> FieldConstants::m_bar_at_delta(double delta) const
{
    const auto& m = g_.magnet;
    double io = iota(), N = n_cap();
    double eps = g_.eps, r1 = g_.r1;
    double tail = (2.0 + (m.r2_tilde - m.r1_tilde) / (io * g_.delta_tilde * kE)) / I_;
    double dJ = 4.0 / (io * delta * kE) * J_;
    double m1 = 8.0 * N / (io * eps * eps) + 2.0 / (io * eps * r1 * kE) +
                8.0 * N / (io * delta * delta) + tail + dJ + J_ * J_;
    double m2 = 2.0 * (4.0 / (io * eps * kE) + 2.0 / (io * delta * kE)) + 2.0 * J_;
    double m3 = 2.0 / (io * delta * kE) + J_;
    double m4 = tail + J_ * J_ + dJ;
    double m5 = 2.0 * J_;
    return {m1, m2, m3, m4, m5};
}

std::array<double, 5> FieldConstants::m_bar(double sigma) const
{
    if (!(sigma > 0.0)) throw domain_error("m_bar: sigma must be positive");
    return m_bar_at_delta(g_.delta(sigma));
}

CConstants FieldConstants::c_constants(double sigma) const
{
    if (!(sigma > 0.0)) throw domain_error("c_constants: sigma must be positive");
    const auto& m = g_.magnet;
    double io = iota(), N = n_cap();
    double eps = g_.eps, r1 = g_.r1, dl = g_.delta(sigma), mv = g_.mv();
    double q = std::pow(kPi, 0.25);
    double hI = m.h_tilde / I_;
    CConstants c;
    c.pp = (8.0 * N / (io * eps * eps) + 2.0 / (io * eps * r1 * kE) + 8.0 * N / (io * dl * dl) +
            4.0 * hI * 4.0 / (io * eps * kE)) /
               (q * mv) +
           4.0 / (q * io * dl * kE);
    c.ps = (2.0 * hI * (1.0 / (io * g_.eps_tilde * kE) + 1.0 / m.r1_tilde) + 4.0 * hI * hI) / (q * mv);
    c.sp = (8.0 / (io * eps * kE) + 4.0 / (io * dl * kE)) / (q * sigma * mv);
    c.ss = 4.0 * hI / (q * sigma * mv);
    return c;
}

XReal FieldConstants::r_tail(double zeta, double Z, double sigma) const
{
    double S = sigma * g_.mv();
    double h = g_.h(sigma);
    if (!(Z >= h)) throw domain_error("r_tail: need Z >= h(sigma)");
    double n2 = sigma * sigma * S * S + zeta * zeta;
    double m5 = 2.0 * J_;
    double pre = 0.5 * m5 * std::sqrt(n2) / S * std::sqrt(kPi);
    double ex = 0.5 * (h - Z) * (h - Z) * S * S / n2;
    return XReal::from_f64(pre) * XReal::exp_neg(ex);
}

}  // namespace abcert
