#include "abcert/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abcert {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kQuartPi = std::pow(std::numbers::pi, 0.25);

XReal lift(double v, bool& clamped)
{
    if (v < 0.0) {
        clamped = true;
        return XReal();
    }
    return XReal::from_f64(v);
}

XReal X(double v) { return XReal::from_f64(v); }

}  // namespace

const AdditiveConstants& additive_constants()
{
    static const AdditiveConstants c;
    return c;
}

Vec5 amap(const Vec5& w, double mv)
{
    double c = (1.0 / kSqrt2 + std::sqrt(3.0) * kQuartPi / 2.0) / (std::sqrt(mv) * kQuartPi);
    return {w[0] / (kSqrt2 * mv) + kSqrt2 * w[2],
            4.0 / kQuartPi * (kSqrt2 / (2.0 * mv) * w[0] + (2.0 + kSqrt2) / 2.0 * w[1] + kSqrt2 * w[2]),
            c * w[1], w[3] / (kSqrt2 * mv), c * w[4]};
}

double g_funcs(GIndex j, const Vec5& w, double z, double sigma, double S1, double mv, double h,
               double r2)
{
    if (!(z > 0.0) || !(sigma > 0.0)) throw domain_error("g_funcs: need z > 0 and sigma > 0");
    Vec5 A = amap(w, mv);
    double M = std::max(z, S1);
    double rs = std::sqrt(sigma);
    double sm = sigma * mv;
    double gm = M * A[0] / 2.0 + std::sqrt(h * r2 * r2 * sm * sm * sm / M) * A[1] / 2.0 +
                M / rs * A[2] / 2.0 - z * A[0] / 2.0 - z / rs * A[2] / 2.0;
    double tail = z * A[3] + z / rs * A[4];
    switch (j) {
    case GIndex::MinusInf: return gm;
    case GIndex::Zero: return gm + tail;
    case GIndex::Inf: return 3.0 * gm + tail;
    }
    return gm;
}

const Vec5& CalibratedVectors::operator[](GIndex j) const
{
    switch (j) {
    case GIndex::MinusInf: return a_minus_inf;
    case GIndex::Zero: return a_zero;
    default: return a_inf;
    }
}

CalibratedVectors calibrated_vectors_at(const DerivedGeometry& g, const Vec5& m)
{
    double mv = g.mv(), r1 = g.r1, r2 = g.r2, ht = g.magnet.h_tilde;
    Vec5 A = amap(m, mv);
    CalibratedVectors cv;
    double a1 = mv * r1 * A[0] / 2.0 +
                mv * r2 * std::sqrt(2.0 * ht / r1) / std::sqrt(1.0 - 5e-10) * A[1] / 2.0;
    double ah = mv * r1 * A[2] / 2.0;
    double a0 = -134.99 * ht * A[0] / 2.0;
    double amh = -134.99 * ht * A[2] / 2.0;
    cv.a_minus_inf = {a1, ah, a0, amh, 0.0};
    cv.a_zero = {a1, ah, a0 + 135.91 * ht * A[3], amh + 135.91 * ht * A[4],
                 std::sqrt(std::numbers::pi) / 2.0 * m[4] / 2.0 * std::sqrt(1.0 + 1.11e-6) * 136.82 /
                     mv * ht};
    cv.a_inf = {3.0 * a1, 3.0 * ah, 3.0 * a0 + 138.0 * ht * A[3], 3.0 * amh + 138.0 * ht * A[4], 0.0};
    return cv;
}

CalibratedVectors calibrated_vectors(const DerivedGeometry& g)
{
    FieldConstants fc(g);
    return calibrated_vectors_at(g, fc.m_bar_at_delta(g.scales.delta * g.magnet.h_tilde));
}

double p_poly(const CalibratedVectors& cv, GIndex j, double sigma)
{
    const Vec5& a = cv[j];
    double rs = std::sqrt(sigma);
    return a[0] * sigma + a[1] * rs + a[2] + a[3] / rs + a[4] / sigma;
}

XReal angle_factor(double sigma, double mv)
{
    double s = sigma * mv;
    return XReal::exp_neg(33.0 / 34.0 * s * s / 2.0);
}

XReal size_factor(double sigma, double r1) { return XReal::exp_neg(r1 * r1 / (2.0 * sigma * sigma)); }

Regime parse_regime(const std::string& s)
{
    if (s == "incoming") return Regime::Incoming;
    if (s == "interacting") return Regime::Interacting;
    if (s == "outgoing") return Regime::Outgoing;
    if (s == "scattering") return Regime::Scattering;
    if (s == "uniform" || s == "final") return Regime::Uniform;
    if (s == "detailed") return Regime::Detailed;
    throw std::invalid_argument("unknown regime '" + s + "'");
}

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::Incoming: return "incoming";
    case Regime::Interacting: return "interacting";
    case Regime::Outgoing: return "outgoing";
    case Regime::Scattering: return "scattering";
    case Regime::Uniform: return "uniform";
    case Regime::Detailed: return "detailed";
    }
    return "?";
}

void check_validity(double sigma, const DerivedGeometry& g)
{
    double lo = g.sigma_min(), hi = g.sigma_max();
    if (!(sigma >= lo * (1 - 1e-12) && sigma <= hi * (1 + 1e-12)))
        throw domain_error("sigma outside the validity domain [4.5/mv, r1_tilde/2]");
}

IntegralTerms blanket_integral_terms(double sigma, const DerivedGeometry& g,
                                     const CalibratedVectors& cv)
{
    const auto& k = additive_constants();
    XReal size = size_factor(sigma, g.r1);
    XReal ang = angle_factor(sigma, g.mv());
    bool c = false;
    IntegralTerms t;
    t.interacting = X(4.0) * size + X(1e-3) * ang * lift(p_poly(cv, GIndex::Zero, sigma), c) + k.e101;
    t.outgoing = X(4.0) * size + X(1e-7) * ang * lift(p_poly(cv, GIndex::Inf, sigma), c) + k.e101;
    return t;
}

namespace {

BoundReport make(Regime r, double sigma, const DerivedGeometry& g)
{
    BoundReport b;
    b.regime = r;
    b.sigma = sigma;
    b.magnet = g.magnet.id;
    b.energy = g.beam.id;
    return b;
}

void finish(BoundReport& b) { b.total = b.size_term + b.angle_term + b.additive_term; }

}  // namespace

BoundReport regime_bound(Regime regime, double sigma, const DerivedGeometry& g,
                         std::optional<IntegralTerms> terms)
{
    if (regime == Regime::Uniform) return final_bound(sigma, g);
    if (regime == Regime::Detailed) return detailed_bound(sigma, g);
    check_validity(sigma, g);
    const auto& k = additive_constants();
    CalibratedVectors cv = calibrated_vectors(g);
    XReal size = size_factor(sigma, g.r1);
    XReal ang = angle_factor(sigma, g.mv());
    BoundReport b = make(regime, sigma, g);
    bool& c = b.clamped;
    switch (regime) {
    case Regime::Incoming:
        b.angle_term = ang * lift(p_poly(cv, GIndex::MinusInf, sigma) + kSqrt2, c);
        b.additive_term = k.e419;
        break;
    case Regime::Interacting: {
        double p0 = p_poly(cv, GIndex::Zero, sigma);
        if (!terms) {
            b.size_term = X(6.0031) * size;
            b.angle_term = ang * lift((1.0 + 1e-3) * p0 + 2.0, c);
            b.additive_term = k.e101 + k.e420 + k.e456;
        } else {
            b.size_term = X(2.0031) * size;
            b.angle_term = ang * lift(p0 + 2.0, c);
            b.additive_term = k.e420 + k.e456 + terms->interacting;
        }
        break;
    }
    case Regime::Outgoing:
    case Regime::Scattering: {
        double pi = p_poly(cv, GIndex::Inf, sigma);
        if (!terms) {
            b.size_term = X(7.0) * size;
            b.angle_term = ang * lift((1.0 + 1e-7) * pi + kSqrt2, c);
            b.additive_term = k.e101 + k.e420 + k.e420;
        } else {
            b.size_term = X(3.0) * size;
            b.angle_term = ang * lift(pi + kSqrt2, c);
            b.additive_term = k.e420 + k.e420 + terms->outgoing;
        }
        break;
    }
    default: break;
    }
    finish(b);
    return b;
}

BoundReport final_bound(double sigma, const DerivedGeometry& g)
{
    check_validity(sigma, g);
    BoundReport b = make(Regime::Uniform, sigma, g);
    b.size_term = X(7.0) * size_factor(sigma, g.r1);
    b.angle_term = X(1.77e5) * angle_factor(sigma, g.mv());
    b.additive_term = additive_constants().e100;
    finish(b);
    return b;
}

BoundReport detailed_bound(double sigma, const DerivedGeometry& g)
{
    check_validity(sigma, g);
    const auto& k = additive_constants();
    BoundReport b = make(Regime::Detailed, sigma, g);
    double rs = std::sqrt(sigma);
    double poly = 1.04e14 * sigma + 3.91e8 * rs - 1.41e3 - 1.14e-2 / rs;
    b.size_term = X(7.0) * size_factor(sigma, g.r1);
    b.angle_term = angle_factor(sigma, g.mv()) * lift(poly, b.clamped);
    b.additive_term = k.e101 + k.e420 + k.e420;
    finish(b);
    return b;
}

XReal interaction_probability(double sigma, const DerivedGeometry& g)
{
    check_validity(sigma, g);
    XReal s = X(7.0) * size_factor(sigma, g.r1) + X(177001.0) * angle_factor(sigma, g.mv()) +
              additive_constants().e100;
    return s * s;
}

}  // namespace abcert
