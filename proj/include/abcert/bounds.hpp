#pragma once

#include "abcert/config.hpp"
#include "abcert/field.hpp"
#include "abcert/xreal.hpp"

#include <array>
#include <optional>
#include <string>

namespace abcert {

using Vec5 = std::array<double, 5>;

// Named additive constants, kept swappable.
struct AdditiveConstants {
    XReal e100 = XReal::pow10(-100);
    XReal e101 = XReal::pow10(-101);
    XReal e419 = XReal::pow10(-419);
    XReal e420 = XReal::pow10(-420);
    XReal e456 = XReal::pow10(-456);
};
const AdditiveConstants& additive_constants();

Vec5 amap(const Vec5& w, double mv);

enum class GIndex { MinusInf, Zero, Inf };
double g_funcs(GIndex j, const Vec5& w, double z, double sigma, double S1, double mv, double h,
               double r2);

// coefficients at powers {1, 1/2, 0, -1/2, -1}
struct CalibratedVectors {
    Vec5 a_minus_inf, a_zero, a_inf;
    const Vec5& operator[](GIndex j) const;
};

// m_bar is evaluated at delta = h_tilde, its largest value over sigma > 0,
// so the coefficients are sigma independent
CalibratedVectors calibrated_vectors(const DerivedGeometry& g);
CalibratedVectors calibrated_vectors_at(const DerivedGeometry& g, const Vec5& m_bar);
double p_poly(const CalibratedVectors& cv, GIndex j, double sigma);

// e^{-(33/34)(sigma mv)^2/2}
XReal angle_factor(double sigma, double mv);
// e^{-r1^2/(2 sigma^2)}
XReal size_factor(double sigma, double r1);

enum class Regime { Incoming, Interacting, Outgoing, Scattering, Uniform, Detailed };
Regime parse_regime(const std::string& s);
std::string regime_name(Regime r);

struct BoundReport {
    Regime regime;
    double sigma;
    std::string magnet, energy;
    XReal size_term, angle_term, additive_term, total;
    bool clamped = false;  // signed polynomial was negative and clamped at zero
};

// Sharper replacements for the blanket integral terms
struct IntegralTerms {
    XReal interacting;
    XReal outgoing;
};

// Blanket values: 4 e^{-r1^2/2s^2} + 1e-3 (or 1e-7) angle * p + 1e-101
IntegralTerms blanket_integral_terms(double sigma, const DerivedGeometry& g,
                                     const CalibratedVectors& cv);

BoundReport regime_bound(Regime regime, double sigma, const DerivedGeometry& g,
                         std::optional<IntegralTerms> terms = std::nullopt);
BoundReport final_bound(double sigma, const DerivedGeometry& g);
BoundReport detailed_bound(double sigma, const DerivedGeometry& g);
XReal interaction_probability(double sigma, const DerivedGeometry& g);

// throws domain_error when sigma lies outside [4.5/mv, r1_tilde/2]
void check_validity(double sigma, const DerivedGeometry& g);

}  // namespace abcert
