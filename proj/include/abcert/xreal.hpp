#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace abcert {

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Nonnegative real stored as a natural-log magnitude. Lossy operations
// round the log magnitude up by one ulp, so results are upper bounds.
class XReal {
public:
    XReal() = default;  // zero

    static XReal zero() { return XReal(); }
    static XReal one() { return from_log(0.0); }
    static XReal from_log(double log_mag);
    static XReal from_f64(double x);
    static XReal exp_neg(double x);
    static XReal pow10(double e);

    bool is_zero() const { return zero_; }
    double log_mag() const;
    double log10() const;
    double to_f64_clamped() const;

    XReal operator+(const XReal& o) const;
    XReal operator*(const XReal& o) const;
    XReal& operator+=(const XReal& o) { return *this = *this + o; }
    XReal& operator*=(const XReal& o) { return *this = *this * o; }
    XReal pow(double p) const;
    // a/b, rounded upward; b must be nonzero
    XReal div(const XReal& o) const;

    std::partial_ordering operator<=>(const XReal& o) const;
    bool operator==(const XReal& o) const { return (*this <=> o) == 0; }

private:
    bool zero_ = true;
    double lm_ = 0.0;
};

inline XReal add(const XReal& a, const XReal& b) { return a + b; }
inline XReal mul(const XReal& a, const XReal& b) { return a * b; }
inline XReal pow(const XReal& a, double p) { return a.pow(p); }
inline XReal exp_neg(double x) { return XReal::exp_neg(x); }
int cmp(const XReal& a, const XReal& b);

// "m.mmmm×10^e" with trailing zeros trimmed (at least one decimal kept)
std::string to_sci_string(const XReal& a, int digits = 4);
// parses "1e-10", "1.5×10^-3", "0"
XReal parse_xreal(const std::string& s);

}  // namespace abcert
