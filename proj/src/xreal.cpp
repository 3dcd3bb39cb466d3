#include "abcert/xreal.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>

namespace abcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double x) { return std::nextafter(x, kInf); }

}  // namespace

XReal XReal::from_log(double log_mag)
{
    if (std::isnan(log_mag) || log_mag == kInf)
        throw domain_error("XReal: log magnitude must be finite");
    XReal r;
    if (log_mag == -kInf) return r;
    r.zero_ = false;
    r.lm_ = log_mag;
    return r;
}

XReal XReal::from_f64(double x)
{
    if (std::isnan(x) || x < 0.0) throw domain_error("XReal: negative or NaN value");
    if (std::isinf(x)) throw domain_error("XReal: infinite value");
    if (x == 0.0) return XReal();
    return from_log(up(std::log(x)));
}

XReal XReal::exp_neg(double x)
{
    if (std::isnan(x) || x < 0.0) throw domain_error("exp_neg: argument must be >= 0");
    if (std::isinf(x)) return XReal();
    return from_log(-x);
}

XReal XReal::pow10(double e) { return from_log(up(e * std::log(10.0))); }

double XReal::log_mag() const { return zero_ ? -kInf : lm_; }

double XReal::log10() const { return zero_ ? -kInf : lm_ / std::log(10.0); }

double XReal::to_f64_clamped() const
{
    if (zero_) return 0.0;
    if (lm_ > std::log(DBL_MAX)) return DBL_MAX;
    return std::exp(lm_);
}

XReal XReal::operator+(const XReal& o) const
{
    if (zero_) return o;
    if (o.zero_) return *this;
    double hi = std::max(lm_, o.lm_);
    double lo = std::min(lm_, o.lm_);
    XReal r;
    r.zero_ = false;
    r.lm_ = up(hi + std::log1p(std::exp(lo - hi)));
    return r;
}

XReal XReal::operator*(const XReal& o) const
{
    if (zero_ || o.zero_) return XReal();
    if (lm_ == 0.0) return o;
    if (o.lm_ == 0.0) return *this;
    return from_log(up(lm_ + o.lm_));
}

XReal XReal::pow(double p) const
{
    if (std::isnan(p)) throw domain_error("pow: NaN exponent");
    if (zero_) {
        if (p <= 0.0) throw domain_error("pow: zero base needs positive exponent");
        return XReal();
    }
    if (p == 1.0) return *this;
    double l = lm_ * p;
    return from_log(l == 0.0 ? 0.0 : up(l));
}

XReal XReal::div(const XReal& o) const
{
    if (o.zero_) throw domain_error("XReal: division by zero");
    if (zero_) return XReal();
    return from_log(up(lm_ - o.lm_));
}

std::partial_ordering XReal::operator<=>(const XReal& o) const
{
    if (zero_ && o.zero_) return std::partial_ordering::equivalent;
    if (zero_) return std::partial_ordering::less;
    if (o.zero_) return std::partial_ordering::greater;
    return lm_ <=> o.lm_;
}

int cmp(const XReal& a, const XReal& b)
{
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string to_sci_string(const XReal& a, int digits)
{
    if (a.is_zero()) return "0";
    double l10 = a.log10();
    double e = std::floor(l10);
    double m = std::pow(10.0, l10 - e);
    double scale = std::pow(10.0, digits);
    m = std::round(m * scale) / scale;
    if (m >= 10.0) {
        m /= 10.0;
        e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, m);
    std::string ms(buf);
    while (ms.size() > 3 && ms.back() == '0') ms.pop_back();
    std::snprintf(buf, sizeof buf, "%.0f", e);
    return ms + "×10^" + buf;
}

XReal parse_xreal(const std::string& s)
{
    static const std::string times = "×10^";
    auto pos = s.find(times);
    if (pos != std::string::npos) {
        double m = std::stod(s.substr(0, pos));
        double e = std::stod(s.substr(pos + times.size()));
        if (m < 0) throw domain_error("parse_xreal: negative mantissa");
        if (m == 0) return XReal();
        return XReal::from_log(up(std::log(m) + e * std::log(10.0)));
    }
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        double m = epos == 0 ? 1.0 : std::stod(s.substr(0, epos));
        double e = std::stod(s.substr(epos + 1));
        if (m < 0) throw domain_error("parse_xreal: negative mantissa");
        if (m == 0) return XReal();
        return XReal::from_log(up(std::log(m) + e * std::log(10.0)));
    }
    return XReal::from_f64(std::stod(s));
}

}  // namespace abcert
