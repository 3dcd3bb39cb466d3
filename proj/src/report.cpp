#include "abcert/report.hpp"

#include "abcert/kinematics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace abcert {

Branch parse_branch(const std::string& s)
{
    if (s == "big") return Branch::Big;
    if (s == "small") return Branch::Small;
    throw std::invalid_argument("unknown branch '" + s + "' (expected big or small)");
}

Plateau plateau(const DerivedGeometry& g) { return {23.0 / g.mv(), g.r1 / 22.0}; }

Threshold threshold_sigma(const XReal& target, Branch branch, const DerivedGeometry& g,
                          double rel_tol)
{
    Threshold t;
    t.edges = plateau(g);
    const XReal& floor = additive_constants().e100;
    // the bound never drops below its additive constant
    if (std::abs(target.log_mag() - floor.log_mag()) <= 1e-12 * std::abs(floor.log_mag())) {
        t.on_plateau = true;
        return t;
    }
    if (target < floor)
        throw range_error("target " + to_sci_string(target) + " below the bound floor " + to_sci_string(floor));
    double lo, hi;
    if (branch == Branch::Big) {
        lo = t.edges.hi;
        hi = g.sigma_max();
    } else {
        lo = g.sigma_min();
        hi = t.edges.lo;
    }
    auto f = [&](double s) { return final_bound(s, g).total; };
    XReal flo = f(lo), fhi = f(hi);
    bool increasing = branch == Branch::Big;
    const XReal& fmin = increasing ? flo : fhi;
    const XReal& fmax = increasing ? fhi : flo;
    if (target < fmin || target > fmax) {
        std::ostringstream os;
        os << "target " << to_sci_string(target) << " outside the "
           << (increasing ? "big" : "small") << " branch range [" << to_sci_string(fmin) << ", "
           << to_sci_string(fmax) << "]";
        throw range_error(os.str());
    }
    while (hi - lo > rel_tol * hi) {
        double mid = 0.5 * (lo + hi);
        bool below = f(mid) < target;
        if (below == increasing)
            lo = mid;
        else
            hi = mid;
    }
    t.sigma = 0.5 * (lo + hi);
    return t;
}

TableKind parse_table_kind(const std::string& s)
{
    if (s == "big-sigma") return TableKind::BigSigma;
    if (s == "small-sigma") return TableKind::SmallSigma;
    if (s == "radius") return TableKind::Radius;
    if (s == "angle") return TableKind::Angle;
    throw std::invalid_argument("unknown table '" + s + "'");
}

std::string table_kind_name(TableKind k)
{
    switch (k) {
    case TableKind::BigSigma: return "big-sigma";
    case TableKind::SmallSigma: return "small-sigma";
    case TableKind::Radius: return "radius";
    case TableKind::Angle: return "angle";
    }
    return "?";
}

std::vector<XReal> table_targets()
{
    std::vector<XReal> t;
    for (int k = 1; k <= 10; ++k) t.push_back(XReal::pow10(-k));
    return t;
}

std::vector<TableRow> emit_table(TableKind kind, const DerivedGeometry& g)
{
    Branch br = (kind == TableKind::BigSigma || kind == TableKind::Radius) ? Branch::Big : Branch::Small;
    std::vector<TableRow> rows;
    for (const XReal& target : table_targets()) {
        TableRow r;
        r.target = target;
        r.sigma = threshold_sigma(target, br, g).sigma;
        switch (kind) {
        case TableKind::BigSigma:
        case TableKind::SmallSigma: r.value = r.sigma / g.r1; break;
        case TableKind::Radius: r.value = packet_radius(r.sigma) / g.r1; break;
        case TableKind::Angle:
            try {
                r.value = opening_angle_deg(r.sigma, g.mv());
            } catch (const domain_error&) {
                r.defined = false;
            }
            break;
        }
        rows.push_back(r);
    }
    return rows;
}

std::string table_csv(TableKind kind, const std::vector<TableRow>& rows)
{
    std::ostringstream os;
    const char* col = kind == TableKind::Radius  ? "radius_over_r1"
                      : kind == TableKind::Angle ? "opening_angle_deg"
                                                 : "sigma_over_r1";
    os << col << ",error_bound,sigma_cm\n";
    for (const auto& r : rows) {
        char buf[64];
        if (!r.defined)
            os << "undefined";
        else if (kind == TableKind::SmallSigma)
            os << to_sci_string(XReal::from_f64(r.value));
        else {
            std::snprintf(buf, sizeof buf, kind == TableKind::Angle ? "%.4f" : "%.5f", r.value);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.6e", r.sigma);
        os << ',' << to_sci_string(r.target) << ',' << buf << '\n';
    }
    return os.str();
}

Scale parse_scale(const std::string& s)
{
    if (s == "log") return Scale::Log;
    if (s == "linear") return Scale::Linear;
    throw std::invalid_argument("unknown scale '" + s + "' (expected log or linear)");
}

std::vector<double> sigma_grid(double from, double to, int points, Scale scale)
{
    if (!(from < to) || points < 2) throw domain_error("sweep: need from < to and at least 2 points");
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / (points - 1);
        double s = scale == Scale::Log ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                                       : from + t * (to - from);
        out.push_back(i == 0 ? from : i == points - 1 ? to : s);
    }
    return out;
}

std::vector<BoundReport> sweep(double from, double to, int points, Scale scale, Regime regime,
                               const DerivedGeometry& g)
{
    check_validity(from, g);
    check_validity(to, g);
    std::vector<BoundReport> rows;
    for (double s : sigma_grid(from, to, points, scale)) rows.push_back(regime_bound(regime, s, g));
    return rows;
}

std::string sweep_bounds_csv(const std::vector<BoundReport>& rows)
{
    std::ostringstream os;
    os << "sigma,size_term,angle_term,additive,total\n";
    for (const auto& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10e", r.sigma);
        os << buf << ',' << to_sci_string(r.size_term) << ',' << to_sci_string(r.angle_term) << ','
           << to_sci_string(r.additive_term) << ',' << to_sci_string(r.total) << '\n';
    }
    return os.str();
}

std::vector<double> default_probes(const DerivedGeometry& g, int points)
{
    return sigma_grid(g.sigma_min(), g.sigma_max(), points, Scale::Log);
}

std::vector<ParamRow> param_sweep(const std::vector<double>& eps_scales,
                                  const std::vector<double>& delta_scales,
                                  const std::vector<double>& probes, const Config& base)
{
    std::vector<ParamRow> rows;
    for (double es : eps_scales) {
        for (double ds : delta_scales) {
            ParamRow r;
            r.eps_scale = es;
            r.delta_scale = ds;
            try {
                Config c = base;
                c.scales = {es, ds};
                DerivedGeometry g = c.geometry();
                // the validity domain must stay inside the shrunken hole
                if (!(g.sigma_max() < g.r1)) throw domain_error("r1_tilde/2 >= r1");
                for (double s : probes) {
                    XReal b = regime_bound(Regime::Outgoing, s, g).total;
                    if (r.max_bound < b || r.argmax_sigma == 0) {
                        r.max_bound = b;
                        r.argmax_sigma = s;
                    }
                }
                r.accepted = true;
            } catch (const std::exception& e) {
                r.reason = e.what();
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::string param_csv(const std::vector<ParamRow>& rows)
{
    std::ostringstream os;
    os << "eps_scale,delta_scale,max_bound,argmax_sigma\n";
    for (const auto& r : rows) {
        if (!r.accepted) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6e", r.argmax_sigma);
        os << r.eps_scale << ',' << r.delta_scale << ',' << to_sci_string(r.max_bound) << ',' << buf
           << '\n';
    }
    return os.str();
}

}  // namespace abcert
