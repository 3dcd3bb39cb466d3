#include "abcert/certify.hpp"

#include "abcert/field.hpp"
#include "abcert/kinematics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace abcert {

namespace {

const double kQuartPi = std::pow(std::numbers::pi, 0.25);
constexpr double kHalfSqrtPi = 0.88622692545275801365;
constexpr double kInvSqrt2 = 0.70710678118654752440;

XReal X(double v) { return XReal::from_f64(v); }

std::vector<double> case1(double a, double b, double step)
{
    std::vector<double> p{a};
    if (b <= a) return p;
    double tol = 1e-9 * step;
    for (long i = 1;; ++i) {
        double x = a + static_cast<double>(i) * step;
        if (x >= b - tol) break;
        p.push_back(x);
    }
    p.push_back(b);
    return p;
}

}  // namespace

int order_of(double a)
{
    if (!(a > 0.0) || !std::isfinite(a)) throw domain_error("order_of: need a finite a > 0");
    int o = static_cast<int>(std::floor(std::log10(a)));
    while (std::pow(10.0, o) > a) --o;
    while (std::pow(10.0, o + 1) <= a) ++o;
    return o;
}

Partition partition(double a, double b, double N0)
{
    if (!(a > 0.0) || !(b > a) || !(N0 > 0.0))
        throw domain_error("partition: need 0 < a < b and N0 > 0");
    Partition P{a, b, N0, {}};
    int oa = order_of(a);
    double top = std::pow(10.0, oa + 1);
    if (b <= top) {
        P.points = case1(a, b, N0 * std::pow(10.0, oa));
        return P;
    }
    int ob = order_of(b);
    std::vector<double> pts = case1(a, top, N0 * std::pow(10.0, oa));
    for (int j = 1; j <= ob - oa - 1; ++j) {
        auto q = case1(std::pow(10.0, oa + j), std::pow(10.0, oa + j + 1), N0 * std::pow(10.0, oa + j));
        pts.insert(pts.end(), q.begin(), q.end());
    }
    auto last = case1(std::pow(10.0, ob), b, N0 * std::pow(10.0, ob));
    pts.insert(pts.end(), last.begin(), last.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    P.points = std::move(pts);
    return P;
}

std::vector<SigmaSet> sigma_sets(const DerivedGeometry& g, double log_base)
{
    double r1 = g.r1, L = log_base;
    double s0 = g.sigma0;
    struct SetDef {
        double a, b, N0;
    };
    const SetDef specs[11] = {
        {r1 / (L * 250), r1 / (L * 197), .0003},
        {r1 / (L * 197), r1 / (L * 150), .0005},
        {r1 / (L * 150), 1e-5, .0008},
        {1e-5, 1.1e-5, .0001},
        {1.1e-5, 1.3e-5, .0002},
        {1.3e-5, 1.7e-5, .0004},
        {1.7e-5, 2e-5, .0008},
        {2e-5, g.magnet.r1_tilde / 2, .0015},
        {1e-6, r1 / (L * 250), 1000},
        {s0, 1e-6, 1000},
        {g.sigma_min(), s0, .1},
    };
    std::vector<SigmaSet> out;
    for (int j = 0; j < 11; ++j) {
        // the ninth set is written with its endpoints reversed
        double a = std::min(specs[j].a, specs[j].b), b = std::max(specs[j].a, specs[j].b);
        out.push_back({j + 1, j < 10 ? 1e-6 : s0, partition(a, b, specs[j].N0)});
    }
    return out;
}

GridKind parse_grid_kind(const std::string& s)
{
    if (s == "b3") return GridKind::B3;
    if (s == "b4") return GridKind::B4;
    if (s == "b5") return GridKind::B5;
    if (s == "b6") return GridKind::B6;
    throw std::invalid_argument("unknown grid kind '" + s + "'");
}

namespace {

// weights beyond this relative size no longer move the sum
constexpr double kTailRel = 1e-18;
constexpr long kMaxNodes = 4000000;

double up(double z) { return z + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z); }

}  // namespace

namespace {

// lattice sqrt(delta0 n) clipped to the window, with lazily mapped abscissae
class NodeWalk {
public:
    NodeWalk(double sigma, double mv, double zeta, double s, double Z, double delta0)
        : sigma_(sigma), mv_(mv), zeta_(zeta), Z_(Z), d0_(delta0), prev_(s)
    {
        lo_ = -theta_inv(sigma, mv, s, s, zeta);
        hi_ = -theta_inv(sigma, mv, Z, Z, zeta);
        if (!(hi_ > lo_)) return;
        n0_ = static_cast<long>(std::ceil(lo_ * lo_ / delta0));
        while (node(n0_) < lo_) ++n0_;
        long n1 = static_cast<long>(std::floor(hi_ * hi_ / delta0));
        while (n1 >= n0_ && node(n1) > hi_) --n1;
        count_ = std::max(0L, std::min(n1 - n0_ + 1, kMaxNodes));
    }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    long count() const { return count_; }
    double node(long n) const { return std::sqrt(d0_ * static_cast<double>(n)); }
    // must be called with j = 0, 1, 2, ...
    std::pair<double, double> next(long j)
    {
        double Zn = node(n0_ + j);
        // rounded up: the crossing must not sit left of its true position
        double z = up(z_crossing(Zn, sigma_, mv_, zeta_));
        z = std::clamp(z, prev_, Z_);
        prev_ = z;
        return {Zn, z};
    }

private:
    double sigma_, mv_, zeta_, Z_, d0_, prev_;
    double lo_ = 0, hi_ = 0;
    long n0_ = 0, count_ = 0;
};

void check_window(double zeta, double s, double Z, double delta0)
{
    if (!(Z >= s) || !(s >= zeta)) throw domain_error("grid bound: need Z >= s >= zeta");
    if (!(delta0 > 0.0)) throw domain_error("grid bound: need delta0 > 0");
}

// Riemann-type majorant; node(j) yields (Z_j, z_j) in order
template <class Nodes>
XReal majorant(GridKind kind, double sigma, double mv, double s, double Z, double lo, double hi,
               long K, Nodes&& node, double r1)
{
    if (!(Z > s)) return XReal();
    if (kind == GridKind::B6 && r1 * rho(sigma, mv, Z) < 1.0)
        throw domain_error("grid bound b6: hypothesis r1 rho(Z) >= 1 fails");

    // weight of an interval evaluated at its right endpoint
    auto weight = [&](double right) -> XReal {
        if (kind == GridKind::B3) return XReal::one();
        double x = r1 * rho(sigma, mv, right);
        XReal w = XReal::exp_neg(0.5 * x * x);
        if (kind == GridKind::B6) w *= X(x);
        return w;
    };
    auto factor = [&](double t) -> XReal {
        if (kind != GridKind::B5) return XReal::one();
        return X(std::sqrt(t + kHalfSqrtPi));
    };
    XReal pre = X(kind == GridKind::B5 ? kInvSqrt2 : kQuartPi * kInvSqrt2);
    XReal wZ = weight(Z);
    XReal fZ = factor(hi);
    XReal g_lo = XReal::exp_neg(0.5 * lo * lo);
    if (K == 0) return pre * wZ * g_lo * fZ * X(Z - s);

    auto [N, z] = node(0);
    XReal sum = weight(z) * g_lo * factor(N) * X(z - s);
    for (long j = 0; j + 1 < K; ++j) {
        XReal g = XReal::exp_neg(0.5 * N * N);
        // the last interval majorizes everything from here on
        XReal tail = wZ * g * fZ * X(Z - z);
        if (!sum.is_zero() && tail <= sum * X(kTailRel)) return pre * (sum + tail);
        auto [N2, z2] = node(j + 1);
        sum += weight(z2) * g * factor(N2) * X(z2 - z);
        N = N2;
        z = z2;
    }
    sum += wZ * XReal::exp_neg(0.5 * N * N) * fZ * X(Z - z);
    return pre * sum;
}

}  // namespace

GridBound grid_nodes(double sigma, double mv, double zeta, double s, double Z, double delta0)
{
    check_window(zeta, s, Z, delta0);
    NodeWalk w(sigma, mv, zeta, s, Z, delta0);
    GridBound gb;
    gb.sigma = sigma;
    gb.mv = mv;
    gb.zeta = zeta;
    gb.s = s;
    gb.Z = Z;
    gb.delta0 = delta0;
    gb.theta_s = w.lo();
    gb.theta_Z = w.hi();
    for (long j = 0; j < w.count(); ++j) {
        auto [Zn, z] = w.next(j);
        gb.nodes.push_back(Zn);
        gb.abscissae.push_back(z);
    }
    return gb;
}

XReal grid_upper_bound(GridKind kind, const GridBound& sk, double r1)
{
    auto node = [&](long j) { return std::pair{sk.nodes[j], sk.abscissae[j]}; };
    return majorant(kind, sk.sigma, sk.mv, sk.s, sk.Z, sk.theta_s, sk.theta_Z,
                    static_cast<long>(sk.nodes.size()), node, r1);
}

XReal grid_upper_bound(GridKind kind, double sigma, double mv, double zeta, double s, double Z,
                       double delta0, double r1)
{
    check_window(zeta, s, Z, delta0);
    NodeWalk w(sigma, mv, zeta, s, Z, delta0);
    auto node = [&](long j) { return w.next(j); };
    return majorant(kind, sigma, mv, s, Z, w.lo(), w.hi(), w.count(), node, r1);
}

std::string Hypotheses::flags() const
{
    std::string f;
    f += sigma0_order ? 'O' : 'o';
    f += mu3_order ? 'M' : 'm';
    f += z_threshold ? 'Z' : 'z';
    f += rho_zs ? 'S' : 's';
    f += rho_Z ? 'R' : 'r';
    return f;
}

PairGeometry pair_geometry(double mu1, double mu2, double mu3, const DerivedGeometry& g)
{
    double mv = g.mv(), r1 = g.r1, s0 = g.sigma0;
    PairGeometry p{};
    p.mu1 = mu1;
    p.mu2 = mu2;
    p.mu3 = mu3;
    p.mu_min = std::min(mu1, mu2);
    p.mu_max = std::max(mu1, mu2);
    bool below = mu1 <= s0 && mu2 <= s0 && mu3 <= s0;
    bool above = mu1 >= s0 && mu2 >= s0 && mu3 >= s0;
    p.hyp.sigma0_order = below || above;
    bool under3 = mu1 <= mu3 && mu2 <= mu3;
    p.hyp.mu3_order = under3 || (mu1 >= mu3 && mu2 >= mu3);
    p.nu = under3 ? p.mu_min : p.mu_max;
    p.h_max = g.h(p.mu_max);
    // the crossing points are undefined once an ordering hypothesis fails
    if (!p.hyp.sigma0_order || !p.hyp.mu3_order) return p;

    if (below) {
        p.Z = z_of_sigma(g, p.mu_max);
    } else {
        double w = omega_tilde_inv(p.mu_max, mv);
        p.Z = z_crossing2(w, mu1, mu2, mv, p.h_max);
    }
    p.zs = z_crossing2(kInvSqrt2, p.nu, mu3, mv, p.h_max);
    p.zt = z_crossing2(std::sqrt(1.5), p.nu, mu3, mv, p.h_max);
    p.r_nu_mu3 = r_pair(p.nu, mu3, r1, mv);
    p.r_12 = r_pair(mu1, mu2, r1, mv);

    p.hyp.z_threshold = p.Z >= p.zt;
    p.hyp.rho_zs = r1 * rho(mu1, mv, p.zs) >= 1.0 && r1 * rho(mu2, mv, p.zs) >= 1.0;
    p.hyp.rho_Z = r1 * rho(mu1, mv, p.Z) >= 1.0 && r1 * rho(mu2, mv, p.Z) >= 1.0 &&
                  r1 * rho(mu3, mv, p.Z) >= 1.0;
    return p;
}

namespace {

std::string describe(const PairGeometry& p)
{
    std::ostringstream os;
    os.precision(6);
    os << "(mu1=" << p.mu1 << ", mu2=" << p.mu2 << ", mu3=" << p.mu3 << ")";
    return os.str();
}

void require(const PairGeometry& p)
{
    const auto& h = p.hyp;
    auto fail = [&](const char* what) {
        throw domain_error(std::string("hypothesis '") + what + "' fails at " + describe(p));
    };
    if (!h.sigma0_order) fail("mu_i on one side of sigma0");
    if (!h.mu3_order) fail("mu1, mu2 on one side of mu3");
    if (!h.z_threshold) fail("Z >= z_{sqrt(2/3), nu, mu3}(h)");
    if (!h.rho_zs) fail("r1 rho(mu_i, z_{sqrt2, nu, mu3}) >= 1");
    if (!h.rho_Z) fail("r1 rho(mu_i, Z) >= 1");
}

// the zeta independent pieces of I_ps and I_ss
struct GridPieces {
    XReal ps_b4, ss_b5, ss_b6, ss_b3, ss_b4;
};

GridPieces grid_pieces(const PairGeometry& p, const DerivedGeometry& g, double delta0)
{
    double mv = g.mv(), r1 = g.r1, h = p.h_max;
    double mid = std::max(p.zs, std::min(p.r_nu_mu3, p.Z));
    GridPieces gp;
    for (double mu : {p.nu, p.mu3}) {
        gp.ps_b4 += grid_upper_bound(GridKind::B4, mu, mv, h, p.zs, p.Z, delta0, r1);
        gp.ss_b5 += grid_upper_bound(GridKind::B5, mu, mv, h, p.zt, p.Z, delta0, r1);
        if (mid > p.zs) gp.ss_b6 += grid_upper_bound(GridKind::B6, mu, mv, h, p.zs, mid, delta0, r1);
        gp.ss_b3 += grid_upper_bound(GridKind::B3, mu, mv, h, mid, p.Z, delta0, r1);
    }
    gp.ss_b4 = gp.ps_b4;
    return gp;
}

XReal max_gauss(const PairGeometry& p, double r1, double mv, double z)
{
    double x = std::min(rho(p.mu1, mv, z), rho(p.mu2, mv, z)) * r1;
    return XReal::exp_neg(0.5 * x * x);
}

// max_i r1 rho e^{-r1^2 rho^2/2}, using that x e^{-x^2/2} falls for x >= 1
XReal max_x_gauss(const PairGeometry& p, double r1, double mv, double z)
{
    XReal best;
    for (double mu : {p.mu1, p.mu2}) {
        double x = r1 * rho(mu, mv, z);
        XReal v = X(x) * XReal::exp_neg(0.5 * x * x);
        if (best < v) best = v;
    }
    return best;
}

XReal i_ps(const PairGeometry& p, const GridPieces& gp, double zeta, double r1, double mv)
{
    XReal out = X(kQuartPi * p.zs) * max_gauss(p, r1, mv, p.zs);
    if (zeta < 0.0) out += X(kQuartPi * -zeta) * max_gauss(p, r1, mv, zeta);
    return out + gp.ps_b4;
}

XReal i_ss(const PairGeometry& p, const GridPieces& gp, double zeta, double r1, double mv)
{
    double nz = std::max(-zeta, 0.0);
    XReal out = X(kQuartPi * kInvSqrt2 * p.zt) * max_gauss(p, r1, mv, p.zt);
    out += X(kQuartPi * p.zs) * max_x_gauss(p, r1, mv, p.zs);
    out += X(kQuartPi * p.zs) * max_gauss(p, r1, mv, p.zs);
    if (nz > 0.0) {
        XReal g = max_gauss(p, r1, mv, zeta);
        out += X(kQuartPi * kInvSqrt2 * nz) * g;
        if (std::abs(zeta) <= p.r_12)
            out += X(kQuartPi * nz) * max_x_gauss(p, r1, mv, zeta);
        else
            out += X(kQuartPi * nz) * XReal::exp_neg(0.5);
        out += X(kQuartPi * nz) * g;
    }
    return out + gp.ss_b5 + gp.ss_b6 + XReal::exp_neg(0.5) * gp.ss_b3 + gp.ss_b4;
}

}  // namespace

IntegralValues integral_terms(double mu1, double mu2, double mu3, double zeta,
                              const DerivedGeometry& g, double delta0)
{
    PairGeometry p = pair_geometry(mu1, mu2, mu3, g);
    require(p);
    GridPieces gp = grid_pieces(p, g, delta0);
    IntegralValues v;
    v.geom = p;
    v.I_ps = i_ps(p, gp, zeta, g.r1, g.mv());
    v.I_pp = i_ps(p, gp, 0.0, g.r1, g.mv());
    v.I_ss = i_ss(p, gp, zeta, g.r1, g.mv());
    v.I_sp = i_ss(p, gp, 0.0, g.r1, g.mv());
    return v;
}

PairResult check_pair(int set, double mu1, double mu2, double mu3, const DerivedGeometry& g,
                      std::optional<double> delta0)
{
    PairResult r;
    r.set = set;
    r.mu1 = mu1;
    r.mu2 = mu2;
    r.mu3 = mu3;
    r.delta0 = delta0 ? *delta0 : (mu1 * g.mv() > 10.0 ? 1.0 : 0.1);
    try {
        PairGeometry p = pair_geometry(mu1, mu2, mu3, g);
        r.hyp = p.hyp;
        require(p);
        GridPieces gp = grid_pieces(p, g, r.delta0);
        double r1 = g.r1, mv = g.mv();
        XReal pp = i_ps(p, gp, 0.0, r1, mv);
        XReal ps = i_ps(p, gp, -p.Z, r1, mv);
        XReal sp = i_ss(p, gp, 0.0, r1, mv);
        XReal ss = i_ss(p, gp, -p.Z, r1, mv);

        CConstants c = FieldConstants(g).c_constants(mu1);
        r.lhs_interacting = X(c.pp) * pp + X(c.ps / 2) * ps + X(c.sp) * sp + X(c.ss / 2) * ss;
        r.lhs_outgoing = X(c.pp + c.ps) * pp + X(c.sp + c.ss) * sp;

        CalibratedVectors cv = calibrated_vectors(g);
        const auto& k = additive_constants();
        XReal size = X(4.0) * size_factor(mu1, r1);
        XReal ang = angle_factor(mu2, mv);
        double p0 = std::max(p_poly(cv, GIndex::Zero, mu2), 0.0);
        double pi = std::max(p_poly(cv, GIndex::Inf, mu2), 0.0);
        r.rhs_interacting = size + X(1e-3 * p0) * ang + k.e101;
        r.rhs_outgoing = size + X(1e-7 * pi) * ang + k.e101;

        XReal m1 = r.rhs_interacting.div(r.lhs_interacting);
        XReal m2 = r.rhs_outgoing.div(r.lhs_outgoing);
        r.margin = std::min(m1, m2, [](const XReal& a, const XReal& b) { return a < b; });
        r.pass = r.margin >= XReal::one();
    } catch (const std::exception& e) {
        r.error = e.what();
        r.pass = false;
    }
    return r;
}

size_t SweepReport::failures() const
{
    return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [](const PairResult& r) {
        return !r.pass;
    }));
}

size_t SweepReport::residual_failures() const
{
    return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [](const PairResult& r) {
        return !r.pass && !r.refined_pass;
    }));
}

SweepReport lemma64_sweep(const DerivedGeometry& g, const SweepOptions& opt, double log_base)
{
    struct Item {
        int set;
        double mu1, mu2, mu3;
    };
    std::vector<Item> items;
    for (const auto& S : sigma_sets(g, log_base)) {
        if (!opt.sets.empty() && std::find(opt.sets.begin(), opt.sets.end(), S.index) == opt.sets.end())
            continue;
        const auto& pts = S.part.points;
        for (size_t i = 0; i + 1 < pts.size(); ++i) items.push_back({S.index, pts[i], pts[i + 1], S.mu3});
    }

    SweepReport rep;
    rep.refined = opt.refine_factor > 0;
    rep.rows.resize(items.size());
    unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<size_t>(items.size(), 1));
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next.fetch_add(1)) < items.size();) {
            const Item& it = items[i];
            PairResult r = check_pair(it.set, it.mu1, it.mu2, it.mu3, g, opt.delta0);
            if (!r.pass && r.error.empty() && opt.refine_factor > 0) {
                double d = r.delta0 / opt.refine_factor;
                PairResult f = check_pair(it.set, it.mu1, it.mu2, it.mu3, g, d);
                r.refined_delta0 = d;
                r.refined_margin = f.margin;
                r.refined_pass = f.pass;
            }
            rep.rows[i] = std::move(r);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rep;
}

std::string sweep_csv(const SweepReport& rep)
{
    std::ostringstream os;
    os.precision(10);
    os << "set,mu1,mu2,mu3,hypothesis_flags,lhs_interacting,rhs_interacting,lhs_outgoing,"
          "rhs_outgoing,margin,pass";
    if (rep.refined) os << ",refined_delta0,refined_margin,refined_pass";
    os << '\n';
    for (const auto& r : rep.rows) {
        os << r.set << ',' << r.mu1 << ',' << r.mu2 << ',' << r.mu3 << ',' << r.hyp.flags() << ','
           << to_sci_string(r.lhs_interacting) << ',' << to_sci_string(r.rhs_interacting) << ','
           << to_sci_string(r.lhs_outgoing) << ',' << to_sci_string(r.rhs_outgoing) << ','
           << to_sci_string(r.margin) << ',' << (r.pass ? "true" : "false");
        if (rep.refined) {
            if (r.refined_delta0)
                os << ',' << *r.refined_delta0 << ',' << to_sci_string(r.refined_margin) << ','
                   << (r.refined_pass ? "true" : "false");
            else
                os << ",,,";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace abcert
