#include "abcert/bounds.hpp"
#include "abcert/certify.hpp"
#include "abcert/config.hpp"
#include "abcert/field_checks.hpp"
#include "abcert/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace abcert;
using nlohmann::json;

namespace {

struct Globals {
    std::string magnet, energy, config, out;
    bool json = false;
};

Config load(const Globals& g)
{
    Config c;
    if (!g.config.empty()) apply_overrides(c, read_kv_file(g.config));
    if (!g.magnet.empty()) c.magnet = magnet_by_id(g.magnet);
    if (!g.energy.empty()) c.beam = beam_by_id(g.energy);
    return c;
}

void emit(const Globals& g, const std::string& text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw std::invalid_argument("cannot write " + g.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json bound_json(const BoundReport& b)
{
    return {{"regime", regime_name(b.regime)},
            {"sigma", b.sigma},
            {"magnet", b.magnet},
            {"energy", b.energy},
            {"size_term", to_sci_string(b.size_term)},
            {"angle_term", to_sci_string(b.angle_term)},
            {"additive_term", to_sci_string(b.additive_term)},
            {"total", to_sci_string(b.total)},
            {"clamped", b.clamped}};
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
}

std::vector<int> parse_sets(const std::string& s)
{
    if (s.empty() || s == "all") return {};
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.rfind("sigma", 0) == 0) item = item.substr(5);
        int k = std::stoi(item);
        if (k < 1 || k > 11) throw std::invalid_argument("set index must lie in 1..11");
        out.push_back(k);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Error bounds and certification for the Aharonov-Bohm ansatz"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals G;
    app.add_option("--magnet", G.magnet, "magnet id (k1, k2)");
    app.add_option("--energy", G.energy, "beam id (e1, e2, e3)");
    app.add_option("--config", G.config, "key=value configuration file");
    app.add_option("--out", G.out, "output file (default stdout)");
    app.add_flag("--json", G.json, "emit JSON");

    int code = 0;

    auto* eval = app.add_subcommand("eval", "evaluate a bound at one variance");
    double sigma = 0;
    std::string regime = "uniform";
    eval->add_option("--sigma", sigma, "variance in cm")->required();
    eval->add_option("--regime", regime, "incoming|interacting|outgoing|scattering|uniform|detailed");
    eval->callback([&] {
        DerivedGeometry g = load(G).geometry();
        BoundReport b = regime_bound(parse_regime(regime), sigma, g);
        if (G.json) {
            emit(G, dump(bound_json(b)));
        } else {
            emit(G, sweep_bounds_csv({b}));
        }
    });

    auto* table = app.add_subcommand("table", "reproduce one of the threshold tables");
    std::string which;
    table->add_option("--which", which, "big-sigma|small-sigma|radius|angle")->required();
    table->callback([&] {
        DerivedGeometry g = load(G).geometry();
        TableKind k = parse_table_kind(which);
        auto rows = emit_table(k, g);
        if (G.json) {
            json j = json::array();
            for (const auto& r : rows)
                j.push_back({{"target", to_sci_string(r.target)},
                             {"sigma", r.sigma},
                             {"value", r.defined ? json(r.value) : json("undefined")}});
            emit(G, dump({{"table", table_kind_name(k)}, {"rows", j}}));
        } else {
            emit(G, table_csv(k, rows));
        }
    });

    auto* thr = app.add_subcommand("threshold", "solve final_bound(sigma) = target");
    std::string target_s, branch_s = "big";
    thr->add_option("--target", target_s, "target bound, e.g. 1e-10")->required();
    thr->add_option("--branch", branch_s, "big|small");
    thr->callback([&] {
        DerivedGeometry g = load(G).geometry();
        Threshold t = threshold_sigma(parse_xreal(target_s), parse_branch(branch_s), g);
        json j = {{"target", to_sci_string(parse_xreal(target_s))}, {"branch", branch_s}};
        if (t.on_plateau) {
            j["plateau"] = {t.edges.lo, t.edges.hi};
        } else {
            j["sigma"] = t.sigma;
            j["sigma_over_r1"] = t.sigma / g.r1;
        }
        if (G.json) {
            emit(G, dump(j));
        } else {
            std::ostringstream os;
            os.precision(8);
            if (t.on_plateau)
                os << "plateau," << t.edges.lo << ',' << t.edges.hi << '\n';
            else
                os << "sigma," << t.sigma << "\nsigma_over_r1," << t.sigma / g.r1 << '\n';
            emit(G, os.str());
        }
    });

    auto* sw = app.add_subcommand("sweep", "evaluate a bound on a sigma grid");
    double from = 0, to = 0;
    int points = 100;
    std::string scale = "log", sw_regime = "uniform";
    sw->add_option("--from", from)->required();
    sw->add_option("--to", to)->required();
    sw->add_option("--points", points);
    sw->add_option("--scale", scale, "log|linear");
    sw->add_option("--regime", sw_regime);
    sw->callback([&] {
        DerivedGeometry g = load(G).geometry();
        auto rows = sweep(from, to, points, parse_scale(scale), parse_regime(sw_regime), g);
        if (G.json) {
            json j = json::array();
            for (const auto& r : rows) j.push_back(bound_json(r));
            emit(G, dump(j));
        } else {
            emit(G, sweep_bounds_csv(rows));
        }
    });

    auto* ver = app.add_subcommand("verify", "run the consecutive-pair certification sweep");
    std::string set_s = "all";
    double delta0 = 0, refine = 0;
    unsigned jobs = 0;
    ver->add_option("--set", set_s, "sigma1..sigma11, a comma list, or all");
    ver->add_option("--delta0", delta0, "override the grid pitch");
    ver->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    ver->add_option("--refine", refine, "re-check failures with delta0 divided by this factor");
    ver->callback([&] {
        Config c = load(G);
        SweepOptions opt;
        opt.sets = parse_sets(set_s);
        if (delta0 > 0) opt.delta0 = delta0;
        opt.jobs = jobs;
        opt.refine_factor = refine;
        SweepReport rep = lemma64_sweep(c.geometry(), opt, c.sigma_log_base);
        if (G.json) {
            json j = {{"pairs", rep.rows.size()}, {"failures", rep.failures()}};
            if (rep.refined) j["residual_failures"] = rep.residual_failures();
            json f = json::array();
            for (const auto& r : rep.rows)
                if (!r.pass)
                    f.push_back({{"set", r.set}, {"mu1", r.mu1}, {"mu2", r.mu2},
                                 {"flags", r.hyp.flags()}, {"margin", to_sci_string(r.margin)},
                                 {"error", r.error}});
            j["failed_pairs"] = f;
            emit(G, dump(j));
        } else {
            emit(G, sweep_csv(rep));
        }
        std::cerr << rep.rows.size() << " pairs, " << rep.failures() << " failures";
        if (rep.refined) std::cerr << ", " << rep.residual_failures() << " after refinement";
        std::cerr << '\n';
        if (rep.refined ? rep.residual_failures() : rep.failures()) code = 1;
    });

    auto* fld = app.add_subcommand("field", "field-model certificates");
    std::string check;
    fld->add_option("--check", check, "flux|divergence|gauge|supnorms")->required();
    fld->callback([&] {
        CheckReport rep = run_field_check(check, load(G).geometry());
        if (G.json) {
            emit(G, dump({{"check", rep.name},
                          {"samples", rep.samples},
                          {"worst_ratio", rep.worst_ratio},
                          {"violations", rep.violations.size()},
                          {"pass", rep.pass()}}));
        } else {
            emit(G, check_csv(rep));
        }
        std::cerr << rep.name << ": " << (rep.pass() ? "PASS" : "FAIL") << " (" << rep.samples
                  << " samples, worst value/bound " << rep.worst_ratio << ")\n";
        if (!rep.pass()) code = 1;
    });

    auto* par = app.add_subcommand("params", "grid search over the cutoff parameter scales");
    bool do_sweep = false;
    std::string eps_s = "0.5,0.75,1,1.5,2", delta_s = "0.5,0.75,1,1.5,2";
    int probes = 12;
    par->add_flag("--sweep", do_sweep)->required();
    par->add_option("--eps-scales", eps_s);
    par->add_option("--delta-scales", delta_s);
    par->add_option("--probes", probes);
    par->callback([&] {
        Config c = load(G);
        auto rows = param_sweep(parse_list(eps_s), parse_list(delta_s),
                                default_probes(c.geometry(), probes), c);
        for (const auto& r : rows)
            if (!r.accepted)
                std::cerr << "rejected eps_scale=" << r.eps_scale << " delta_scale=" << r.delta_scale
                          << ": " << r.reason << '\n';
        emit(G, param_csv(rows));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return code;
}
