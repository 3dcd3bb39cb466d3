#include "abcert/config.hpp"
#include "abcert/xreal.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace abcert {

BuiltinMagnets builtin_magnets()
{
    return {{"k1", 1.5e-4, 2.5e-4, 1e-6}, {"k2", 1.75e-4, 2.75e-4, 1e-6}};
}

BuiltinBeams builtin_beams()
{
    return {{"e1", 150.0, 2.2971e10, 1.9842e10},
            {"e2", 100.0, 1.8755e10, 1.6201e10},
            {"e3", 80.0, 1.6775e10, 1.4491e10}};
}

Magnet magnet_by_id(const std::string& id)
{
    auto m = builtin_magnets();
    if (id == "k1" || id == "K1") return m.k1;
    if (id == "k2" || id == "K2") return m.k2;
    throw std::invalid_argument("unknown magnet '" + id + "' (expected k1 or k2)");
}

Beam beam_by_id(const std::string& id)
{
    auto b = builtin_beams();
    if (id == "e1" || id == "E1") return b.e1;
    if (id == "e2" || id == "E2") return b.e2;
    if (id == "e3" || id == "E3") return b.e3;
    throw std::invalid_argument("unknown energy '" + id + "' (expected e1, e2 or e3)");
}

double DerivedGeometry::delta(double sigma) const
{
    return scales.delta * std::max(10.0 * sigma, magnet.h_tilde);
}

double DerivedGeometry::S1(double sigma) const
{
    if (!(sigma > 0.0 && sigma < r1)) throw domain_error("S1: sigma must lie in (0, r1)");
    return sigma * beam.mv * std::sqrt((r1 - sigma) * (r1 + sigma));
}

DerivedGeometry derive(const Magnet& magnet, const Beam& beam, double flux, ParamScales scales)
{
    if (!(magnet.r1_tilde > 0 && magnet.r2_tilde > magnet.r1_tilde && magnet.h_tilde > 0))
        throw domain_error("magnet geometry must satisfy 0 < r1 < r2 and h > 0");
    if (!(beam.v > 0 && beam.mv > 0)) throw domain_error("beam velocity must be positive");
    if (!(std::abs(flux) < 2.0 * std::numbers::pi))
        throw domain_error("flux must satisfy |flux| < 2 pi");
    if (!(scales.eps > 0 && scales.delta > 0)) throw domain_error("parameter scales must be > 0");

    DerivedGeometry g;
    g.magnet = magnet;
    g.beam = beam;
    g.flux = flux;
    g.scales = scales;
    g.eps_tilde = (magnet.r2_tilde - magnet.r1_tilde) / 200.0;
    g.delta_tilde = magnet.h_tilde / 100.0;
    g.eps = scales.eps * magnet.r1_tilde / 50.0;
    if (!(g.eps < magnet.r1_tilde)) throw domain_error("eps must be smaller than r1_tilde");
    g.r1 = magnet.r1_tilde - g.eps;
    g.r2 = magnet.r2_tilde + g.eps;
    g.sigma0 = std::sqrt(34.0 / 33.0) * std::sqrt(2000.0) / beam.mv;
    return g;
}

std::map<std::string, std::string> read_kv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_overrides(Config& cfg, const std::map<std::string, std::string>& kv)
{
    for (const auto& [k, v] : kv) {
        if (k == "magnet") cfg.magnet = magnet_by_id(v);
        else if (k == "energy") cfg.beam = beam_by_id(v);
        else if (k == "magnet.r1_tilde") cfg.magnet.r1_tilde = std::stod(v);
        else if (k == "magnet.r2_tilde") cfg.magnet.r2_tilde = std::stod(v);
        else if (k == "magnet.h_tilde") cfg.magnet.h_tilde = std::stod(v);
        else if (k == "beam.v") cfg.beam.v = std::stod(v);
        else if (k == "beam.mv") cfg.beam.mv = std::stod(v);
        else if (k == "beam.energy_keV") cfg.beam.energy_keV = std::stod(v);
        else if (k == "flux") cfg.flux = std::stod(v);
        else if (k == "params.eps_scale") cfg.scales.eps = std::stod(v);
        else if (k == "params.delta_scale") cfg.scales.delta = std::stod(v);
        else if (k == "sigma_sets.log_base") cfg.sigma_log_base = std::stod(v);
        else throw std::invalid_argument("unknown config key '" + k + "'");
    }
}

}  // namespace abcert
