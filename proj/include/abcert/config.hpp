#pragma once

#include <map>
#include <numbers>
#include <string>

namespace abcert {

struct Magnet {
    std::string id;
    double r1_tilde;  // cm
    double r2_tilde;  // cm
    double h_tilde;   // cm, half height
};

struct Beam {
    std::string id;
    double energy_keV;
    double v;   // cm/s
    double mv;  // cm^-1, m = M / hbar
};

struct BuiltinMagnets {
    Magnet k1, k2;
};
struct BuiltinBeams {
    Beam e1, e2, e3;
};

BuiltinMagnets builtin_magnets();
BuiltinBeams builtin_beams();
Magnet magnet_by_id(const std::string& id);  // "k1" or "k2"
Beam beam_by_id(const std::string& id);      // "e1", "e2" or "e3"

// Scales applied to the cutoff parameters; 1 reproduces the published choice.
struct ParamScales {
    double eps = 1.0;
    double delta = 1.0;
};

class DerivedGeometry {
public:
    Magnet magnet;
    Beam beam;
    double flux = std::numbers::pi;
    ParamScales scales;

    double eps_tilde = 0, delta_tilde = 0, eps = 0;
    double r1 = 0, r2 = 0;
    double sigma0 = 0;

    double mv() const { return beam.mv; }
    double delta(double sigma) const;
    double h(double sigma) const { return magnet.h_tilde + delta(sigma); }
    double S1(double sigma) const;
    double sigma_min() const { return 4.5 / beam.mv; }
    double sigma_max() const { return magnet.r1_tilde / 2.0; }
};

DerivedGeometry derive(const Magnet& magnet, const Beam& beam, double flux = std::numbers::pi,
                       ParamScales scales = {});

// Configuration assembled from CLI flags and an optional key=value file.
struct Config {
    Magnet magnet = builtin_magnets().k2;
    Beam beam = builtin_beams().e1;
    double flux = std::numbers::pi;
    ParamScales scales;
    double sigma_log_base = 2.302585092994046;  // ln 10 used by the sigma sets

    DerivedGeometry geometry() const { return derive(magnet, beam, flux, scales); }
};

// Applies key=value overrides; unknown keys raise std::invalid_argument.
void apply_overrides(Config& cfg, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_kv_file(const std::string& path);

}  // namespace abcert
