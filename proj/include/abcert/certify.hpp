#pragma once

#include "abcert/bounds.hpp"
#include "abcert/config.hpp"
#include "abcert/xreal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abcert {

// order of magnitude: 10^O <= a < 10^{O+1}
int order_of(double a);

struct Partition {
    double a = 0, b = 0, N0 = 0;
    std::vector<double> points;
};

Partition partition(double a, double b, double N0);

struct SigmaSet {
    int index;    // 1..11
    double mu3;   // companion variance used by the integral estimates
    Partition part;
};

std::vector<SigmaSet> sigma_sets(const DerivedGeometry& g, double log_base = 2.302585092994046);

// --- grid majorants ------------------------------------------------------

enum class GridKind { B3, B4, B5, B6 };
GridKind parse_grid_kind(const std::string& s);

struct GridBound {
    double sigma = 0, mv = 0, zeta = 0, s = 0, Z = 0, delta0 = 0;
    double theta_s = 0;  // -theta_inv(sigma, s, s, zeta)
    double theta_Z = 0;  // -theta_inv(sigma, Z, Z, zeta)
    std::vector<double> nodes;      // Z_1 < ... < Z_K
    std::vector<double> abscissae;  // z_{Z_j^{-1}, sigma}(zeta)
    XReal value;
};

GridBound grid_nodes(double sigma, double mv, double zeta, double s, double Z, double delta0);

// r1 enters the weights of b.4 - b.6 only
XReal grid_upper_bound(GridKind kind, const GridBound& skel, double r1);
XReal grid_upper_bound(GridKind kind, double sigma, double mv, double zeta, double s, double Z,
                       double delta0, double r1);

// --- integral terms and the sweep -----------------------------------------

struct Hypotheses {
    bool sigma0_order = false;  // all mu_i on one side of sigma0
    bool mu3_order = false;     // mu1, mu2 on one side of mu3
    bool z_threshold = false;   // Z >= z_{sqrt(2/3), nu, mu3}(h(mu_max))
    bool rho_zs = false;        // r1 rho(mu_i, z_{sqrt2, nu, mu3}) >= 1, i = 1, 2
    bool rho_Z = false;         // r1 rho(mu_i, Z) >= 1, i = 1, 2, 3
    bool all() const { return sigma0_order && mu3_order && z_threshold && rho_zs && rho_Z; }
    std::string flags() const;
};

struct PairGeometry {
    double mu1, mu2, mu3, mu_min, mu_max, nu;
    double h_max, Z, zs, zt, r_nu_mu3, r_12;
    Hypotheses hyp;
};

PairGeometry pair_geometry(double mu1, double mu2, double mu3, const DerivedGeometry& g);

struct IntegralValues {
    XReal I_pp, I_ps, I_sp, I_ss;
    PairGeometry geom;
};

IntegralValues integral_terms(double mu1, double mu2, double mu3, double zeta,
                              const DerivedGeometry& g, double delta0);

struct PairResult {
    int set = 0;
    double mu1 = 0, mu2 = 0, mu3 = 0, delta0 = 0;
    Hypotheses hyp;
    XReal lhs_interacting, rhs_interacting, lhs_outgoing, rhs_outgoing;
    XReal margin;  // min over the two inequalities of rhs / lhs
    bool pass = false;
    std::string error;
    // set when a failed pair was re-checked on a finer grid
    std::optional<double> refined_delta0;
    XReal refined_margin;
    bool refined_pass = false;
};

PairResult check_pair(int set, double mu1, double mu2, double mu3, const DerivedGeometry& g,
                      std::optional<double> delta0 = std::nullopt);

struct SweepOptions {
    std::vector<int> sets;  // empty means all eleven
    std::optional<double> delta0;
    unsigned jobs = 0;  // 0 means hardware concurrency
    // re-check failures with delta0 divided by this factor (0 disables)
    double refine_factor = 0;
};

struct SweepReport {
    std::vector<PairResult> rows;
    bool refined = false;
    size_t failures() const;
    // failures that persist after the refinement re-check
    size_t residual_failures() const;
};

SweepReport lemma64_sweep(const DerivedGeometry& g, const SweepOptions& opt = {},
                          double log_base = 2.302585092994046);

std::string sweep_csv(const SweepReport& rep);

}  // namespace abcert
