#pragma once

#include "abcert/bounds.hpp"
#include "abcert/config.hpp"
#include "abcert/xreal.hpp"

#include <string>
#include <vector>

namespace abcert {

struct range_error : std::range_error {
    using std::range_error::range_error;
};

enum class Branch { Big, Small };
Branch parse_branch(const std::string& s);

// Intermediate plateau of the final bound: [23/mv, r1/22]
struct Plateau {
    double lo, hi;
};
Plateau plateau(const DerivedGeometry& g);

struct Threshold {
    double sigma = 0;        // solution on the branch, unset on the plateau
    bool on_plateau = false;
    Plateau edges{};
};

// Solves final_bound(sigma) = target on a monotone branch by bisection.
// Big branch: [r1/22, r1_tilde/2], increasing. Small branch: [4.5/mv, 23/mv], decreasing.
Threshold threshold_sigma(const XReal& target, Branch branch, const DerivedGeometry& g,
                          double rel_tol = 1e-9);

enum class TableKind { BigSigma, SmallSigma, Radius, Angle };
TableKind parse_table_kind(const std::string& s);
std::string table_kind_name(TableKind k);

struct TableRow {
    XReal target;
    double sigma = 0;
    double value = 0;  // sigma/r1, R/r1 or the opening angle in degrees
    bool defined = true;
};

// targets 10^-1 ... 10^-10
std::vector<XReal> table_targets();
std::vector<TableRow> emit_table(TableKind kind, const DerivedGeometry& g);
std::string table_csv(TableKind kind, const std::vector<TableRow>& rows);

enum class Scale { Log, Linear };
Scale parse_scale(const std::string& s);
std::vector<double> sigma_grid(double from, double to, int points, Scale scale);
std::vector<BoundReport> sweep(double from, double to, int points, Scale scale, Regime regime,
                               const DerivedGeometry& g);
std::string sweep_bounds_csv(const std::vector<BoundReport>& rows);

struct ParamRow {
    double eps_scale = 0, delta_scale = 0;
    bool accepted = false;
    std::string reason;  // rejection reason
    XReal max_bound;
    double argmax_sigma = 0;
};

// Max over the probe set of the outgoing bound, whose calibrated vectors
// follow the rescaled cutoff parameters.
std::vector<ParamRow> param_sweep(const std::vector<double>& eps_scales,
                                  const std::vector<double>& delta_scales,
                                  const std::vector<double>& probes, const Config& base);
std::vector<double> default_probes(const DerivedGeometry& g, int points = 12);
std::string param_csv(const std::vector<ParamRow>& rows);

}  // namespace abcert
