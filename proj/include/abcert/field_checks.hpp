#pragma once

#include "abcert/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace abcert {

struct CheckSample {
    double x1, x2, x3;
    std::string quantity;
    double value, bound;
};

struct CheckReport {
    std::string name;
    size_t samples = 0;
    double worst_ratio = 0;  // largest value/bound seen, pass iff <= 1
    std::vector<CheckSample> violations;
    bool pass() const { return violations.empty(); }
};

// flux through the hole and the gauge function, both to 1e-9 relative
CheckReport check_flux(const DerivedGeometry& g);
// central differences of B inside the magnet: |div B| <= 1e-4 ||B|| / min(eps~, delta~)
CheckReport check_divergence(const DerivedGeometry& g, size_t n = 1000, uint64_t seed = 1);
// finite-difference curl A against B, 1e-3 relative
CheckReport check_gauge(const DerivedGeometry& g, size_t n = 1000, uint64_t seed = 2);
// sampled sup norms of B, A, their derivatives and the cutoff against the closed forms
CheckReport check_supnorms(const DerivedGeometry& g, size_t n = 100000, uint64_t seed = 3);

CheckReport run_field_check(const std::string& which, const DerivedGeometry& g);
std::string check_csv(const CheckReport& rep);

}  // namespace abcert
