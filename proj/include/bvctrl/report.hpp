// report.hpp — side-by-side record of a measured quantity and its predicted upper bound
#pragma once

#include <map>
#include <string>

namespace bvctrl {

// A bound verification outcome. `inputs` carries the numbers that went into
// the bound formula (a, delta, TV, L1, N, ...) so a report is reproducible on
// its own. `estimated_constants` is true whenever any constant entering the
// bound was a finite-prefix estimate rather than an analytic value; consumers
// must treat violations of estimated bounds as warnings, not errors.
struct BoundReport {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    std::map<std::string, double> inputs;
    bool estimated_constants = false;
    double tolerance = 0.0;
    bool satisfied = false;

    BoundReport& finalize() {
        satisfied = measured <= bound + tolerance;
        return *this;
    }
};

} // namespace bvctrl
