#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hessval {

struct CheckResult {
    int criterion = 0;  // acceptance criterion this check belongs to (1-9)
    std::string name;
    bool pass = false;
    double worst = 0.0;    // worst observed residual / deviation
    double bound = 0.0;    // the tolerance it was held against
    double seconds = 0.0;  // wall time
    std::string detail;
};

enum class Suite { Fast, Full };

// The acceptance battery: every check pins its tolerance in code.  The
// Fast suite trims Monte-Carlo sample counts and case counts; the Full
// suite runs the documented parameters (1e6 samples, seed 42 by default).
std::vector<CheckResult> run_selfcheck(Suite suite, std::uint64_t seed = 42);

}  // namespace hessval
