// Acceptance suite: runs every criterion of the battery at full parameters
// and prints one line per check.

#include "hessval/selfcheck.hpp"

#include <chrono>
#include <cstdio>

int main() {
    using namespace hessval;
    auto t0 = std::chrono::steady_clock::now();
    auto results = run_selfcheck(Suite::Full, 42);
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = true;
    for (const auto& r : results) {
        std::printf("criterion %d  %-28s %-4s  worst %.3e  bound %.3e  (%.2fs)\n", r.criterion,
                    r.name.c_str(), r.pass ? "PASS" : "FAIL", r.worst, r.bound, r.seconds);
        ok &= r.pass;
        if (r.criterion == 1 && r.seconds > 5.0) {
            std::printf("criterion 1 runtime bound exceeded: %.2fs > 5s\n", r.seconds);
            ok = false;
        }
        if (r.criterion == 2 && r.seconds > 60.0) {
            std::printf("criterion 2 runtime bound exceeded: %.2fs > 60s\n", r.seconds);
            ok = false;
        }
    }
    std::printf("total %.1fs (bound 600s)\n", total);
    if (total > 600.0) ok = false;
    return ok ? 0 : 1;
}
