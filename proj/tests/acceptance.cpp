// Release gate: runs the ten checks at full size and prints one line each.
#include <cstdio>

#include "seglab/verify.hpp"

int main() {
    auto results = seglab::run_verification("full");
    int passed = 0;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-24s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.details.c_str(), r.seconds);
        passed += r.pass ? 1 : 0;
    }
    std::printf("%d/%zu criteria passed\n", passed, results.size());
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
