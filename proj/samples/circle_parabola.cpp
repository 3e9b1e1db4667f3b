// Intersects the unit circle with the parabola y = x^2 - 1/2 and prints the
// isolated root boxes.

#include <iostream>

#include "hsroot/isolate.hpp"
#include "hsroot/parser.hpp"

int main() {
    const auto system = hsroot::parse_system(R"(
vars: x y
init: x in [-2,2]; y in [-2,2]
eq: x^2 + y^2 - 1
eq: y - x^2 + 0.5
)",
                                             "circle_parabola");

    hsroot::SolverConfig cfg;
    cfg.target_width = 1e-6;
    cfg.max_rounds = 40;
    const auto result = hsroot::isolate(system, cfg);

    std::cout << to_string(result.search.status) << ", " << result.roots.size() << " roots\n";
    for (const auto& r : result.roots)
        std::cout << "  " << to_string(r.box) << (r.certified ? "  certified" : "") << "\n";
}
