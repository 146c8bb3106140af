// Parses a small lacunary system, shows its decomposition and solves it.

#include "sparsedecomp/sparsedecomp.hpp"

#include <iostream>

namespace sd = sparsedecomp;

int main() {
  const auto F = sd::parse_system(R"(
    vars: x, y
    1 - 2*x*y^2 + 3*x^2*y - 4*x^3*y^3
    2 + 3*y^3 + 5*x*y^2 + 7*x^4*y^2
  )");

  const auto supports = sd::exponents(F);
  const auto lac = sd::is_lacunary(supports);
  std::cout << "lacunary: " << (lac.lacunary ? "yes" : "no") << ", index " << lac.index << "\n";
  std::cout << "mixed volume: " << sd::mixed_volume(supports) << "\n";

  sd::SolveOptions opts;
  opts.verify = true;
  const auto report = sd::solve_decomposable_system(F, opts);
  std::cout << report.solutions.size() << " solutions in the torus\n";
  for (const auto& s : report.solutions)
    std::cout << "  (" << s.point[0] << ", " << s.point[1] << ")  residual " << s.residual << "\n";
}
