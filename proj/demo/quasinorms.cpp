// Rearrange a simple function and measure it in a few Lorentz–Zygmund spaces.

#include <cstdio>

#include "rlab/rlab.hpp"

int main() {
  using namespace rlab;
  const SimpleFunction f({{1.0, 0.3}, {4.0, 0.05}, {2.0, 0.1}}, 1.0);
  const auto star = rearrangement(f);
  std::printf("f*:");
  for (std::size_t i = 0; i < star.size(); ++i) std::printf(" %g on [.., %g)", star.values()[i], star.breakpoints()[i]);
  std::printf("\n");

  const double cases[][3] = {{2, 2, 0}, {1, 2, 0.5}, {kInf, 2, -1}, {kInf, kInf, -0.5}};
  for (const auto& c : cases) {
    const auto n = lz_quasinorm(star, c[0], c[1], c[2]);
    std::printf("L^{%s,%s,%g}: %.12g (%s)\n", format_double(c[0]).c_str(), format_double(c[1]).c_str(), c[2], n.value,
                std::string(method_name(n.method)).c_str());
  }
}
