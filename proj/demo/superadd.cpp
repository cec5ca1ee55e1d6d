// Equal splits against the log-weighted target: the superadditivity ratio keeps growing.

#include <cstdio>

#include "rlab/rlab.hpp"

int main() {
  using namespace rlab;
  const LambdaParams target(2, PowerLog{kInf, 2, -1, 1});
  const LambdaParams lorentz(2, PowerLog{1.5, 2, 0, 1});
  std::printf("%-8s %-14s %-14s\n", "k", "L^{inf,2,-1}", "L^{1.5,2}");
  for (long k = 2; k <= (1L << 20); k *= 8) {
    const auto fam = equal_split_family(0.5, k, 1.0);
    std::printf("%-8ld %-14.6g %-14.6g\n", k, superadd_ratio(fam, target, 2), superadd_ratio(fam, lorentz, 2));
  }
  for (const auto* name : {"lz", "lambda"}) {
    const auto v = std::string(name) == "lz" ? superadd_classify_lz(kInf, 2, -1, 2)
                                             : superadd_classify_lambda(target.weight, 2, 2);
    std::printf("%s verdict: %s (%s)\n", name, verdict_name(v.superadditive).c_str(), v.reason.c_str());
  }
}
