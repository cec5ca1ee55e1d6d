// Dilate a normalized Moser-type profile and watch the support collapse while
// both norms stay put.

#include <cstdio>

#include "rlab/rlab.hpp"

int main() {
  using namespace rlab;
  const BallGeometry geom(2, 1.0);
  const auto v = moser_profile(geom, 0.5, 8, 16, true);
  std::printf("%-10s %-14s %-12s %-12s\n", "kappa", "log10 R_k", "grad err", "qnorm err");
  for (const auto& row : invariance_report(v, geom, kInf, {0.5, 0.25, 0.1, 0.01, 0.001}))
    std::printf("%-10g %-14.6g %-12.3g %-12.3g\n", row.kappa, row.log_R_kappa / std::log(10.0), row.grad_rel_err,
                row.qnorm_rel_err);
}
