// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../tools/cli.hpp"
#include "support.hpp"

using namespace rlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::vector<double> dyadic_kappas(int count) {
  std::vector<double> k;
  for (int j = 1; j <= count; ++j) k.push_back(std::pow(2.0, -j));
  return k;
}

double target_alpha(int n, double q) { return -1.0 + 1.0 / n - (is_infinite_parameter(q) ? 0.0 : 1.0 / q); }

struct Case {
  std::string name;
  RadialProfile v;
  BallGeometry geom;
};

std::vector<Case> invariance_cases() {
  std::vector<Case> out;
  for (int n : {2, 3, 4}) {
    const BallGeometry geom(n, 1.0);
    out.push_back({"tent", tent_profile(geom, 0.5, 1.0, true), geom});
    out.push_back({"moser", moser_profile(geom, 0.5, 8, 16, true), geom});
  }
  return out;
}

Outcome gradient_invariance() {
  double worst = 0.0;
  int count = 0;
  for (const auto& c : invariance_cases()) {
    for (const auto& row : invariance_report(c.v, c.geom, c.geom.n, {0.5, 0.1, 0.01})) {
      worst = std::max(worst, row.grad_rel_err);
      ++count;
    }
  }
  return {worst <= 1e-6, std::to_string(count) + " cases, max rel err " + sci(worst)};
}

Outcome quasinorm_invariance() {
  double worst = 0.0, worst_sup = 0.0;
  int count = 0;
  for (const auto& c : invariance_cases()) {
    const int n = c.geom.n;
    for (double q : {double(n), n + 1.0, 2.0 * n, kInf}) {
      for (const auto& row : invariance_report(c.v, c.geom, q, {0.5, 0.1, 0.01})) {
        worst = std::max(worst, row.qnorm_rel_err);
        if (is_infinite_parameter(q)) worst_sup = std::max(worst_sup, row.qnorm_rel_err);
        ++count;
      }
    }
  }
  return {worst <= 1e-6, std::to_string(count) + " cases, max rel err " + sci(worst) + " (sup case " + sci(worst_sup) + ")"};
}

Outcome support_law() {
  double worst = 0.0;
  bool decreasing = true;
  double last_log_ratio = -kInf;
  for (const auto& c : invariance_cases()) {
    const auto rows = invariance_report(c.v, c.geom, c.geom.n, dyadic_kappas(12));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double law = std::log(c.geom.omega_n()) + c.geom.n * rows[i].log_R_kappa;
      worst = std::max(worst, std::abs(std::expm1(rows[i].log_support_mass - law)));
      if (i > 0 && !(rows[i].log_R_kappa < rows[i - 1].log_R_kappa)) decreasing = false;
    }
    last_log_ratio = std::max(last_log_ratio, rows.back().log_R_kappa - std::log(c.geom.R));
  }
  const bool to_zero = last_log_ratio < std::log(1e-100);
  return {worst <= 1e-10 && decreasing && to_zero,
          "max rel err " + sci(worst) + ", strictly decreasing " + (decreasing ? "yes" : "no") +
              ", log10(R/R_0) at kappa=2^-12 below " + sci(last_log_ratio / std::log(10.0))};
}

Outcome theta_closed_forms() {
  CounterRng rng(4, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const bool inf_p = i % 5 == 4;
    const double q = rng.uniform(0.5, 6.0);
    const double p = inf_p ? kInf : rng.uniform(0.5, 6.0);
    const double a = inf_p ? -1 / q - rng.uniform(0.05, 2.0) : rng.uniform(-2.0, 2.0);
    const double lam = rng.uniform(0.02, 0.98);
    const PowerLog w{p, q, a, 1.0};
    const double expected = std::pow(lam, -q / p) *
                            (a < 0 ? std::pow(std::log(2.0), a * q) / std::pow(std::log(2 / lam), a * q) : 1.0);
    worst = std::max(worst, relative_error(theta_numeric(w, lam), expected));
  }
  double near_one = 0.0;
  for (const PowerLog& w : {PowerLog{kInf, 2, -1, 1}, PowerLog{2, 3, -0.5, 1}, PowerLog{kInf, 3, -2.0 / 3 - 1.0 / 3, 1}}) {
    const double th = theta_numeric(w, 1 - 1e-6);
    near_one = std::max(near_one, std::abs(th - 1.0));
  }
  return {worst <= 1e-6 && near_one <= 1e-3,
          "50 draws, max rel err " + sci(worst) + "; |Theta(1-1e-6) - 1| <= " + sci(near_one)};
}

Outcome separation_validity() {
  const double r = 1.0, R = 2.0;
  struct P {
    double p, q, a;
  };
  std::vector<P> params;
  for (double q : {2.0, 3.0, 4.0, 8.0}) params.push_back({kInf, q, 0.5 - 1 / q - 1});
  params.push_back({2, 2, 0});
  params.push_back({3, 4, 0.5});
  params.push_back({4, 2, -1});
  CounterRng rng(5, 0);
  double margin = kInf;
  int pairs = 0;
  for (const auto& pr : params) {
    const LambdaParams lp(pr.q, PowerLog{pr.p, pr.q, pr.a, 1.0});
    const double eps = separation_certificate(lp, r, R).epsilon;
    auto norm = [&](const SimpleFunction& f) { return lambda_quasinorm(rearrangement(f), lp).value; };
    for (auto layout : {testkit::Layout::disjoint, testkit::Layout::nested}) {
      for (int i = 0; i < 100; ++i) {
        const auto raw = testkit::random_overlay(rng, layout, 1.0);
        const double nf = norm(raw.first()), ng = norm(raw.second());
        if (!(nf > 0 && ng > 0)) continue;
        const double want_f = r * rng.uniform(0.05, 1.0), want_g = R * (1 + rng.uniform(0.0, 0.5));
        const auto o = testkit::scale_overlay(raw, want_f / nf, want_g / ng);
        if (!(norm(o.first()) <= r && norm(o.second()) >= R)) continue;
        margin = std::min(margin, norm(o.sum()) - eps);
        ++pairs;
      }
    }
  }
  return {margin >= -1e-8 && pairs >= 1000,
          std::to_string(params.size()) + " weights, " + std::to_string(pairs) + " pairs, min ||f+g|| - eps = " + sci(margin)};
}

Outcome counterexample() {
  bool exact = true;
  for (double d : {0.3, 0.25, 1e-3, 0.4999}) {
    exact = exact && plane_counterexample_qnorm(1, 0) == 2.0 && plane_counterexample_qnorm(-1, d) == 1.0 + d &&
            plane_counterexample_qnorm(0, d) == d;
  }
  const auto qn = builtin_quasinorm("plane");
  bool defeated = true;
  long worst_trial = 0;
  for (double eps : {0.01, 0.05, 0.1, 0.5, 1.0, 10.0}) {
    const auto hit = falsify_uniform_separation(qn, 1.5, 2.0, eps, 1000, 7);
    defeated = defeated && hit.has_value();
    if (hit) worst_trial = std::max(worst_trial, hit->trial + 1);
  }
  return {exact && defeated, std::string("exact values ") + (exact ? "ok" : "MISMATCH") + ", every eps in [0.01, 10] defeated within " +
                                 std::to_string(worst_trial) + " trials"};
}

Outcome rearrangement_oracle() {
  CounterRng rng(7, 0);
  long mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const auto f = testkit::random_simple(rng, 8, 1.0);
    const auto s = rearrangement(f);
    std::vector<double> ts;
    double acc = 0.0;
    for (const auto& p : s.pieces()) {
      ts.push_back(acc + 0.5 * p.mass);
      acc += p.mass;
      ts.push_back(acc);
    }
    for (int k = 0; k < 20; ++k) ts.push_back(rng.uniform());
    for (double t : ts)
      if (s(t) != rearrangement_point_oracle(f, t)) ++mismatches;
  }
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double q = rng.uniform(0.5, 5.0);
    const double p = i % 4 == 0 ? kInf : rng.uniform(0.5, 5.0);
    const double a = is_infinite_parameter(p) ? -1 / q - rng.uniform(0.05, 2.0) : rng.uniform(-2.0, 2.0);
    const LambdaParams lp(q, PowerLog{p, q, a, 1.0});
    const auto f = testkit::random_simple(rng, 8, 1.0);
    worst = std::max(worst, relative_error(lambda_quasinorm_distributional(f, lp).value, lambda_quasinorm(rearrangement(f), lp).value));
  }
  return {mismatches == 0 && worst <= 1e-8,
          "500 functions, " + std::to_string(mismatches) + " pointwise mismatches; 200 quasinorm pairs, max rel diff " + sci(worst)};
}

Outcome subadditivity() {
  CounterRng rng(8, 0);
  int passed = 0;
  for (int i = 0; i < 200; ++i) {
    const auto o = testkit::random_overlay(rng, i % 2 ? testkit::Layout::nested : testkit::Layout::disjoint, 1.0);
    if (subadditivity_check(o, rng.log_uniform(1e-4, 0.5), rng.log_uniform(1e-4, 0.5))) ++passed;
  }
  return {passed == 200, std::to_string(passed) + "/200 instances"};
}

Outcome superadditivity() {
  int agree = 0, disagree = 0, inconclusive = 0;
  auto check = [&](double p, double q, double a, double g) {
    const auto lz = superadd_classify_lz(p, q, a, g);
    const auto lam = superadd_classify_lambda(PowerLog{p, q, a, 1.0}, q, g);
    if (lam.superadditive == Verdict::inconclusive) ++inconclusive;
    else if (lam.superadditive == lz.superadditive) ++agree;
    else ++disagree;
  };
  for (double p : {1.0, 2.0, 4.0})
    for (double q : {1.0, 2.0, 4.0})
      for (double a : {-1.0, 0.0})
        for (double g : {1.0, 2.0, 4.0}) check(p, q, a, g);
  for (double q : {2.0, 4.0})
    for (double g : {2.0, 4.0, 8.0}) check(kInf, q, -1, g);
  const int sweep = agree + disagree + inconclusive;

  const LambdaParams l1(1, PowerLog{1, 1, 0, 1});
  const double l1_const = empirical_superadd_constant(l1, 1, {}, 0).constant;

  bool bw = true;
  long worst_k = 0;
  for (int n : {2, 3}) {
    const double q = n, a = 1.0 / n - 1 / q - 1;
    const LambdaParams lp(q, PowerLog{kInf, q, a, 1.0});
    for (double g : {q, 2 * q}) {
      long hit = 0;
      for (long k = 2; k <= (1L << 20) && !hit; k *= 2)
        if (superadd_ratio(equal_split_family(0.5, k, 1.0), lp, g) > 10) hit = k;
      bw = bw && hit > 0 && superadd_classify_lambda(lp.weight, q, g).superadditive == Verdict::no;
      worst_k = std::max(worst_k, hit);
    }
  }
  return {sweep == 60 && disagree == 0 && l1_const == 1.0 && bw,
          std::to_string(agree) + "/" + std::to_string(sweep) + " agree (" + std::to_string(inconclusive) +
              " inconclusive); L1 constant " + format_double(l1_const) + "; log-target ratio > 10 by k = " +
              std::to_string(worst_k)};
}

Outcome noncompactness() {
  bool ok = true;
  std::string detail;
  for (int n : {2, 3}) {
    const BallGeometry geom(n, 1.0);
    const auto v = moser_profile(geom, 0.5, 8, 16, true);
    for (double q : {double(n), kInf}) {
      const double norm = lz_quasinorm(v.profile(), kInf, q, target_alpha(n, q)).value;
      const auto c = noncompactness_certificate(v, geom, q, dyadic_kappas(12), 0.99 * norm);
      bool failed_right = false;
      try {
        noncompactness_certificate(v, geom, q, dyadic_kappas(12), 1.01 * norm);
      } catch (const QuasinormBelowLambda& e) {
        failed_right = e.kappa() == 0.5;
      }
      ok = ok && c.conditions_met && failed_right;
    }
  }
  detail = ok ? "n in {2,3}, q in {n, inf}: certified at 0.99, QuasinormBelowLambda at 1.01" : "certificate mismatch";
  return {ok, detail};
}

// ---- determinism: the CLI suite twice, byte for byte

void write(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> run_suite(const fs::path& dir) {
  write(dir / "char.json", R"({"pieces": [[1, 0.25]], "total_mass": 1})");
  write(dir / "simple.json", R"({"pieces": [[3, 0.1], [2, 0.2], [1, 0.3], [3, 0.05]], "total_mass": 1})");
  write(dir / "lz.json", R"({"kind": "powerlog", "p": "INF", "q": 2, "alpha": -1, "M": 1})");
  write(dir / "lorentz.json", R"({"kind": "powerlog", "p": 2, "q": 2, "alpha": 0, "M": 1})");
  write(dir / "moser.json", R"({"kind": "moser", "n": 2, "R": 1, "support_fraction": 0.5, "L": 8, "nodes": 16, "normalize": true})");
  const std::string d = dir.string() + "/";
  const std::vector<std::vector<std::string>> suite{
      {"--out", d + "qnorm.json", "qnorm", "--profile", d + "char.json", "--weight", d + "lz.json"},
      {"--out", d + "rearrange.json", "rearrange", "--input", d + "simple.json"},
      {"--out", d + "theta.svg", "--format", "svg", "theta", "--weight", d + "lz.json", "--lambda", "0.1:0.9:0.1"},
      {"--out", d + "sep.json", "separation-cert", "--weight", d + "lorentz.json", "--r", "1", "--R", "2"},
      {"--out", d + "falsify.json", "--seed", "7", "falsify", "--r", "1.5", "--R", "2", "--eps", "0.01"},
      {"--out", d + "superadd.json", "--seed", "3", "superadd", "--p", "2", "--q", "2", "--gamma", "2", "--mode",
       "empirical", "--kmax", "1024", "--csv", d + "growth.csv"},
      {"--out", d + "verify.csv", "--jobs", "4", "verify-identities", "--profile", d + "moser.json", "--q", "INF",
       "--kappas", "geometric:0.5,8"},
      {"--out", d + "certify.json", "--jobs", "3", "certify", "--profile", d + "moser.json", "--q", "2",
       "--lambda-rel", "0.99", "--kappas", "geometric:0.5,12"},
      {"--out", d + "sweep.csv", "--jobs", "4", "sweep", "--op", "theta", "--param", "p=1,2,INF", "--param", "q=2",
       "--param", "alpha=-1", "--param", "lambda=0.1:0.9:0.1"},
  };
  std::vector<std::string> artifacts;
  for (const auto& args : suite) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    artifacts.push_back(std::to_string(code) + "\n" + out.str());
  }
  for (const char* name : {"qnorm.json", "rearrange.json", "theta.svg", "sep.json", "falsify.json", "superadd.json",
                           "growth.csv", "verify.csv", "certify.json", "sweep.csv"})
    artifacts.push_back(slurp(dir / name));
  return artifacts;
}

fs::path make_temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "rlab-accept-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  return tmpl;
}

Outcome determinism() {
  const auto a = make_temp_dir(), b = make_temp_dir();
  const auto ra = run_suite(a), rb = run_suite(b);
  bool nonzero = false;
  for (std::size_t i = 0; i < 9; ++i) nonzero = nonzero || ra[i].rfind("0\n", 0) != 0;
  bool empty = false;
  for (std::size_t i = 9; i < ra.size(); ++i) empty = empty || ra[i].empty();
  std::size_t diffs = 0, bytes = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i] != rb[i]) ++diffs;
    bytes += ra[i].size();
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return {diffs == 0 && !nonzero && !empty,
          std::to_string(ra.size()) + " artifacts, " + std::to_string(bytes) + " bytes, " + std::to_string(diffs) +
              " differ" + (nonzero ? ", a command failed" : "") + (empty ? ", an artifact is empty" : "")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient norm invariance under dilation", gradient_invariance},
      {"target quasinorm invariance under dilation", quasinorm_invariance},
      {"support law of dilated profiles", support_law},
      {"dilation index closed forms", theta_closed_forms},
      {"separation certificate validity", separation_validity},
      {"plane counterexample", counterexample},
      {"rearrangement oracle equivalence", rearrangement_oracle},
      {"rearrangement subadditivity", subadditivity},
      {"superadditivity classification", superadditivity},
      {"noncompactness certificate", noncompactness},
      {"determinism of CLI artifacts", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %-44s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
