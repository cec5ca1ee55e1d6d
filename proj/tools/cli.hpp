#pragma once

// rearrange-lab: every library operation behind one subcommand-style CLI.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlab/io.hpp"
#include "rlab/rlab.hpp"

namespace rlab::cli {

using io::Json;

struct Globals {
  std::string out;
  std::uint64_t seed = 0;
  double rel_tol = QuadratureConfig{}.rel_tol;
  double abs_tol = QuadratureConfig{}.abs_tol;
  unsigned jobs = 0;
  std::string format;  // empty: the subcommand's natural format

  QuadratureConfig quadrature() const {
    QuadratureConfig c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.validate();
    return c;
  }
};

inline unsigned resolve_jobs(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("REARRANGE_LAB_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes an artifact to --out, or to `out` when no path was given.
inline void emit(const Globals& g, const std::string& content, std::ostream& out) {
  if (g.out.empty()) {
    out << content;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + g.out + "'");
  f << content;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << content;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(io::parse_real(item));
      continue;
    }
    // start:stop:step, inclusive
    std::stringstream rs(item);
    std::string a, b, c;
    std::getline(rs, a, ':');
    std::getline(rs, b, ':');
    std::getline(rs, c, ':');
    const double lo = io::parse_real(a), hi = io::parse_real(b), step = io::parse_real(c);
    require(step > 0 && hi >= lo, "range needs start ≤ stop and a positive step");
    const long count = std::lround((hi - lo) / step);
    for (long i = 0; i <= count; ++i) out.push_back(lo + step * static_cast<double>(i));
  }
  return out;
}

/// "0.5,0.1,0.01" or "geometric:r,count" for κ_j = r^j, j = 1..count.
inline std::vector<double> parse_kappas(const std::string& s) {
  const std::string prefix = "geometric:";
  if (s.rfind(prefix, 0) == 0) {
    const auto rest = s.substr(prefix.size());
    const auto comma = rest.find(',');
    require(comma != std::string::npos, "geometric κ list needs 'geometric:ratio,count'");
    const double r = io::parse_real(rest.substr(0, comma));
    const long count = std::lround(io::parse_real(rest.substr(comma + 1)));
    require(r > 0 && r < 1 && count >= 1, "geometric κ list needs 0 < ratio < 1 and count ≥ 1");
    std::vector<double> out;
    for (long j = 1; j <= count; ++j) out.push_back(std::pow(r, static_cast<double>(j)));
    return out;
  }
  return parse_list(s);
}

inline Json verdict_json(const SuperaddVerdict& v) {
  Json j{{"superadditive", verdict_name(v.superadditive)}, {"gamma", v.gamma}, {"reason", v.reason}};
  if (v.K) j["K"] = io::number(*v.K);
  if (v.equivalence_constants) {
    j["K1"] = io::number(v.equivalence_constants->first);
    j["K2"] = io::number(v.equivalence_constants->second);
  }
  return j;
}

/// Geometry from --n/--R, falling back to "n"/"R" in the profile file.
inline BallGeometry geometry_for(const Json& profile, int n_flag, const std::string& R_flag) {
  const int n = n_flag > 0 ? n_flag : profile.value("n", 2);
  const double R = !R_flag.empty() ? io::parse_real(R_flag) : io::real_or(profile, "R", 1.0);
  return {n, R};
}

inline bool is_radial(const Json& j) {
  const std::string kind = j.value("kind", "");
  return kind == "linear" || kind == "tent" || kind == "moser";
}

// ---------------------------------------------------------------- sweep

struct SweepOp {
  std::vector<std::string> params;
  std::vector<std::string> results;
};

inline const std::map<std::string, SweepOp>& sweep_ops() {
  static const std::map<std::string, SweepOp> ops{
      {"theta", {{"p", "q", "alpha", "lambda"}, {"theta"}}},
      {"lz-qnorm-char", {{"p", "q", "alpha", "s"}, {"value"}}},
      {"quasi-kothe", {{"p", "q", "alpha"}, {"table", "report", "inconclusive"}}},
      {"superadd-lz", {{"p", "q", "alpha", "gamma"}, {"lz", "lambda"}}},
      {"superadd-ratio", {{"p", "q", "alpha", "gamma", "k"}, {"ratio"}}},
      {"support-radius", {{"kappa", "R_tilde", "R", "n"}, {"R_kappa", "log_R_kappa"}}},
  };
  return ops;
}

inline std::vector<std::string> sweep_point(const std::string& op, const std::map<std::string, double>& x,
                                            const QuadratureConfig& cfg) {
  auto at = [&](const char* k) { return x.at(k); };
  if (op == "theta") return {format_double(theta(PowerLog{at("p"), at("q"), at("alpha"), 1.0}, at("lambda")))};
  if (op == "lz-qnorm-char")
    return {format_double(lz_quasinorm(StepProfile::characteristic(at("s"), 1.0), at("p"), at("q"), at("alpha"), cfg).value)};
  if (op == "quasi-kothe") {
    const bool table = lz_quasi_kothe_classify(at("p"), at("q"), at("alpha"));
    const auto rep = weight_admissibility_report(LambdaParams(at("q"), PowerLog{at("p"), at("q"), at("alpha"), 1.0}), cfg);
    return {table ? "true" : "false", rep.quasi_kothe ? "true" : "false", rep.quasi_kothe_inconclusive ? "true" : "false"};
  }
  if (op == "superadd-lz") {
    const auto lz = superadd_classify_lz(at("p"), at("q"), at("alpha"), at("gamma"));
    const auto lam = superadd_classify_lambda(PowerLog{at("p"), at("q"), at("alpha"), 1.0}, at("q"), at("gamma"), cfg);
    return {verdict_name(lz.superadditive), verdict_name(lam.superadditive)};
  }
  if (op == "superadd-ratio") {
    const long k = std::lround(at("k"));
    const auto fam = equal_split_family(0.5, k, 1.0);
    const LambdaParams params(at("q"), PowerLog{at("p"), at("q"), at("alpha"), 1.0});
    return {format_double(superadd_ratio(fam, params, at("gamma"), cfg))};
  }
  const double lr = log_support_radius(at("kappa"), at("R_tilde"), at("R"), static_cast<int>(std::lround(at("n"))));
  return {format_double(std::exp(lr)), format_double(lr)};
}

inline io::Table run_sweep(const std::string& op, const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                           const QuadratureConfig& cfg, unsigned jobs) {
  auto it = sweep_ops().find(op);
  if (it == sweep_ops().end()) throw PreconditionError("unknown sweep operation '" + op + "'");
  const auto& spec = it->second;
  std::vector<std::vector<double>> axes;
  for (const auto& name : spec.params) {
    auto g = std::find_if(grid.begin(), grid.end(), [&](const auto& e) { return e.first == name; });
    if (g == grid.end()) throw PreconditionError("sweep '" + op + "' needs parameter '" + name + "'");
    axes.push_back(g->second);
  }
  for (const auto& [name, values] : grid)
    if (std::find(spec.params.begin(), spec.params.end(), name) == spec.params.end())
      throw PreconditionError("sweep '" + op + "' has no parameter '" + name + "'");
  double count = 1;
  for (const auto& a : axes) count *= static_cast<double>(a.size());
  if (count > 1e6) throw PreconditionError("sweep grid has more than 10^6 points");

  io::Table table;
  table.header = spec.params;
  table.header.insert(table.header.end(), spec.results.begin(), spec.results.end());
  const auto n = static_cast<std::size_t>(count);
  auto rows = parallel_map<std::vector<std::string>>(n, jobs, [&](std::size_t idx) {
    std::map<std::string, double> x;
    std::vector<std::string> row(spec.params.size());
    std::size_t rest = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& axis = axes[a];
      const double v = axis[rest % axis.size()];
      rest /= axis.size();
      x[spec.params[a]] = v;
      row[a] = format_double(v);
    }
    auto res = sweep_point(op, x, cfg);
    row.insert(row.end(), res.begin(), res.end());
    return row;
  });
  for (auto& r : rows) table.add(std::move(r));
  return table;
}

// ---------------------------------------------------------------- run

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Rearrangements, Lambda/Lorentz–Zygmund quasinorms and dilation certificates.", "rearrange-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string rel_tol, abs_tol;
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--rel-tol", rel_tol, "Quadrature relative tolerance");
  app.add_option("--abs-tol", abs_tol, "Quadrature absolute tolerance");
  app.add_option("--jobs", g.jobs, "Worker threads (fallback: REARRANGE_LAB_JOBS)");
  app.add_option("--format", g.format, "json | csv | svg")->check(CLI::IsMember({"json", "csv", "svg"}));

  // qnorm
  std::string profile_path, weight_path, q_s, p_s, alpha_s = "0", R_s;
  int n_flag = 0;
  bool distributional = false;
  auto* qnorm = app.add_subcommand("qnorm", "Lambda or Lorentz–Zygmund quasinorm of a profile");
  qnorm->add_option("--profile", profile_path)->required();
  qnorm->add_option("--weight", weight_path);
  qnorm->add_option("--q", q_s);
  qnorm->add_option("--p", p_s);
  qnorm->add_option("--alpha", alpha_s);
  qnorm->add_option("--n", n_flag);
  qnorm->add_option("--R", R_s);
  qnorm->add_flag("--distributional", distributional, "Use the distribution-function formula");

  std::string input_path;
  auto* rearrange = app.add_subcommand("rearrange", "Nonincreasing rearrangement of a simple function");
  rearrange->add_option("--input", input_path)->required();

  std::string lambdas_s;
  bool numeric = false;
  auto* theta_cmd = app.add_subcommand("theta", "Dilation index Θ(λ) of a weight");
  theta_cmd->add_option("--weight", weight_path)->required();
  theta_cmd->add_option("--lambda", lambdas_s)->required();
  theta_cmd->add_flag("--numeric", numeric, "Grid sup even when a closed form exists");

  std::string r_s, RR_s;
  auto* sep = app.add_subcommand("separation-cert", "Uniform-separation certificate");
  sep->add_option("--weight", weight_path)->required();
  sep->add_option("--q", q_s);
  sep->add_option("--r", r_s)->required();
  sep->add_option("--R", RR_s)->required();

  std::string qn_name = "plane", eps_s;
  long budget = 1000;
  std::size_t cells = 8;
  auto* falsify = app.add_subcommand("falsify", "Search for a uniform-separation counterexample");
  falsify->add_option("--qnorm", qn_name);
  falsify->add_option("--r", r_s)->required();
  falsify->add_option("--R", RR_s)->required();
  falsify->add_option("--eps", eps_s)->required();
  falsify->add_option("--budget", budget);
  falsify->add_option("--cells", cells);

  std::string gamma_s, mode = "classify", csv_path;
  long kmax = 64;
  int families = 200;
  auto* superadd = app.add_subcommand("superadd", "γ-disjoint superadditivity");
  superadd->add_option("--p", p_s)->required();
  superadd->add_option("--q", q_s)->required();
  superadd->add_option("--alpha", alpha_s);
  superadd->add_option("--gamma", gamma_s)->required();
  superadd->add_option("--mode", mode)->check(CLI::IsMember({"classify", "empirical"}));
  superadd->add_option("--kmax", kmax);
  superadd->add_option("--families", families);
  superadd->add_option("--csv", csv_path, "Also write the (k, ratio) table here");

  std::string kappas_s;
  auto* verify = app.add_subcommand("verify-identities", "Check the dilation invariances");
  verify->add_option("--profile", profile_path)->required();
  verify->add_option("--n", n_flag);
  verify->add_option("--R", R_s);
  verify->add_option("--q", q_s)->required();
  verify->add_option("--kappas", kappas_s)->required();

  std::string lambda_s, lambda_rel_s, threshold_s;
  auto* certify = app.add_subcommand("certify", "Lower-bound certificate for the ball measure of noncompactness");
  certify->add_option("--profile", profile_path)->required();
  certify->add_option("--n", n_flag);
  certify->add_option("--R", R_s);
  certify->add_option("--q", q_s)->required();
  auto* lam_opt = certify->add_option("--lambda", lambda_s);
  certify->add_option("--lambda-rel", lambda_rel_s, "λ as a multiple of the base quasinorm")->excludes(lam_opt);
  certify->add_option("--kappas", kappas_s)->required();
  certify->add_option("--threshold", threshold_s, "Final support radius bound, relative to R");

  std::string op, grid_path;
  std::vector<std::string> params;
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV");
  sweep->add_option("--op", op);
  sweep->add_option("--param", params, "name=v1,v2,... or name=start:stop:step");
  sweep->add_option("--grid", grid_path, "JSON {\"op\": ..., \"params\": {name: [values]}}");

  std::vector<const char*> argv{"rearrange-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return static_cast<int>(ExitCode::usage);
  }

  try {
    if (!rel_tol.empty()) g.rel_tol = io::parse_real(rel_tol);
    if (!abs_tol.empty()) g.abs_tol = io::parse_real(abs_tol);
    const auto cfg = g.quadrature();
    const unsigned jobs = resolve_jobs(g.jobs);
    const std::string fmt = g.format;

    if (qnorm->parsed()) {
      const Json pj = read_json(profile_path);
      Quantity result;
      if (!weight_path.empty()) {
        const Weight w = io::weight_from_json(read_json(weight_path));
        double q = 0;
        if (!q_s.empty()) q = io::parse_real(q_s);
        else if (auto pl = w.powerlog()) q = pl->q;
        else throw PreconditionError("--q is required with a tabulated weight");
        const LambdaParams params(q, w);
        if (pj.contains("pieces")) {
          const auto f = io::simple_function_from_json(pj);
          result = distributional ? lambda_quasinorm_distributional(f, params, cfg)
                                  : lambda_quasinorm(rearrangement(f), params, cfg);
        } else if (is_radial(pj)) {
          result = lambda_quasinorm(io::radial_profile_from_json(pj, geometry_for(pj, n_flag, R_s)).profile(), params, cfg);
        } else {
          result = lambda_quasinorm(io::step_profile_from_json(pj), params, cfg);
        }
      } else {
        require(!p_s.empty() && !q_s.empty(), "qnorm needs --weight or --p and --q");
        const double p = io::parse_real(p_s), q = io::parse_real(q_s), a = io::parse_real(alpha_s);
        if (pj.contains("pieces")) {
          const auto f = io::simple_function_from_json(pj);
          if (distributional)
            result = lambda_quasinorm_distributional(f, LambdaParams(q, PowerLog{p, q, a, f.total_mass()}), cfg);
          else
            result = lz_quasinorm(rearrangement(f), p, q, a, cfg);
        } else if (is_radial(pj)) {
          result = lz_quasinorm(io::radial_profile_from_json(pj, geometry_for(pj, n_flag, R_s)).profile(), p, q, a, cfg);
        } else {
          result = lz_quasinorm(io::step_profile_from_json(pj), p, q, a, cfg);
        }
      }
      emit(g, dump(io::to_json(result)), out);
      return 0;
    }

    if (rearrange->parsed()) {
      emit(g, dump(io::to_json(rearrangement(io::simple_function_from_json(read_json(input_path))))), out);
      return 0;
    }

    if (theta_cmd->parsed()) {
      const Weight w = io::weight_from_json(read_json(weight_path));
      io::Table t{{"lambda", "theta"}, {}};
      Json arr = Json::array();
      const bool closed = w.powerlog() && !numeric;
      for (double lam : parse_list(lambdas_s)) {
        const double th = closed ? theta(w, lam) : theta_numeric(w, lam);
        t.add(io::cells({lam, th}));
        arr.push_back({{"lambda", lam}, {"theta", io::number(th)}, {"method", closed ? "closed_form" : "grid"}});
      }
      if (fmt == "csv") emit(g, io::emit_plotdata(t, "theta-curve").csv, out);
      else if (fmt == "svg") emit(g, io::emit_plotdata(t, "theta-curve").svg, out);
      else emit(g, dump(arr), out);
      return 0;
    }

    if (sep->parsed()) {
      const Weight w = io::weight_from_json(read_json(weight_path));
      double q = 0;
      if (!q_s.empty()) q = io::parse_real(q_s);
      else if (auto pl = w.powerlog()) q = pl->q;
      else throw PreconditionError("--q is required with a tabulated weight");
      const double r = io::parse_real(r_s), R = io::parse_real(RR_s);
      if (fmt == "csv" || fmt == "svg") {
        io::Table t{{"lambda0", "epsilon"}, {}};
        for (int i = 1; i < 64; ++i) t.add(io::cells({i / 64.0, separation_epsilon(w, q, r, R, i / 64.0)}));
        const auto plot = io::emit_plotdata(t, "epsilon-curve");
        emit(g, fmt == "csv" ? plot.csv : plot.svg, out);
        return 0;
      }
      const auto c = separation_certificate(LambdaParams(q, w), r, R);
      emit(g,
           dump({{"r", c.r},
                 {"R", c.R},
                 {"lambda0", c.lambda0},
                 {"epsilon", c.epsilon},
                 {"theta_min", io::number(c.theta_min)},
                 {"hypothesis_verified", c.hypothesis_verified}}),
           out);
      return 0;
    }

    if (falsify->parsed()) {
      const auto qn = builtin_quasinorm(qn_name, cells);
      const auto hit = falsify_uniform_separation(qn, io::parse_real(r_s), io::parse_real(RR_s),
                                                  io::parse_real(eps_s), budget, g.seed);
      Json j{{"qnorm", qn_name}, {"found", hit.has_value()}, {"budget", budget}, {"seed", g.seed}};
      if (hit) {
        j["trial"] = hit->trial;
        j["f"] = hit->f;
        j["g"] = hit->g;
        j["f_norm"] = hit->f_norm;
        j["g_norm"] = hit->g_norm;
        j["sum_norm"] = hit->sum_norm;
      }
      emit(g, dump(j), out);
      return 0;
    }

    if (superadd->parsed()) {
      const double p = io::parse_real(p_s), q = io::parse_real(q_s), a = io::parse_real(alpha_s),
                   gamma = io::parse_real(gamma_s);
      if (mode == "classify") {
        const auto lz = superadd_classify_lz(p, q, a, gamma);
        const auto lam = superadd_classify_lambda(PowerLog{p, q, a, 1.0}, q, gamma, cfg);
        emit(g, dump({{"mode", "classify"}, {"lz", verdict_json(lz)}, {"lambda", verdict_json(lam)}}), out);
        return 0;
      }
      const LambdaParams params(q, PowerLog{p, q, a, 1.0});
      const auto res = empirical_superadd_constant(params, gamma, {kmax, families}, g.seed, cfg);
      io::Table t{{"k", "ratio"}, {}};
      Json growth = Json::array();
      for (const auto& row : res.growth) {
        t.add({std::to_string(row.k), format_double(row.ratio)});
        growth.push_back({{"k", row.k}, {"ratio", io::number(row.ratio)}});
      }
      if (!csv_path.empty()) write_file(csv_path, t.to_csv());
      if (fmt == "csv") emit(g, t.to_csv(), out);
      else if (fmt == "svg") emit(g, io::emit_plotdata(t, "superadd-growth").svg, out);
      else emit(g, dump({{"mode", "empirical"}, {"constant", io::number(res.constant)}, {"growth", growth}}), out);
      return 0;
    }

    if (verify->parsed()) {
      const Json pj = read_json(profile_path);
      const auto geom = geometry_for(pj, n_flag, R_s);
      const auto v = io::radial_profile_from_json(pj, geom);
      const auto rows = invariance_report(v, geom, io::parse_real(q_s), parse_kappas(kappas_s), cfg, jobs);
      io::Table t{{"kappa", "R_kappa", "grad_rel_err", "qnorm_rel_err", "qnorm_value", "support_mass"}, {}};
      bool ok = true;
      for (const auto& r : rows) {
        t.add(io::cells({r.kappa, r.R_kappa, r.grad_rel_err, r.qnorm_rel_err, r.qnorm_value, r.support_mass}));
        ok = ok && r.grad_rel_err <= 1e-6 && r.qnorm_rel_err <= 1e-6;
      }
      emit(g, fmt == "svg" ? io::emit_plotdata(t, "invariance").svg : t.to_csv(), out);
      if (!ok) {
        err << "invariance relative error above 1e-6\n";
        return static_cast<int>(ExitCode::certificate_failure);
      }
      return 0;
    }

    if (certify->parsed()) {
      const Json pj = read_json(profile_path);
      const auto geom = geometry_for(pj, n_flag, R_s);
      const auto v = io::radial_profile_from_json(pj, geom);
      const double q = io::parse_real(q_s);
      const int n = geom.n;
      const double alpha = -1.0 + 1.0 / n - (is_infinite_parameter(q) ? 0.0 : 1.0 / q);
      double lambda = 0;
      if (!lambda_s.empty()) {
        lambda = io::parse_real(lambda_s);
      } else {
        require(!lambda_rel_s.empty(), "certify needs --lambda or --lambda-rel");
        lambda = io::parse_real(lambda_rel_s) * lz_quasinorm(v.profile(), kInf, q, alpha, cfg).value;
      }
      CertificateOptions opt;
      opt.jobs = jobs;
      if (!threshold_s.empty()) opt.support_threshold_rel = io::parse_real(threshold_s);
      try {
        const auto c = noncompactness_certificate(v, geom, q, parse_kappas(kappas_s), lambda, cfg, opt);
        Json radii = Json::array(), log_radii = Json::array(), norms = Json::array();
        for (std::size_t i = 0; i < c.kappas.size(); ++i) {
          radii.push_back(io::number(c.support_radii[i]));
          log_radii.push_back(io::number(c.log_support_radii[i]));
          norms.push_back(io::number(c.quasinorms[i]));
        }
        emit(g,
             dump({{"lambda", c.lambda},
                   {"gradient_norm", c.gradient_norm},
                   {"base_quasinorm", c.base_quasinorm},
                   {"kappa0", c.kappa0},
                   {"kappas", c.kappas},
                   {"support_radii", radii},
                   {"log_support_radii", log_radii},
                   {"quasinorms", norms},
                   {"conditions_met", c.conditions_met}}),
             out);
        if (!c.conditions_met) {
          err << "support radii do not shrink below the threshold\n";
          return static_cast<int>(ExitCode::certificate_failure);
        }
        return 0;
      } catch (const QuasinormBelowLambda& e) {
        emit(g,
             dump({{"lambda", lambda},
                   {"conditions_met", false},
                   {"error", "QuasinormBelowLambda"},
                   {"failing_kappa", e.kappa()},
                   {"value", e.value()}}),
             out);
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
      }
    }

    if (sweep->parsed()) {
      std::vector<std::pair<std::string, std::vector<double>>> grid;
      if (!grid_path.empty()) {
        const Json gj = read_json(grid_path);
        if (op.empty()) op = gj.value("op", "");
        if (gj.contains("params"))
          for (const auto& [name, values] : gj.at("params").items()) {
            std::vector<double> vs;
            for (const auto& x : values) vs.push_back(io::real(x));
            grid.emplace_back(name, std::move(vs));
          }
      }
      for (const auto& p : params) {
        const auto eq = p.find('=');
        require(eq != std::string::npos, "--param needs name=values");
        grid.emplace_back(p.substr(0, eq), parse_list(p.substr(eq + 1)));
      }
      require(!op.empty(), "sweep needs --op or an 'op' in the grid file");
      emit(g, run_sweep(op, grid, cfg, jobs).to_csv(), out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::precondition);
  }
  return static_cast<int>(ExitCode::usage);
}

}  // namespace rlab::cli
