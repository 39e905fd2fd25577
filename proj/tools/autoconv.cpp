// autoconv: solve, certify and inspect autoconvolution-norm minimizers.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "autoconv/certify.hpp"
#include "autoconv/discrete.hpp"
#include "autoconv/error.hpp"
#include "autoconv/family.hpp"
#include "autoconv/io.hpp"
#include "autoconv/solver.hpp"
#include "autoconv/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace autoconv;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIterationCap = 3,
  kMissingInput = 4,
  kEnergyViolation = 5,
  kWriteFailure = 6,
};

struct InputError : Error {
  using Error::Error;
};
struct OutputError : Error {
  using Error::Error;
};

SolutionFile read_solution(const fs::path& path) {
  try {
    return load_solution(path);
  } catch (const Error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_output(const fs::path& path, std::string_view text) {
  try {
    write_text(path, text);
  } catch (const Error& e) {
    throw OutputError(e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json envelope(std::string_view command, json inputs, json body) {
  json j;
  j["tool"] = {{"name", "autoconv"}, {"version", std::string(kToolVersion)}};
  j["command"] = command;
  j["created_utc"] = created_utc();
  j["inputs"] = std::move(inputs);
  j["body"] = std::move(body);
  return j;
}

json to_json(const ObjectiveBreakdown& b) {
  return {{"R", b.R}, {"even_sum", b.even_sum}, {"odd_sum", b.odd_sum}, {"total", b.total}};
}

json to_json(const BoundCertificate& c) {
  return {{"kind", to_string(c.kind)},
          {"value", c.value},
          {"N", c.N},
          {"main_sum", c.main_sum},
          {"analytic_tail", c.analytic_tail},
          {"rounding_budget", c.rounding_budget},
          {"tail_budget", c.tail_budget},
          {c.kind == BoundKind::lower ? "alpha" : "decay_constant", c.parameter},
          {"inputs_digest", c.inputs_digest}};
}

json to_json(const SigmaBounds& s) {
  return {{"mu2_lower", s.mu2_lower},
          {"sigma2_g2", s.sigma2_g2},
          {"sigma2_g3", s.sigma2_g3},
          {"sigma2_g4", s.sigma2_g4},
          {"sigma3_1", s.sigma3_1},
          {"sigma4_1", s.sigma4_1}};
}

void emit(const std::optional<fs::path>& path, std::string_view text) {
  if (path) {
    write_output(*path, text);
  } else {
    std::cout << text;
  }
}

// solve ---------------------------------------------------------------------

struct SolveOptions {
  std::size_t T = 0;
  std::size_t R = 4000;
  double tol = 1e-10;
  double rel_tol = 1e-12;
  std::size_t max_iter = 100'000;
  std::size_t log_every = 0;
  fs::path out = "solution.sol";
  std::optional<fs::path> report;
  std::optional<fs::path> warm_start;
};

int run_solve(const SolveOptions& o) {
  SolverConfig config;
  config.T = o.T;
  config.R = o.R;
  config.grad_tol = o.tol;
  config.rel_obj_tol = o.rel_tol;
  config.max_iterations = o.max_iter;
  json inputs = json::object();
  if (o.warm_start) {
    const SolutionFile warm = read_solution(*o.warm_start);
    config.init = WarmStart{warm.to_solution()};
    inputs["warm_start"] = o.warm_start->string();
    inputs["warm_start_digest"] = coefficient_digest(warm.to_coefficients());
  }
  if (o.log_every > 0) {
    config.log_every = o.log_every;
    config.on_iteration = [](const IterationLog& log) {
      std::fprintf(stderr, "iter %zu objective %.12f grad %.3e step %.3e\n", log.iteration,
                   log.objective, log.grad_norm, log.step);
    };
  }
  for (const std::string& w : validate(config)) std::fprintf(stderr, "warning: %s\n", w.c_str());

  const FourierSolution s = solve(config);
  try {
    save_solution(o.out, make_solution_file(s));
  } catch (const Error& e) {
    throw OutputError(e.what());
  }

  json body;
  body["config"] = {{"T", config.T},
                    {"R", config.R},
                    {"grad_tol", config.grad_tol},
                    {"rel_obj_tol", config.rel_obj_tol},
                    {"max_iterations", config.max_iterations},
                    {"memory", config.memory},
                    {"warm_start", o.warm_start.has_value()}};
  body["stats"] = {{"iterations", s.iterations},
                   {"converged", s.converged},
                   {"stop_reason", to_string(s.reason)},
                   {"grad_norm", s.grad_norm},
                   {"warnings", s.warnings}};
  body["objective"] = to_json(s.breakdown);
  body["solution_digest"] = coefficient_digest(s.coeffs);
  inputs["solution"] = o.out.string();
  if (o.report) write_output(*o.report, dump(envelope("solve", inputs, body)));

  std::printf("T=%zu R=%zu objective=%.12f iterations=%zu stop=%s\n", config.T, config.R,
              s.breakdown.total, s.iterations, to_string(s.reason).c_str());
  return s.reason == StopReason::iteration_cap ? kIterationCap : kOk;
}

// certify -------------------------------------------------------------------

struct CertifyOptions {
  fs::path solution;
  std::size_t N = 1'000'000;
  std::optional<double> alpha;
  bool optimize_alpha = false;
  double alpha_min = kDefaultAlphaInterval.first;
  double alpha_max = kDefaultAlphaInterval.second;
  std::string accumulation = "compensated";
  std::optional<fs::path> report;
};

int run_certify(const CertifyOptions& o) {
  const SolutionFile file = read_solution(o.solution);
  const FourierCoefficients f = file.to_coefficients();
  const auto acc = o.accumulation == "double-double" ? numeric::Accumulation::double_double
                                                     : numeric::Accumulation::compensated;
  if (o.N < 2 * f.degree()) {
    throw InvalidArgument("N must be at least 2T (T = " + std::to_string(f.degree()) + ")");
  }
  const BoundCertificate upper = upper_bound(f, o.N, acc);
  BoundCertificate lower;
  json alpha_info;
  if (o.alpha) {
    const DualKernel kernel(f, o.N, acc);
    lower = kernel.lower_bound(*o.alpha);
    alpha_info = {{"mode", "fixed"}, {"alpha", *o.alpha}};
  } else {
    const AlphaSearch search = optimize_alpha(f, o.N, {o.alpha_min, o.alpha_max}, acc);
    lower = search.certificate;
    alpha_info = {{"mode", "optimized"},
                  {"interval", {o.alpha_min, o.alpha_max}},
                  {"alpha", search.alpha}};
  }

  json body;
  body["solution"] = {{"T", f.degree()},
                      {"R", file.R()},
                      {"digest", coefficient_digest(f)},
                      {"abs_sum", coefficient_statistics(f).abs_sum}};
  const std::size_t R = file.R() > 0 ? file.R() : 1;
  body["objective"] = to_json(objective(f, R));
  body["accumulation"] = o.accumulation;
  body["alpha"] = alpha_info;
  body["upper"] = to_json(upper);
  body["lower"] = to_json(lower);
  body["sandwich_width"] = sandwich_width(lower, upper);
  if (lower.value > 0.5 && lower.value < 0.7) {
    body["sigma_bounds"] = to_json(sigma_bounds(lower.value));
  } else {
    body["sigma_bounds"] = nullptr;
  }
  const json inputs = {{"solution", o.solution.string()}};
  emit(o.report, dump(envelope("certify", inputs, body)));
  if (o.report) {
    std::printf("lower=%.10f upper=%.10f width=%.3e\n", lower.value, upper.value,
                upper.value - lower.value);
  }
  return kOk;
}

// family --------------------------------------------------------------------

struct FamilyOptions {
  double c_min = 0.45;
  double c_max = 0.55;
  std::size_t steps = 21;
  std::size_t K = kDefaultFamilyTerms;
  std::optional<fs::path> out_csv;
};

int run_family(const FamilyOptions& o) {
  const std::vector<FamilySample> rows = family_scan(o.c_min, o.c_max, o.steps, o.K);
  std::string csv = "c,value,tail\n";
  for (const FamilySample& r : rows) {
    csv += format_double(r.c) + ',' + format_double(r.value) + ',' + format_double(r.tail) + '\n';
  }
  if (o.out_csv) write_output(*o.out_csv, csv);

  if (o.steps == 1) {
    std::printf("c=%.6f value=%.10f tail=%.3e\n", rows[0].c, rows[0].value, rows[0].tail);
  } else {
    const FamilyOptimum best = optimize_c({o.c_min, o.c_max}, o.K);
    std::printf("best c=%.6f value=%.10f tail=%.3e\n", best.c, best.value, best.tail);
  }
  if (!o.out_csv) std::cout << csv;
  return kOk;
}

// plot-data -----------------------------------------------------------------

struct PlotOptions {
  fs::path solution;
  std::size_t points = 1000;
  std::optional<fs::path> out_csv;
  std::optional<fs::path> out_svg;
};

int run_plot(const PlotOptions& o) {
  const SolutionFile file = read_solution(o.solution);
  const CurveSamples s = curve_samples(file.to_coefficients(), o.points);
  if (o.out_svg) write_output(*o.out_svg, curve_svg(s));
  if (o.out_csv || !o.out_svg) emit(o.out_csv, curve_csv(s));
  return kOk;
}

// energy --------------------------------------------------------------------

struct EnergyOptions {
  std::size_t N = 64;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double mu2 = kCertifiedMu2Lower;
  std::string weights = "random";
  std::optional<fs::path> out_csv;
};

int run_energy(const EnergyOptions& o) {
  std::string csv = "trial,N,E,bound,ratio\n";
  bool ok = true;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const WeightSequence H =
        o.weights == "constant" ? WeightSequence::constant(o.N) : random_weights(o.N, o.seed + t);
    const EnergyReport r = additive_energy(H, o.mu2);
    ok = ok && r.ratio >= 1.0;
    csv += std::to_string(t) + ',' + std::to_string(r.N) + ',' + format_double(r.energy) + ',' +
           format_double(r.bound) + ',' + format_double(r.ratio) + '\n';
  }
  emit(o.out_csv, csv);
  if (!ok) {
    std::fprintf(stderr, "energy bound violated in at least one trial\n");
    return kEnergyViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on the minimal L2 norm of autoconvolutions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  SolveOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "Minimize the truncated objective over degree-T polynomials");
  solve_cmd->add_option("--T", solve_opts.T, "Polynomial degree")->required();
  solve_cmd->add_option("--R", solve_opts.R, "Odd channels kept in the objective")->capture_default_str();
  solve_cmd->add_option("--tol", solve_opts.tol, "Gradient max-norm tolerance")->capture_default_str();
  solve_cmd->add_option("--rel-tol", solve_opts.rel_tol, "Relative objective decrease tolerance")
      ->capture_default_str();
  solve_cmd->add_option("--max-iter", solve_opts.max_iter, "Iteration cap")->capture_default_str();
  solve_cmd->add_option("--log-every", solve_opts.log_every, "Log every n iterations to stderr (0: off)");
  solve_cmd->add_option("--out", solve_opts.out, "Solution file")->capture_default_str();
  solve_cmd->add_option("--report", solve_opts.report, "JSON report path");
  solve_cmd->add_option("--warm-start", solve_opts.warm_start, "Solution file to start from");

  CertifyOptions cert_opts;
  auto* cert_cmd = app.add_subcommand("certify", "Compute upper and lower certificates for a solution");
  cert_cmd->add_option("--solution", cert_opts.solution, "Solution file")->required();
  cert_cmd->add_option("--N", cert_opts.N, "Truncation of the certified sums")->capture_default_str();
  auto* alpha_opt = cert_cmd->add_option("--alpha", cert_opts.alpha, "Fixed dual parameter in (1/2, 1)");
  auto* opt_flag = cert_cmd->add_flag("--optimize-alpha", cert_opts.optimize_alpha,
                                      "Golden-section search for alpha (default)");
  alpha_opt->excludes(opt_flag);
  cert_cmd->add_option("--alpha-min", cert_opts.alpha_min)->capture_default_str();
  cert_cmd->add_option("--alpha-max", cert_opts.alpha_max)->capture_default_str();
  cert_cmd->add_option("--accumulation", cert_opts.accumulation)
      ->check(CLI::IsMember({"compensated", "double-double"}))
      ->capture_default_str();
  cert_cmd->add_option("--report", cert_opts.report, "JSON report path (default: stdout)");

  FamilyOptions fam_opts;
  auto* fam_cmd = app.add_subcommand("family", "Scan the arcsine-type family");
  fam_cmd->add_option("--c-min", fam_opts.c_min)->capture_default_str();
  fam_cmd->add_option("--c-max", fam_opts.c_max)->capture_default_str();
  fam_cmd->add_option("--steps", fam_opts.steps)->capture_default_str();
  fam_cmd->add_option("--K", fam_opts.K, "Series terms")->capture_default_str();
  fam_cmd->add_option("--out-csv", fam_opts.out_csv);

  PlotOptions plot_opts;
  auto* plot_cmd = app.add_subcommand("plot-data", "Sample f and f*f on [-1, 1]");
  plot_cmd->add_option("--solution", plot_opts.solution, "Solution file")->required();
  plot_cmd->add_option("--grid-points", plot_opts.points)->capture_default_str();
  plot_cmd->add_option("--out-csv", plot_opts.out_csv);
  plot_cmd->add_option("--out-svg", plot_opts.out_svg);

  EnergyOptions en_opts;
  auto* en_cmd = app.add_subcommand("energy", "Check the additive-energy inequality on random weights");
  en_cmd->add_option("--N", en_opts.N)->capture_default_str();
  en_cmd->add_option("--trials", en_opts.trials)->capture_default_str();
  en_cmd->add_option("--seed", en_opts.seed)->capture_default_str();
  en_cmd->add_option("--mu2-lower", en_opts.mu2)->capture_default_str();
  en_cmd->add_option("--weights", en_opts.weights)
      ->check(CLI::IsMember({"random", "constant"}))
      ->capture_default_str();
  en_cmd->add_option("--out-csv", en_opts.out_csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* scope = &app;
    for (const CLI::App* sub : app.get_subcommands()) scope = sub;
    std::cerr << scope->help();
    return kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_opts);
    if (*cert_cmd) return run_certify(cert_opts);
    if (*fam_cmd) return run_family(fam_opts);
    if (*plot_cmd) return run_plot(plot_opts);
    if (*en_cmd) return run_energy(en_opts);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingInput;
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kWriteFailure;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
