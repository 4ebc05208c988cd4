#pragma once
// Command-line front end. Stdout carries data; diagnostics go to the error
// stream. Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "unaryflow/bench.hpp"
#include "unaryflow/costmodel.hpp"
#include "unaryflow/detmul.hpp"
#include "unaryflow/funcs.hpp"
#include "unaryflow/matrix.hpp"
#include "unaryflow/streams.hpp"

namespace unaryflow {

namespace detail {

// route a CSV payload to --out PATH|- with optional text-table rendering
inline void deliver(const std::string& csv, const std::string& out_path,
                    const std::string& format, std::ostream& stdout_stream) {
  std::string payload;
  if (format == "text") {
    std::ostringstream t;
    write_text_table(t, csv);
    payload = t.str();
  } else {
    payload = csv;
  }
  if (out_path == "-") {
    stdout_stream << payload;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output path " + out_path);
  f << payload;
}

inline std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> ms;
  for (const std::string& s : names) ms.push_back(parse_method(s));
  return ms;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"unaryflow: deterministic unary computing toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "unaryflow.conf", "key=value config file (flags win)", false);
  bool show_config = false;
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");

  const std::vector<std::string> kMethods = {"det", "lfsr", "sobol", "halton"};
  const std::vector<std::string> kKinds = {"counter", "lfsr", "sobol", "halton"};
  const std::vector<std::string> kFunctions = {"expneg", "sin", "log1p", "sigmoid"};
  uint32_t default_workers = std::max(1u, std::thread::hardware_concurrency());

  // gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "emit one comparator-generated stream");
  std::string gen_kind = "counter";
  uint32_t gen_n = 4, gen_value = 0, gen_seed = 1, gen_poly = 0, gen_dim = 0, gen_base = 2;
  std::string gen_sobol_file;
  gen->add_option("--kind", gen_kind, "number source")->check(CLI::IsMember(kKinds));
  gen->add_option("--n", gen_n, "resolution log2 (stream length 2^n)")->check(CLI::Range(2, 16));
  gen->add_option("--value", gen_value, "operand numerator (value/2^n)")->required();
  gen->add_option("--lfsr-seed", gen_seed, "LFSR start state");
  gen->add_option("--lfsr-poly", gen_poly, "LFSR tap mask (0 = width default)");
  gen->add_option("--sobol-dim", gen_dim, "Sobol dimension");
  gen->add_option("--halton-base", gen_base, "Halton base");
  gen->add_option("--sobol-file", gen_sobol_file, "direction-number file to load");

  // mul -----------------------------------------------------------------
  auto* mul = app.add_subcommand("mul", "one multiply, optionally cycle-traced");
  std::string mul_method = "det";
  uint32_t mul_n = 4, mul_a = 0, mul_b = 0;
  bool mul_trace = false;
  MethodParams mul_params;
  mul->add_option("--method", mul_method)->check(CLI::IsMember(kMethods));
  mul->add_option("--n", mul_n)->check(CLI::Range(2, 16));
  mul->add_option("--a", mul_a, "first operand numerator")->required();
  mul->add_option("--b", mul_b, "second operand numerator")->required();
  mul->add_flag("--trace", mul_trace, "emit per-cycle trace CSV (det only)");
  mul->add_option("--lfsr-seed-a", mul_params.lfsr_seed_a);
  mul->add_option("--lfsr-seed-b", mul_params.lfsr_seed_b);
  mul->add_option("--lfsr-poly", mul_params.lfsr_polynomial);
  mul->add_option("--sobol-dim-a", mul_params.sobol_dim_a);
  mul->add_option("--sobol-dim-b", mul_params.sobol_dim_b);
  mul->add_option("--halton-base-a", mul_params.halton_base_a);
  mul->add_option("--halton-base-b", mul_params.halton_base_b);

  // sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "exhaustive multiply MAE sweep");
  std::vector<std::string> sweep_methods;
  std::vector<uint32_t> sweep_ns;
  std::string sweep_out = "-", sweep_format = "csv";
  uint32_t sweep_workers = default_workers;
  MethodParams sweep_params;
  sweep->add_option("--method", sweep_methods, "method(s)")
      ->delimiter(',')->check(CLI::IsMember(kMethods));
  sweep->add_option("--n", sweep_ns, "resolution(s)")->delimiter(',')->check(CLI::Range(2, 16));
  sweep->add_option("--out", sweep_out, "output path or -");
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "text"}));
  sweep->add_option("--workers", sweep_workers, "parallel workers (result-invariant)");
  sweep->add_option("--lfsr-seed-a", sweep_params.lfsr_seed_a);
  sweep->add_option("--lfsr-seed-b", sweep_params.lfsr_seed_b);
  sweep->add_option("--lfsr-poly", sweep_params.lfsr_polynomial);
  sweep->add_option("--sobol-dim-a", sweep_params.sobol_dim_a);
  sweep->add_option("--sobol-dim-b", sweep_params.sobol_dim_b);
  sweep->add_option("--halton-base-a", sweep_params.halton_base_a);
  sweep->add_option("--halton-base-b", sweep_params.halton_base_b);

  // progressive -----------------------------------------------------------
  auto* prog = app.add_subcommand("progressive", "MAE vs observed output length");
  std::vector<std::string> prog_methods;
  uint32_t prog_n = 4, prog_workers = default_workers;
  std::vector<uint32_t> prog_observe;
  std::string prog_out = "-", prog_format = "csv";
  MethodParams prog_params;
  prog->add_option("--method", prog_methods)->delimiter(',')->check(CLI::IsMember(kMethods));
  prog->add_option("--n", prog_n)->check(CLI::Range(2, 16));
  prog->add_option("--observe", prog_observe, "observed bit counts (default: last 7 lengths)")
      ->delimiter(',');
  prog->add_option("--out", prog_out);
  prog->add_option("--format", prog_format)->check(CLI::IsMember({"csv", "text"}));
  prog->add_option("--workers", prog_workers);
  prog->add_option("--lfsr-seed-a", prog_params.lfsr_seed_a);
  prog->add_option("--lfsr-seed-b", prog_params.lfsr_seed_b);
  prog->add_option("--lfsr-poly", prog_params.lfsr_polynomial);
  prog->add_option("--sobol-dim-a", prog_params.sobol_dim_a);
  prog->add_option("--sobol-dim-b", prog_params.sobol_dim_b);
  prog->add_option("--halton-base-a", prog_params.halton_base_a);
  prog->add_option("--halton-base-b", prog_params.halton_base_b);

  // funcs -----------------------------------------------------------------
  auto* funcs = app.add_subcommand("funcs", "Maclaurin function approximation MAE");
  std::vector<std::string> funcs_functions, funcs_methods;
  uint32_t funcs_n = 8, funcs_workers = default_workers;
  std::string funcs_spec_file, funcs_out = "-", funcs_format = "csv";
  funcs->add_option("--function", funcs_functions)->delimiter(',')
      ->check(CLI::IsMember(kFunctions));
  funcs->add_option("--method", funcs_methods)->delimiter(',')->check(CLI::IsMember(kMethods));
  funcs->add_option("--n", funcs_n)->check(CLI::Range(2, 16));
  funcs->add_option("--spec-file", funcs_spec_file, "series spec file (overrides --function)");
  funcs->add_option("--out", funcs_out);
  funcs->add_option("--format", funcs_format)->check(CLI::IsMember({"csv", "text"}));
  funcs->add_option("--workers", funcs_workers);

  // matmul ----------------------------------------------------------------
  auto* matmul_cmd = app.add_subcommand("matmul", "matrix trials or file-mode product");
  std::vector<std::string> mm_methods;
  uint32_t mm_r1 = 256, mm_c1 = 256, mm_c2 = 32, mm_n = 4, mm_trials = 20;
  uint32_t mm_workers = default_workers;
  int64_t mm_seed = 0;
  std::string mm_a_file, mm_b_file, mm_out = "-", mm_format = "csv";
  matmul_cmd->add_option("--method", mm_methods)->delimiter(',')->check(CLI::IsMember(kMethods));
  matmul_cmd->add_option("--r1", mm_r1);
  matmul_cmd->add_option("--c1", mm_c1);
  matmul_cmd->add_option("--c2", mm_c2);
  matmul_cmd->add_option("--n", mm_n)->check(CLI::Range(2, 16));
  matmul_cmd->add_option("--trials", mm_trials)->check(CLI::PositiveNumber);
  auto* mm_seed_opt =
      matmul_cmd->add_option("--seed", mm_seed, "PRNG seed (required for randomized trials)");
  matmul_cmd->add_option("--a-file", mm_a_file, "left matrix file (file mode)");
  matmul_cmd->add_option("--b-file", mm_b_file, "right matrix file (file mode)");
  matmul_cmd->add_option("--out", mm_out);
  matmul_cmd->add_option("--format", mm_format)->check(CLI::IsMember({"csv", "text"}));
  matmul_cmd->add_option("--workers", mm_workers);

  // cost ------------------------------------------------------------------
  auto* cost = app.add_subcommand("cost", "gate-cost model table");
  std::vector<std::string> cost_designs;
  std::vector<uint32_t> cost_ns;
  std::string cost_file, cost_out = "-", cost_format = "csv";
  cost->add_option("--design", cost_designs)->delimiter(',')->check(CLI::IsMember(kMethods));
  cost->add_option("--n", cost_ns)->delimiter(',')->check(CLI::Range(2, 16));
  cost->add_option("--costs-file", cost_file, "unit-cost config file");
  cost->add_option("--out", cost_out);
  cost->add_option("--format", cost_format)->check(CLI::IsMember({"csv", "text"}));

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("unaryflow");
  for (const std::string& a : args) argv_store.push_back(a);
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  if (show_config) {
    out << app.config_to_str(true, false);
    return 0;
  }

  try {
    if (app.got_subcommand(gen)) {
      GeneratorSpec spec;
      spec.width_log2 = gen_n;
      if (gen_kind == "counter") spec.kind = GeneratorKind::UnaryCounter;
      else if (gen_kind == "lfsr") spec.kind = GeneratorKind::Lfsr;
      else if (gen_kind == "sobol") spec.kind = GeneratorKind::Sobol;
      else spec.kind = GeneratorKind::Halton;
      spec.lfsr_seed = gen_seed;
      spec.lfsr_polynomial = gen_poly;
      spec.sobol_dimension = gen_dim;
      spec.halton_base = gen_base;
      SobolTable table = gen_sobol_file.empty() ? default_sobol_table()
                                                : load_sobol_directions(gen_sobol_file);
      out << generate_stream(UnaryValue(gen_value, gen_n), spec, table).to_string() << '\n';
      return 0;
    }

    if (app.got_subcommand(mul)) {
      Method m = parse_method(mul_method);
      UnaryValue a(mul_a, mul_n), b(mul_b, mul_n);
      if (mul_trace) {
        if (m != Method::ScalableDeterministic)
          throw std::invalid_argument("--trace is only defined for the det datapath");
        write_trace_csv(a, b, out);
        MulResult r = scalable_multiply(a, b);
        err << r.value.numerator << '/' << (uint64_t{1} << mul_n) << '\n';
        err << "error_bits " << r.error_bits << '\n';
        return 0;
      }
      uint64_t pop = method_multiply_popcount(a, b, m, mul_params);
      int64_t ideal = optimal_approximation(a, b, mul_n).numerator;
      out << pop << '/' << (uint64_t{1} << mul_n) << '\n';
      out << "error_bits " << (int64_t(pop) - ideal) << '\n';
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      if (sweep_methods.empty()) sweep_methods = {"det"};
      if (sweep_ns.empty()) sweep_ns = {4};
      std::vector<MaeReport> reports;
      for (Method m : detail::parse_methods(sweep_methods))
        for (uint32_t n : sweep_ns)
          reports.push_back(sweep_multiply_mae(m, n, sweep_params, sweep_workers));
      std::ostringstream csv;
      write_sweep_csv(csv, reports);
      detail::deliver(csv.str(), sweep_out, sweep_format, out);
      return 0;
    }

    if (app.got_subcommand(prog)) {
      if (prog_methods.empty()) prog_methods = {"det"};
      if (prog_observe.empty()) {
        uint32_t full = 1u << prog_n;
        for (uint32_t t = full > 6 ? full - 6 : 1; t <= full; ++t) prog_observe.push_back(t);
      }
      std::vector<ProgressiveReport> reports;
      for (Method m : detail::parse_methods(prog_methods))
        reports.push_back(progressive_mae(m, prog_n, prog_observe, prog_params, prog_workers));
      std::ostringstream csv;
      write_progressive_csv(csv, reports);
      detail::deliver(csv.str(), prog_out, prog_format, out);
      return 0;
    }

    if (app.got_subcommand(funcs)) {
      if (funcs_methods.empty()) funcs_methods = {"det"};
      std::vector<SeriesSpec> specs;
      if (!funcs_spec_file.empty()) {
        specs.push_back(parse_series_file(funcs_spec_file));
      } else {
        if (funcs_functions.empty()) funcs_functions = kFunctions;
        for (const std::string& f : funcs_functions)
          specs.push_back(default_series(parse_series_function(f)));
      }
      std::vector<FunctionReport> reports;
      for (Method m : detail::parse_methods(funcs_methods))
        for (const SeriesSpec& s : specs)
          reports.push_back(function_mae(s, m, funcs_n, MethodParams{}, funcs_workers));
      std::ostringstream csv;
      write_functions_csv(csv, reports);
      detail::deliver(csv.str(), funcs_out, funcs_format, out);
      return 0;
    }

    if (app.got_subcommand(matmul_cmd)) {
      if (!mm_a_file.empty() || !mm_b_file.empty()) {
        if (mm_a_file.empty() || mm_b_file.empty())
          throw std::invalid_argument("file mode needs both --a-file and --b-file");
        SignedWeightMatrix a = load_matrix_file(mm_a_file);
        SignedWeightMatrix b = load_matrix_file(mm_b_file);
        EngineConfig cfg;
        cfg.multiplier = mm_methods.empty() ? Method::ScalableDeterministic
                                            : parse_method(mm_methods.front());
        cfg.resolution_log2 = a.magnitudes.resolution_log2;
        std::vector<SignedValue> result = matmul(a.magnitudes, b, cfg);
        std::ostringstream csv;
        write_result_csv(csv, result, a.magnitudes.rows, b.magnitudes.cols);
        detail::deliver(csv.str(), mm_out, mm_format, out);
        return 0;
      }
      if (mm_seed_opt->count() == 0) {
        err << "matmul: --seed is required for randomized trials\n";
        return 2;
      }
      if (mm_methods.empty()) mm_methods = kMethods;
      MatrixTrialReport report =
          matrix_trials(mm_r1, mm_c1, mm_c2, mm_n, mm_trials, uint64_t(mm_seed),
                        detail::parse_methods(mm_methods), MethodParams{}, mm_workers);
      std::ostringstream csv;
      write_matrix_csv(csv, report);
      detail::deliver(csv.str(), mm_out, mm_format, out);
      return 0;
    }

    if (app.got_subcommand(cost)) {
      if (cost_designs.empty()) cost_designs = kMethods;
      if (cost_ns.empty()) cost_ns = {4, 6, 8};
      ComponentCosts costs =
          cost_file.empty() ? ComponentCosts{} : load_component_costs(cost_file);
      CostTable table = cost_table(detail::parse_methods(cost_designs), cost_ns, costs);
      std::ostringstream csv;
      write_cost_csv(csv, table);
      detail::deliver(csv.str(), cost_out, cost_format, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  err << "error: no subcommand dispatched\n";
  return 2;
}

}  // namespace unaryflow
