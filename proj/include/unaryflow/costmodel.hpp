#pragma once
// Component-count area model. Unit costs are NAND-equivalents and are pure
// configuration: the paper-style claims this backs are relative (ordering,
// normalization to the Sobol design, scaling trends), never absolute area.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "unaryflow/detmul.hpp"

namespace unaryflow {

struct ComponentCosts {
  double register_bit = 4;
  double counter_bit = 6;
  double comparator_bit = 5;
  double mux2 = 3;
  double xor_gate = 3;
  double and_gate = 2;
  double not_gate = 1;
  double direction_vector_cell = 4;

  double unit(const std::string& kind) const {
    if (kind == "register_bit") return register_bit;
    if (kind == "counter_bit") return counter_bit;
    if (kind == "comparator_bit") return comparator_bit;
    if (kind == "mux2") return mux2;
    if (kind == "xor") return xor_gate;
    if (kind == "and") return and_gate;
    if (kind == "not") return not_gate;
    if (kind == "direction_vector_cell") return direction_vector_cell;
    throw std::invalid_argument("ComponentCosts: unknown kind " + kind);
  }

  void set(const std::string& kind, double v) {
    if (v <= 0) throw std::invalid_argument("ComponentCosts: unit cost must be positive");
    if (kind == "register_bit") register_bit = v;
    else if (kind == "counter_bit") counter_bit = v;
    else if (kind == "comparator_bit") comparator_bit = v;
    else if (kind == "mux2") mux2 = v;
    else if (kind == "xor") xor_gate = v;
    else if (kind == "and") and_gate = v;
    else if (kind == "not") not_gate = v;
    else if (kind == "direction_vector_cell") direction_vector_cell = v;
    else throw std::invalid_argument("ComponentCosts: unknown kind " + kind);
  }
};

// key=value lines, '#' comments
inline ComponentCosts load_component_costs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_component_costs: cannot open " + path);
  ComponentCosts c;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key); trim(val);
    if (!key.empty()) c.set(key, std::stod(val));
  }
  return c;
}

struct GateCostEstimate {
  Method design = Method::Sobol;
  uint32_t n = 0;
  std::map<std::string, double> tally;  // component kind -> count
  double total = 0;
  double relative_pct = 0;  // vs the Sobol pair design at the same n
};

namespace detail {

inline uint32_t halton_digits(uint32_t n, uint32_t base) {
  uint32_t d = 0;
  uint64_t pow = 1, limit = uint64_t{1} << n;
  while (pow < limit) { pow *= base; ++d; }
  return d;
}

// component counts for a full two-operand multiply datapath
inline std::map<std::string, double> component_tally(Method design, uint32_t n) {
  std::map<std::string, double> t;
  switch (design) {
    case Method::Lfsr: {
      uint32_t taps = uint32_t(std::popcount(lfsr_default_polynomial(n)));
      t["register_bit"] = 2.0 * n;             // two shift registers
      t["xor"] = 2.0 * (taps - 1);             // feedback network
      t["comparator_bit"] = 2.0 * n;
      t["and"] = 1;
      break;
    }
    case Method::Sobol: {
      t["counter_bit"] = 2.0 * n;
      t["direction_vector_cell"] = 2.0 * n * n;  // per-dimension vector array
      t["xor"] = 2.0 * n;                        // gray-code accumulation
      t["comparator_bit"] = 2.0 * n;
      t["and"] = 1;
      break;
    }
    case Method::Halton: {
      uint32_t digits = halton_digits(n, 2) + halton_digits(n, 3);
      t["counter_bit"] = 2.0 * digits;  // ~2 bits per base-b digit counter
      t["mux2"] = 2.0 * n;              // digit-reversal scaling network
      t["xor"] = 2.0 * n;
      t["comparator_bit"] = 2.0 * n;
      t["and"] = 1;
      break;
    }
    case Method::ScalableDeterministic: {
      uint32_t ra = n - downscale_shift_a(n), rb = n - downscale_shift_b(n);
      double sched = double((1u << ra) + (1u << rb));  // flip-schedule bits
      t["register_bit"] = 2.0 * n + sched;  // operand + error registers + schedules
      t["counter_bit"] = 2.0 * n;           // stage-2 index + stage-1 inv counters
      t["comparator_bit"] = 1.0 * n;        // downscaled comparators (rA + rB bits)
      t["mux2"] = sched;
      t["xor"] = 2;                         // flip injection
      t["and"] = 3;                         // output + schedule control
      t["not"] = 2;
      break;
    }
  }
  return t;
}

inline double tally_total(const std::map<std::string, double>& t, const ComponentCosts& c) {
  double sum = 0;
  for (const auto& [kind, count] : t) sum += c.unit(kind) * count;
  return sum;
}

}  // namespace detail

inline GateCostEstimate estimate(Method design, uint32_t n, const ComponentCosts& costs = {}) {
  if (n < 2) throw std::invalid_argument("estimate: n must be >= 2");
  GateCostEstimate e;
  e.design = design;
  e.n = n;
  e.tally = detail::component_tally(design, n);
  e.total = detail::tally_total(e.tally, costs);
  double sobol = detail::tally_total(detail::component_tally(Method::Sobol, n), costs);
  e.relative_pct = 100.0 * e.total / sobol;
  return e;
}

struct CostTable {
  std::vector<GateCostEstimate> rows;  // design-major, then n ascending
};

inline CostTable cost_table(const std::vector<Method>& designs,
                            const std::vector<uint32_t>& n_values,
                            const ComponentCosts& costs = {}) {
  if (designs.empty() || n_values.empty())
    throw std::invalid_argument("cost_table: empty inputs");
  CostTable t;
  for (Method d : designs)
    for (uint32_t n : n_values) t.rows.push_back(estimate(d, n, costs));
  return t;
}

// Coordinate-descent fit of unit costs to target relative percentages
// (multiplicative steps, deterministic). Reported residuals are the point:
// published percentages come from an unknown synthesis library, so the fit
// is a calibration aid, not an acceptance requirement.
struct CalibrationTarget {
  Method design;
  uint32_t n;
  double target_pct;
};

inline double calibration_residual(const std::vector<CalibrationTarget>& targets,
                                   const ComponentCosts& costs) {
  double sum = 0;
  for (const CalibrationTarget& t : targets) {
    double d = estimate(t.design, t.n, costs).relative_pct - t.target_pct;
    sum += d * d;
  }
  return sum;
}

inline ComponentCosts fit_unit_costs(const std::vector<CalibrationTarget>& targets,
                                     ComponentCosts start = {}, int rounds = 8) {
  static const char* kKinds[] = {"register_bit", "counter_bit", "comparator_bit", "mux2",
                                 "xor", "and", "not", "direction_vector_cell"};
  static const double kSteps[] = {0.5, 0.8, 0.9, 1.1, 1.25, 2.0};
  ComponentCosts best = start;
  double best_r = calibration_residual(targets, best);
  for (int round = 0; round < rounds; ++round) {
    for (const char* kind : kKinds) {
      for (double step : kSteps) {
        ComponentCosts trial = best;
        trial.set(kind, best.unit(kind) * step);
        double r = calibration_residual(targets, trial);
        if (r < best_r) { best_r = r; best = trial; }
      }
    }
  }
  return best;
}

inline void write_cost_csv(std::ostream& os, const CostTable& table) {
  os << "design,n,total_nand,relative_pct\n";
  char buf[64];
  for (const GateCostEstimate& e : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%u,%.4f,%.4f\n", method_name(e.design), e.n, e.total,
                  e.relative_pct);
    os << buf;
  }
}

}  // namespace unaryflow
