#pragma once
// Evaluation harness: exhaustive multiply sweeps, progressive (truncated
// observation) accuracy, function-approximation error, and matrix trials.
// All accumulators are exact integers, so results are identical for any
// worker partitioning; the CSV emitters are byte-stable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "unaryflow/detmul.hpp"
#include "unaryflow/funcs.hpp"
#include "unaryflow/matrix.hpp"
#include "unaryflow/streams.hpp"

namespace unaryflow {

namespace detail {

// contiguous chunks over [0, total); fn(begin, end, chunk_index)
template <typename Fn>
void run_partitioned(uint64_t total, uint32_t workers, Fn&& fn) {
  if (workers < 1) workers = 1;
  if (uint64_t(workers) > total && total > 0) workers = uint32_t(total);
  if (workers <= 1) {
    fn(uint64_t{0}, total, uint32_t{0});
    return;
  }
  std::vector<std::thread> pool;
  uint64_t chunk = (total + workers - 1) / workers;
  for (uint32_t w = 0; w < workers; ++w) {
    uint64_t begin = uint64_t(w) * chunk;
    uint64_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (std::thread& t : pool) t.join();
}

inline std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

// MAE definition used everywhere: operand/output values live in [0,1];
// mae_pct = 100 * mean |observed - ideal|. The ideal is the optimal
// approximation at the output resolution, not the full-precision product.
struct MaeReport {
  Method method = Method::ScalableDeterministic;
  uint32_t n = 0;
  uint64_t abs_err_bits = 0;  // sum of |error_bits| over all cases
  std::map<uint32_t, uint64_t> error_histogram;
  uint64_t cases = 0;
  MethodParams params;

  double mae_pct() const {
    return 100.0 * double(abs_err_bits) / (double(uint64_t{1} << n) * double(cases));
  }
  uint64_t histogram_at(uint32_t k) const {
    auto it = error_histogram.find(k);
    return it == error_histogram.end() ? 0 : it->second;
  }
};

inline MaeReport sweep_multiply_mae(Method method, uint32_t n, const MethodParams& params = {},
                                    uint32_t workers = 1) {
  uint64_t span = (uint64_t{1} << n) + 1;
  uint64_t total = span * span;
  std::vector<uint64_t> sums(workers ? workers : 1, 0);
  std::vector<std::map<uint32_t, uint64_t>> hists(workers ? workers : 1);
  detail::run_partitioned(total, workers, [&](uint64_t begin, uint64_t end, uint32_t w) {
    uint64_t sum = 0;
    std::map<uint32_t, uint64_t> hist;
    for (uint64_t p = begin; p < end; ++p) {
      UnaryValue a(uint32_t(p / span), n), b(uint32_t(p % span), n);
      int64_t pop = method_multiply_popcount(a, b, method, params);
      int64_t ideal = optimal_approximation(a, b, n).numerator;
      uint32_t e = uint32_t(pop > ideal ? pop - ideal : ideal - pop);
      sum += e;
      ++hist[e];
    }
    sums[w] = sum;
    hists[w] = std::move(hist);
  });
  MaeReport r;
  r.method = method;
  r.n = n;
  r.cases = total;
  r.params = params;
  for (uint64_t s : sums) r.abs_err_bits += s;
  for (const auto& h : hists)
    for (const auto& [k, c] : h) r.error_histogram[k] += c;
  return r;
}

// ---------------------------------------------------------------------------

struct ProgressiveRow {
  uint32_t observe_bits = 0;
  uint64_t err_numerator = 0;  // sum over cases of |pop_t * 2^n - ideal * t|
  double mae_pct = 0;          // 100 * err_numerator / (t * 2^n * cases)
};

struct ProgressiveReport {
  Method method = Method::ScalableDeterministic;
  uint32_t n = 0;
  uint64_t cases = 0;
  std::vector<ProgressiveRow> rows;
  MethodParams params;
};

// Value after t observed cycles is popcount(first t bits) / t, still scored
// against the full-resolution ideal approximation.
inline ProgressiveReport progressive_mae(Method method, uint32_t n,
                                         const std::vector<uint32_t>& observe_lengths,
                                         const MethodParams& params = {}, uint32_t workers = 1) {
  uint64_t period = uint64_t{1} << n;
  for (uint32_t t : observe_lengths)
    if (t == 0 || t > period)
      throw std::invalid_argument("progressive_mae: observe length out of range");
  uint64_t span = period + 1;
  uint64_t total = span * span;
  std::vector<std::vector<uint64_t>> sums(workers ? workers : 1,
                                          std::vector<uint64_t>(observe_lengths.size(), 0));
  detail::run_partitioned(total, workers, [&](uint64_t begin, uint64_t end, uint32_t w) {
    std::vector<uint64_t>& sum = sums[w];
    for (uint64_t p = begin; p < end; ++p) {
      UnaryValue a(uint32_t(p / span), n), b(uint32_t(p % span), n);
      BitStream s = method_multiply_stream(a, b, method, params);
      uint64_t ideal = optimal_approximation(a, b, n).numerator;
      for (size_t k = 0; k < observe_lengths.size(); ++k) {
        uint64_t t = observe_lengths[k];
        uint64_t lhs = s.popcount_prefix(t) * period, rhs = ideal * t;
        sum[k] += lhs > rhs ? lhs - rhs : rhs - lhs;
      }
    }
  });
  ProgressiveReport r;
  r.method = method;
  r.n = n;
  r.cases = total;
  r.params = params;
  for (size_t k = 0; k < observe_lengths.size(); ++k) {
    ProgressiveRow row;
    row.observe_bits = observe_lengths[k];
    for (const auto& sum : sums) row.err_numerator += sum[k];
    row.mae_pct = 100.0 * double(row.err_numerator) /
                  (double(observe_lengths[k]) * double(period) * double(r.cases));
    r.rows.push_back(row);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct FunctionReport {
  SeriesFunction function = SeriesFunction::ExpNeg;
  Method method = Method::ScalableDeterministic;
  uint32_t n = 8;
  uint32_t degree = 0;
  uint64_t abs_err_numerator = 0;  // at resolution n, vs rounded true value
  uint64_t cases = 0;
  MethodParams params;

  double mae_pct() const {
    return 100.0 * double(abs_err_numerator) / (double(uint64_t{1} << n) * double(cases));
  }
};

inline FunctionReport function_mae(const SeriesSpec& spec, Method method, uint32_t n = 8,
                                   const MethodParams& params = {}, uint32_t workers = 1) {
  uint64_t span = (uint64_t{1} << n) + 1;
  std::vector<uint64_t> sums(workers ? workers : 1, 0);
  detail::run_partitioned(span, workers, [&](uint64_t begin, uint64_t end, uint32_t w) {
    uint64_t sum = 0;
    for (uint64_t k = begin; k < end; ++k) {
      UnaryValue x(uint32_t(k), n);
      uint32_t out = maclaurin_eval(spec, x, method, params).numerator;
      double fx = true_function_value(spec.function, x.value());
      int64_t ideal = std::llround(fx * double(uint64_t{1} << n));
      int64_t d = int64_t(out) - ideal;
      sum += uint64_t(d < 0 ? -d : d);
    }
    sums[w] = sum;
  });
  FunctionReport r;
  r.function = spec.function;
  r.method = method;
  r.n = n;
  r.degree = spec.degree;
  r.cases = span;
  r.params = params;
  for (uint64_t s : sums) r.abs_err_numerator += s;
  return r;
}

// ---------------------------------------------------------------------------

struct MatrixTrialRow {
  Method method = Method::ScalableDeterministic;
  uint64_t err_numerator = 0;  // sum of |obs*2^n - exact| over elements/trials
  double mae_pct = 0;
};

struct MatrixTrialReport {
  uint32_t r1 = 0, c1 = 0, c2 = 0;
  uint32_t n = 0;
  uint32_t trials = 0;
  uint64_t seed = 0;
  std::vector<MatrixTrialRow> rows;
  MethodParams params;
};

// Element error is normalized by the inner dimension so entries stay in
// value units ([0,1] per term) regardless of matrix shape:
//   mae_pct = 100 * sum|obs - exact| / (K * elements * trials)
// with the sums kept as exact integers at resolution 2n.
inline MatrixTrialReport matrix_trials(uint32_t r1, uint32_t c1, uint32_t c2, uint32_t n,
                                       uint32_t trials, uint64_t seed,
                                       const std::vector<Method>& methods,
                                       const MethodParams& params = {}, uint32_t workers = 1) {
  if (trials < 1) throw std::invalid_argument("matrix_trials: need >= 1 trial");
  MatrixTrialReport report;
  report.r1 = r1; report.c1 = c1; report.c2 = c2;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  report.params = params;
  for (Method m : methods) {
    ProductTable table(m, n, params);
    std::vector<uint64_t> sums(workers ? workers : 1, 0);
    detail::run_partitioned(trials, workers, [&](uint64_t begin, uint64_t end, uint32_t w) {
      uint64_t sum = 0;
      for (uint64_t trial = begin; trial < end; ++trial) {
        std::mt19937_64 gen(seed + trial);
        FixedMatrix a = random_fixed_matrix(r1, c1, n, gen);
        FixedMatrix b = random_fixed_matrix(c1, c2, n, gen);
        for (uint32_t i = 0; i < r1; ++i)
          for (uint32_t c = 0; c < c2; ++c) {
            uint64_t obs = 0;   // sum of per-term popcounts, value obs/2^n
            uint64_t exact = 0; // exact numerator at resolution 2n
            for (uint32_t k = 0; k < c1; ++k) {
              uint32_t av = a.at(i, k), bv = b.at(k, c);
              obs += table.popcount(av, bv);
              exact += uint64_t(av) * bv;
            }
            uint64_t lhs = obs << n;
            sum += lhs > exact ? lhs - exact : exact - lhs;
          }
      }
      sums[w] += sum;
    });
    MatrixTrialRow row;
    row.method = m;
    for (uint64_t s : sums) row.err_numerator += s;
    row.mae_pct = 100.0 * double(row.err_numerator) /
                  (double(uint64_t{1} << (2 * n)) * double(c1) * double(r1) * double(c2) *
                   double(trials));
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emitters. Every report opens with `# key=value` lines echoing the exact
// configuration (worker count deliberately excluded: it must not change
// output). Percentages are fixed 4-decimal.

namespace detail {

inline void echo_common(std::ostream& os) {
  os << "# mae=100*mean_abs_value_error\n";
  os << "# error_reference=optimal_approximation_round_half_up\n";
}

inline void echo_method_params(std::ostream& os, Method m, uint32_t n, const MethodParams& p) {
  switch (m) {
    case Method::ScalableDeterministic:
      break;
    case Method::Lfsr:
      os << "# lfsr_polynomial=" << (p.lfsr_polynomial ? p.lfsr_polynomial
                                                       : lfsr_default_polynomial(n))
         << "\n# lfsr_seeds=" << p.lfsr_seed_a << ',' << p.lfsr_seed_b << '\n';
      break;
    case Method::Sobol:
      os << "# sobol_dims=" << p.sobol_dim_a << ',' << p.sobol_dim_b << '\n';
      break;
    case Method::Halton:
      os << "# halton_bases=" << p.halton_base_a << ',' << p.halton_base_b << '\n';
      break;
  }
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const std::vector<MaeReport>& reports) {
  detail::echo_common(os);
  for (const MaeReport& r : reports) detail::echo_method_params(os, r.method, r.n, r.params);
  os << "method,n,mae_pct,err0,err1,err2,cases\n";
  for (const MaeReport& r : reports) {
    os << method_name(r.method) << ',' << r.n << ',' << detail::format_pct(r.mae_pct()) << ','
       << r.histogram_at(0) << ',' << r.histogram_at(1) << ',' << r.histogram_at(2) << ','
       << r.cases << '\n';
  }
}

inline void write_progressive_csv(std::ostream& os, const std::vector<ProgressiveReport>& reports) {
  detail::echo_common(os);
  for (const ProgressiveReport& r : reports) detail::echo_method_params(os, r.method, r.n, r.params);
  os << "method,n,observe_bits,mae_pct\n";
  for (const ProgressiveReport& r : reports)
    for (const ProgressiveRow& row : r.rows)
      os << method_name(r.method) << ',' << r.n << ',' << row.observe_bits << ','
         << detail::format_pct(row.mae_pct) << '\n';
}

inline void write_functions_csv(std::ostream& os, const std::vector<FunctionReport>& reports) {
  detail::echo_common(os);
  bool seen[4] = {false, false, false, false};
  for (const FunctionReport& r : reports) {
    if (!seen[int(r.method)]) detail::echo_method_params(os, r.method, r.n, r.params);
    seen[int(r.method)] = true;
  }
  os << "function,method,n,degree,mae_pct\n";
  for (const FunctionReport& r : reports)
    os << series_name(r.function) << ',' << method_name(r.method) << ',' << r.n << ','
       << r.degree << ',' << detail::format_pct(r.mae_pct()) << '\n';
}

inline void write_matrix_csv(std::ostream& os, const MatrixTrialReport& report) {
  detail::echo_common(os);
  os << "# seed=" << report.seed << '\n';
  for (const MatrixTrialRow& r : report.rows)
    detail::echo_method_params(os, r.method, report.n, report.params);
  os << "method,n,r1,c1,c2,trials,mae_pct\n";
  for (const MatrixTrialRow& r : report.rows)
    os << method_name(r.method) << ',' << report.n << ',' << report.r1 << ',' << report.c1 << ','
       << report.c2 << ',' << report.trials << ',' << detail::format_pct(r.mae_pct) << '\n';
}

// plain-text table rendering of any already-formatted CSV payload
inline void write_text_table(std::ostream& os, const std::string& csv) {
  std::vector<std::vector<std::string>> grid;
  std::vector<size_t> widths;
  std::string line;
  std::istringstream in(csv);
  std::vector<std::string> comments;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') { comments.push_back(line); continue; }
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (row.empty()) continue;
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    grid.push_back(std::move(row));
  }
  for (const std::string& c : comments) os << c << '\n';
  for (const auto& row : grid) {
    for (size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size()) os << std::string(widths[i] - row[i].size() + 2, ' ');
    }
    os << '\n';
  }
}

}  // namespace unaryflow
