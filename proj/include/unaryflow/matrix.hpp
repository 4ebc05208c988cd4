#pragma once
// Hybrid matrix dot-product engine: unary multiplies per term, exact binary
// accumulation (separate positive/negative counters for signed weights).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "unaryflow/detmul.hpp"
#include "unaryflow/streams.hpp"

namespace unaryflow {

struct FixedMatrix {
  uint32_t rows = 0, cols = 0;
  uint32_t resolution_log2 = 0;
  std::vector<uint32_t> numerators;  // row-major

  uint32_t at(uint32_t r, uint32_t c) const { return numerators[size_t(r) * cols + c]; }

  void validate() const {
    if (rows == 0 || cols == 0) throw std::invalid_argument("FixedMatrix: empty dims");
    if (numerators.size() != size_t(rows) * cols)
      throw std::invalid_argument("FixedMatrix: element count mismatch");
    for (uint32_t v : numerators)
      if (v > (1u << resolution_log2))
        throw std::invalid_argument("FixedMatrix: numerator exceeds denominator");
  }
};

struct SignedWeightMatrix {
  FixedMatrix magnitudes;
  std::vector<int8_t> signs;  // +1 / -1, row-major

  void validate() const {
    magnitudes.validate();
    if (signs.size() != magnitudes.numerators.size())
      throw std::invalid_argument("SignedWeightMatrix: sign count mismatch");
    for (int8_t s : signs)
      if (s != 1 && s != -1) throw std::invalid_argument("SignedWeightMatrix: bad sign");
  }
};

struct EngineConfig {
  Method multiplier = Method::ScalableDeterministic;
  uint32_t comparator_count = 1;
  uint32_t resolution_log2 = 4;
  MethodParams params;
};

// exact signed fixed-point result, numerator / 2^resolution_log2
struct SignedValue {
  int64_t numerator = 0;
  uint32_t resolution_log2 = 0;
  double value() const { return double(numerator) / double(uint64_t{1} << resolution_log2); }
};

inline SignedValue dot_product(const std::vector<UnaryValue>& x,
                               const std::vector<UnaryValue>& w_magnitudes,
                               const std::vector<int8_t>& w_signs,
                               const EngineConfig& config) {
  if (x.size() != w_magnitudes.size() || x.size() != w_signs.size())
    throw std::invalid_argument("dot_product: length mismatch");
  uint32_t n = config.resolution_log2;
  uint64_t pos = 0, neg = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    if (x[k].resolution_log2 != n || w_magnitudes[k].resolution_log2 != n)
      throw std::invalid_argument("dot_product: resolution mismatch");
    uint64_t p = method_multiply_popcount(x[k], w_magnitudes[k], config.multiplier, config.params);
    if (w_signs[k] >= 0) pos += p; else neg += p;
  }
  return SignedValue{int64_t(pos) - int64_t(neg), n};
}

// Memoized per-pair popcounts; matmul touches every operand pair many times.
class ProductTable {
 public:
  ProductTable(Method m, uint32_t n, const MethodParams& p) : n_(n) {
    uint32_t span = (1u << n) + 1;
    table_.resize(size_t(span) * span);
    for (uint32_t a = 0; a < span; ++a)
      for (uint32_t b = 0; b < span; ++b)
        table_[size_t(a) * span + b] =
            method_multiply_popcount(UnaryValue(a, n), UnaryValue(b, n), m, p);
  }

  uint32_t popcount(uint32_t a_num, uint32_t b_num) const {
    return table_[size_t(a_num) * ((1u << n_) + 1) + b_num];
  }

 private:
  uint32_t n_;
  std::vector<uint32_t> table_;
};

inline std::vector<SignedValue> matmul(const FixedMatrix& a, const SignedWeightMatrix& b,
                                       const EngineConfig& config) {
  a.validate();
  b.validate();
  const FixedMatrix& bm = b.magnitudes;
  if (a.cols != bm.rows) throw std::invalid_argument("matmul: dimension mismatch");
  if (a.resolution_log2 != config.resolution_log2 || bm.resolution_log2 != config.resolution_log2)
    throw std::invalid_argument("matmul: resolution mismatch");
  uint32_t n = config.resolution_log2;
  ProductTable table(config.multiplier, n, config.params);
  std::vector<SignedValue> out(size_t(a.rows) * bm.cols);
  for (uint32_t i = 0; i < a.rows; ++i) {
    for (uint32_t c = 0; c < bm.cols; ++c) {
      int64_t pos = 0, neg = 0;
      for (uint32_t k = 0; k < a.cols; ++k) {
        uint32_t p = table.popcount(a.at(i, k), bm.at(k, c));
        if (b.signs[size_t(k) * bm.cols + c] >= 0) pos += p; else neg += p;
      }
      out[size_t(i) * bm.cols + c] = SignedValue{pos - neg, n};
    }
  }
  return out;
}

inline std::vector<SignedValue> matmul(const FixedMatrix& a, const FixedMatrix& b,
                                       const EngineConfig& config) {
  SignedWeightMatrix sb{b, std::vector<int8_t>(b.numerators.size(), 1)};
  return matmul(a, sb, config);
}

// exact rational product (numerators at resolution 2n), the error oracle
inline std::vector<int64_t> exact_matmul_numerators(const FixedMatrix& a,
                                                    const SignedWeightMatrix& b) {
  const FixedMatrix& bm = b.magnitudes;
  if (a.cols != bm.rows) throw std::invalid_argument("exact_matmul: dimension mismatch");
  std::vector<int64_t> out(size_t(a.rows) * bm.cols);
  for (uint32_t i = 0; i < a.rows; ++i)
    for (uint32_t c = 0; c < bm.cols; ++c) {
      int64_t acc = 0;
      for (uint32_t k = 0; k < a.cols; ++k)
        acc += int64_t(b.signs[size_t(k) * bm.cols + c]) * a.at(i, k) * bm.at(k, c);
      out[size_t(i) * bm.cols + c] = acc;
    }
  return out;
}

// Every operand stream needs exclusive use of a comparator; with C comparators
// the job's 2*K stream demands per output element are served in waves, one
// pipeline interval each.
struct LatencyEstimate {
  uint64_t streams_needed = 0;
  uint64_t waves = 0;
  uint64_t cycles = 0;
};

inline LatencyEstimate latency_model(uint32_t a_rows, uint32_t a_cols, uint32_t b_cols,
                                     const EngineConfig& config) {
  if (config.comparator_count < 1) throw std::invalid_argument("latency_model: need a comparator");
  LatencyEstimate e;
  e.streams_needed = 2 * uint64_t(a_rows) * a_cols * b_cols;
  e.waves = (e.streams_needed + config.comparator_count - 1) / config.comparator_count;
  e.cycles = e.waves * pipeline_model(1, config.resolution_log2).steady_state_interval;
  return e;
}

// ---------------------------------------------------------------------------
// File format: `rows cols resolution_log2` header, row-major numerators, and
// for weight matrices one trailing sign token (+/-) per element.

inline void write_matrix_file(std::ostream& os, const FixedMatrix& m,
                              const std::vector<int8_t>* signs = nullptr) {
  os << m.rows << ' ' << m.cols << ' ' << m.resolution_log2 << '\n';
  for (uint32_t r = 0; r < m.rows; ++r) {
    for (uint32_t c = 0; c < m.cols; ++c)
      os << m.at(r, c) << (c + 1 < m.cols ? ' ' : '\n');
  }
  if (signs) {
    for (size_t k = 0; k < signs->size(); ++k)
      os << ((*signs)[k] >= 0 ? '+' : '-') << (k + 1 < signs->size() ? ' ' : '\n');
  }
}

inline SignedWeightMatrix load_matrix_file(std::istream& is, const std::string& context) {
  SignedWeightMatrix w;
  FixedMatrix& m = w.magnitudes;
  if (!(is >> m.rows >> m.cols >> m.resolution_log2))
    throw std::runtime_error("matrix file: bad header in " + context);
  m.numerators.resize(size_t(m.rows) * m.cols);
  for (uint32_t& v : m.numerators)
    if (!(is >> v)) throw std::runtime_error("matrix file: short element data in " + context);
  w.signs.assign(m.numerators.size(), 1);
  std::string tok;
  if (is >> tok) {
    for (size_t k = 0; k < w.signs.size(); ++k) {
      if (k > 0 && !(is >> tok))
        throw std::runtime_error("matrix file: short sign data in " + context);
      if (tok != "+" && tok != "-")
        throw std::runtime_error("matrix file: bad sign token '" + tok + "' in " + context);
      w.signs[k] = (tok == "+") ? 1 : -1;
    }
  }
  w.validate();
  return w;
}

inline SignedWeightMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("matrix file: cannot open " + path);
  return load_matrix_file(in, path);
}

// decimal with 8 fractional places, round-half-up on the sub-ulp remainder
inline std::string format_signed_fixed(int64_t numerator, uint32_t res_log2) {
  bool neg = numerator < 0;
  uint64_t mag = neg ? uint64_t(-numerator) : uint64_t(numerator);
  uint64_t den = uint64_t{1} << res_log2;
  uint64_t ip = mag / den, rem = mag % den;
  uint64_t frac = div_round_half_up(rem * 100000000ull, den);
  if (frac == 100000000ull) { frac = 0; ++ip; }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%08llu", neg ? "-" : "",
                (unsigned long long)ip, (unsigned long long)frac);
  return buf;
}

inline void write_result_csv(std::ostream& os, const std::vector<SignedValue>& results,
                             uint32_t rows, uint32_t cols) {
  if (results.size() != size_t(rows) * cols)
    throw std::invalid_argument("write_result_csv: shape mismatch");
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c)
      os << format_signed_fixed(results[size_t(r) * cols + c].numerator,
                                results[size_t(r) * cols + c].resolution_log2)
         << (c + 1 < cols ? ',' : '\n');
}

inline FixedMatrix random_fixed_matrix(uint32_t rows, uint32_t cols, uint32_t n,
                                       std::mt19937_64& gen) {
  FixedMatrix m{rows, cols, n, {}};
  m.numerators.resize(size_t(rows) * cols);
  uint32_t span = (1u << n) + 1;  // numerators 0..2^n inclusive
  for (uint32_t& v : m.numerators) v = uint32_t(gen() % span);
  return m;
}

}  // namespace unaryflow
