#pragma once
// Stochastic-logic primitives (AND multiply, MUX scaled add, NAND stage) and
// Maclaurin-series evaluators for e^(-x), sin x, log(1+x), sigmoid built as
// chains of unary multiplies and complements at resolution 2^8.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unaryflow/detmul.hpp"
#include "unaryflow/streams.hpp"

namespace unaryflow {

inline BitStream and_multiply(const BitStream& sa, const BitStream& sb) {
  if (sa.length() != sb.length())
    throw std::invalid_argument("and_multiply: length mismatch");
  BitStream out(sa.length());
  for (size_t t = 0; t < sa.length(); ++t) out.set_bit(t, sa.bit(t) && sb.bit(t));
  return out;
}

inline BitStream mux_scaled_add(const BitStream& sa, const BitStream& sb, const BitStream& sel) {
  if (sa.length() != sb.length() || sa.length() != sel.length())
    throw std::invalid_argument("mux_scaled_add: length mismatch");
  BitStream out(sa.length());
  for (size_t t = 0; t < sa.length(); ++t)
    out.set_bit(t, sel.bit(t) ? sa.bit(t) : sb.bit(t));
  return out;
}

inline BitStream nand_stage(const BitStream& sa, const BitStream& sb) {
  if (sa.length() != sb.length())
    throw std::invalid_argument("nand_stage: length mismatch");
  BitStream out(sa.length());
  for (size_t t = 0; t < sa.length(); ++t) out.set_bit(t, !(sa.bit(t) && sb.bit(t)));
  return out;
}

// ---------------------------------------------------------------------------

enum class SeriesFunction { ExpNeg, Sin, Log1p, Sigmoid };

inline const char* series_name(SeriesFunction f) {
  switch (f) {
    case SeriesFunction::ExpNeg: return "expneg";
    case SeriesFunction::Sin: return "sin";
    case SeriesFunction::Log1p: return "log1p";
    case SeriesFunction::Sigmoid: return "sigmoid";
  }
  return "?";
}

inline SeriesFunction parse_series_function(std::string_view s) {
  if (s == "expneg") return SeriesFunction::ExpNeg;
  if (s == "sin") return SeriesFunction::Sin;
  if (s == "log1p") return SeriesFunction::Log1p;
  if (s == "sigmoid") return SeriesFunction::Sigmoid;
  throw std::invalid_argument("unknown function: " + std::string(s));
}

inline double true_function_value(SeriesFunction f, double x) {
  switch (f) {
    case SeriesFunction::ExpNeg: return std::exp(-x);
    case SeriesFunction::Sin: return std::sin(x);
    case SeriesFunction::Log1p: return std::log1p(x);
    case SeriesFunction::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  return 0.0;
}

// Chain constants quantized to 1/2^8. `degree` is the series truncation depth
// (reporting metadata; the coefficient list drives evaluation).
struct SeriesSpec {
  SeriesFunction function = SeriesFunction::ExpNeg;
  uint32_t degree = 0;
  std::vector<UnaryValue> coefficients;
};

inline SeriesSpec default_series(SeriesFunction f) {
  auto c = [](uint32_t num) { return UnaryValue(num, 8); };
  switch (f) {
    case SeriesFunction::ExpNeg:
      // 1 - x(1 - x/2(1 - x/3(1 - x/4(1 - x/5)))), constants 1/i
      return {f, 5, {c(256), c(128), c(85), c(64), c(51)}};
    case SeriesFunction::Sin:
      // x(1 - x^2/6(1 - x^2/20)), odd terms through x^5
      return {f, 3, {c(43), c(13)}};
    case SeriesFunction::Log1p:
      // x(1 - x/2(1 - 2x/3(1 - 3x/4(1 - 4x/5))))
      return {f, 5, {c(128), c(171), c(192), c(205)}};
    case SeriesFunction::Sigmoid:
      // 1/2 + x/4(1 - x^2/12(1 - x^2/10))
      return {f, 5, {c(21), c(26)}};
  }
  throw std::invalid_argument("default_series: bad function");
}

inline void validate_series(const SeriesSpec& spec) {
  if (spec.degree < 1) throw std::invalid_argument("series spec: degree must be >= 1");
  if (spec.coefficients.empty()) throw std::invalid_argument("series spec: no coefficients");
  for (const UnaryValue& c : spec.coefficients)
    if (c.resolution_log2 != 8)
      throw std::invalid_argument("series spec: coefficients must be at resolution 2^8");
}

// Function-spec file: key=value lines (function, degree, coefficients as
// space- or comma-separated numerators at resolution 2^8).
inline SeriesSpec parse_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_series_file: cannot open " + path);
  SeriesSpec spec;
  bool saw_function = false;
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
    if (key == "function") {
      spec.function = parse_series_function(val);
      saw_function = true;
    } else if (key == "degree") {
      spec.degree = uint32_t(std::stoul(val));
    } else if (key == "coefficients") {
      for (char& ch : val) if (ch == ',') ch = ' ';
      std::istringstream vs(val);
      uint32_t num;
      while (vs >> num) spec.coefficients.emplace_back(num, 8);
    } else {
      throw std::runtime_error("parse_series_file: unknown key '" + key + "' in " + path);
    }
  }
  if (!saw_function) throw std::runtime_error("parse_series_file: missing function in " + path);
  validate_series(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Chain evaluation. Every stage is one unary multiply (per method) feeding a
// NAND-style complement; correlated intermediate streams would collapse the
// AND toward min, so baseline stages draw from per-stage source parameters.

namespace detail {

inline MethodParams stage_params(const MethodParams& base, uint32_t stage, uint32_t n) {
  static constexpr uint32_t kPrimes[22] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
  MethodParams p = base;
  uint32_t states = (1u << n) - 1;  // nonzero LFSR states
  p.lfsr_seed_a = (base.lfsr_seed_a - 1 + 2 * stage) % states + 1;
  p.lfsr_seed_b = (base.lfsr_seed_b - 1 + 2 * stage) % states + 1;
  p.sobol_dim_a = (base.sobol_dim_a + 2 * stage) % 8;
  p.sobol_dim_b = (base.sobol_dim_b + 2 * stage) % 8;
  p.halton_base_a = kPrimes[(2 * stage) % 22];
  p.halton_base_b = kPrimes[(2 * stage + 1) % 22];
  return p;
}

class ChainMultiplier {
 public:
  ChainMultiplier(Method m, uint32_t n, const MethodParams& base)
      : method_(m), n_(n), base_(base) {}

  uint32_t mul(uint32_t a_num, uint32_t b_num) {
    MethodParams p = stage_params(base_, stage_++, n_);
    return method_multiply_popcount(UnaryValue(a_num, n_), UnaryValue(b_num, n_), method_, p);
  }

 private:
  Method method_;
  uint32_t n_;
  MethodParams base_;
  uint32_t stage_ = 0;
};

}  // namespace detail

inline UnaryValue maclaurin_eval(const SeriesSpec& spec, const UnaryValue& x, Method method,
                                 const MethodParams& params = {}) {
  validate_series(spec);
  if (x.resolution_log2 != 8)
    throw std::invalid_argument("maclaurin_eval: coefficients are quantized at resolution 2^8");
  uint32_t n = x.resolution_log2;
  uint32_t one = 1u << n;
  detail::ChainMultiplier mul(method, n, params);

  switch (spec.function) {
    case SeriesFunction::ExpNeg: {
      uint32_t y = one;
      for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it)
        y = one - mul.mul(mul.mul(x.numerator, it->numerator), y);
      return UnaryValue(y, n);
    }
    case SeriesFunction::Log1p: {
      uint32_t y = one;
      for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it)
        y = one - mul.mul(mul.mul(x.numerator, it->numerator), y);
      return UnaryValue(mul.mul(x.numerator, y), n);
    }
    case SeriesFunction::Sin: {
      uint32_t x2 = mul.mul(x.numerator, x.numerator);
      uint32_t y = one;
      for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it)
        y = one - mul.mul(mul.mul(x2, it->numerator), y);
      return UnaryValue(mul.mul(x.numerator, y), n);
    }
    case SeriesFunction::Sigmoid: {
      uint32_t x2 = mul.mul(x.numerator, x.numerator);
      uint32_t y = one;
      for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it)
        y = one - mul.mul(mul.mul(x2, it->numerator), y);
      uint32_t core = mul.mul(x.numerator, y);
      return UnaryValue(one / 2 + uint32_t(div_round_half_up(core, 4)), n);
    }
  }
  throw std::invalid_argument("maclaurin_eval: bad function");
}

}  // namespace unaryflow
