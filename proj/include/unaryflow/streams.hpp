#pragma once
// Unary value / bit-stream core: operand registers, packed streams, and the
// four comparator number sources (sequential counter, LFSR, Sobol, Halton).

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unaryflow {

// Exact fraction numerator / 2^resolution_log2. All comparisons and error
// accounting inside the library stay in integer numerators; value() is for
// display only.
struct UnaryValue {
  uint32_t numerator = 0;
  uint32_t resolution_log2 = 0;

  UnaryValue() = default;
  UnaryValue(uint32_t num, uint32_t res_log2)
      : numerator(num), resolution_log2(res_log2) {
    if (res_log2 > 31) throw std::invalid_argument("UnaryValue: resolution too large");
    if (num > (1u << res_log2)) throw std::invalid_argument("UnaryValue: numerator exceeds denominator");
  }

  uint64_t denominator() const { return uint64_t{1} << resolution_log2; }
  double value() const { return double(numerator) / double(denominator()); }

  friend bool operator==(const UnaryValue&, const UnaryValue&) = default;
};

// round_half_up(num / den) on non-negative integers
inline uint64_t div_round_half_up(uint64_t num, uint64_t den) {
  return (num + den / 2) / den;
}

// Packed bit sequence; bit(t) for cycle t, popcount as the measurement
// primitive. Exhaustive 2^8-resolution sweeps hammer this, hence words.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(size_t length) : words_((length + 63) / 64, 0), len_(length) {}

  size_t length() const { return len_; }

  bool bit(size_t t) const {
    if (t >= len_) throw std::out_of_range("BitStream::bit: index past end");
    return (words_[t >> 6] >> (t & 63)) & 1u;
  }

  void set_bit(size_t t, bool v) {
    if (t >= len_) throw std::out_of_range("BitStream::set_bit: index past end");
    uint64_t mask = uint64_t{1} << (t & 63);
    if (v) words_[t >> 6] |= mask; else words_[t >> 6] &= ~mask;
  }

  void push_back(bool v) {
    if ((len_ & 63) == 0) words_.push_back(0);
    if (v) words_.back() |= uint64_t{1} << (len_ & 63);
    ++len_;
  }

  uint64_t popcount() const {
    uint64_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  // popcount of bits [0, t)
  uint64_t popcount_prefix(size_t t) const {
    if (t > len_) throw std::out_of_range("BitStream::popcount_prefix: length past end");
    uint64_t c = 0;
    size_t full = t >> 6;
    for (size_t i = 0; i < full; ++i) c += std::popcount(words_[i]);
    if (t & 63) c += std::popcount(words_[full] & ((uint64_t{1} << (t & 63)) - 1));
    return c;
  }

  // debug dump: '0'/'1' per cycle, most recent bit last
  std::string to_string() const {
    std::string s(len_, '0');
    for (size_t t = 0; t < len_; ++t)
      if (bit(t)) s[t] = '1';
    return s;
  }

  static BitStream from_string(std::string_view s) {
    BitStream b(s.size());
    for (size_t t = 0; t < s.size(); ++t) {
      if (s[t] != '0' && s[t] != '1') throw std::invalid_argument("BitStream::from_string: bad char");
      b.set_bit(t, s[t] == '1');
    }
    return b;
  }

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<uint64_t> words_;
  size_t len_ = 0;
};

enum class GeneratorKind { UnaryCounter, Lfsr, Sobol, Halton };

inline const char* kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::UnaryCounter: return "counter";
    case GeneratorKind::Lfsr: return "lfsr";
    case GeneratorKind::Sobol: return "sobol";
    case GeneratorKind::Halton: return "halton";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LFSR (Fibonacci form, left shift; feedback = parity of state & polynomial).
// Polynomial mask convention: bit i set means the x^(i+1) coefficient is a
// tap, so x^4+x^3+1 is 0b1100. Table entries are maximal for their width.

inline uint32_t lfsr_default_polynomial(uint32_t width) {
  switch (width) {
    case 2:  return 0b11;
    case 3:  return 0b110;
    case 4:  return 0xC;      // x^4+x^3+1
    case 5:  return 0x14;     // x^5+x^3+1
    case 6:  return 0x30;
    case 7:  return 0x60;
    case 8:  return 0xB8;     // x^8+x^6+x^5+x^4+1
    case 9:  return 0x110;
    case 10: return 0x240;
    case 11: return 0x500;
    case 12: return 0xE08;
    case 13: return 0x1C80;
    case 14: return 0x3802;
    case 15: return 0x6000;
    case 16: return 0xD008;
    default: throw std::invalid_argument("lfsr_default_polynomial: no entry for width");
  }
}

inline uint32_t lfsr_step(uint32_t state, uint32_t polynomial, uint32_t width) {
  if (state == 0) throw std::invalid_argument("lfsr_step: zero state is absorbing");
  if (width < 2 || width > 31) throw std::invalid_argument("lfsr_step: bad width");
  uint32_t fb = uint32_t(std::popcount(state & polynomial)) & 1u;
  return ((state << 1) | fb) & ((1u << width) - 1);
}

// brute-force cycle length from state 1; maximal iff it is 2^width - 1
inline bool lfsr_is_maximal(uint32_t polynomial, uint32_t width) {
  uint32_t s = 1, period = 0;
  do {
    s = lfsr_step(s, polynomial, width);
    ++period;
    if (s == 0) return false;
  } while (s != 1 && period <= (1u << width));
  return period == (1u << width) - 1;
}

// ---------------------------------------------------------------------------
// Sobol: base-2 digital sequence via Gray-code XOR of direction numbers.
// Parameter rows are the standard published (s, a, m_i) sets; dimension 0 is
// the van der Corput sequence and needs no row.

struct SobolDimParams {
  uint32_t s = 0;               // primitive polynomial degree
  uint32_t a = 0;               // polynomial coefficient bits a_1..a_{s-1}
  std::vector<uint32_t> m;      // initial odd direction integers m_1..m_s
};

struct SobolTable {
  std::vector<SobolDimParams> dims;  // dims[0] unused (van der Corput)
  size_t dimension_count() const { return dims.size(); }
};

inline const SobolTable& default_sobol_table() {
  static const SobolTable table = [] {
    SobolTable t;
    t.dims.resize(8);
    t.dims[1] = {1, 0, {1}};
    t.dims[2] = {2, 1, {1, 3}};
    t.dims[3] = {3, 1, {1, 3, 1}};
    t.dims[4] = {3, 2, {1, 1, 1}};
    t.dims[5] = {4, 1, {1, 1, 3, 3}};
    t.dims[6] = {4, 4, {1, 3, 5, 13}};
    t.dims[7] = {5, 2, {1, 1, 5, 5, 17}};
    return t;
  }();
  return table;
}

// direction numbers v_1..v_n as n-bit integers (v_j = m_j << (n-j), then the
// standard recurrence v_j = v_{j-s} ^ (v_{j-s} >> s) ^ sum a_k v_{j-k})
inline std::vector<uint32_t> sobol_direction_numbers(uint32_t dimension, uint32_t n_bits,
                                                     const SobolTable& table = default_sobol_table()) {
  if (n_bits == 0 || n_bits > 31) throw std::invalid_argument("sobol_direction_numbers: bad width");
  std::vector<uint32_t> v(n_bits);
  if (dimension == 0) {
    for (uint32_t j = 0; j < n_bits; ++j) v[j] = 1u << (n_bits - 1 - j);
    return v;
  }
  if (dimension >= table.dimension_count())
    throw std::invalid_argument("sobol_direction_numbers: unknown dimension");
  const SobolDimParams& p = table.dims[dimension];
  for (uint32_t j = 0; j < n_bits; ++j) {
    if (j < p.s) {
      v[j] = p.m[j] << (n_bits - 1 - j);
    } else {
      uint32_t x = v[j - p.s] ^ (v[j - p.s] >> p.s);
      for (uint32_t k = 1; k < p.s; ++k)
        if ((p.a >> (p.s - 1 - k)) & 1u) x ^= v[j - k];
      v[j] = x;
    }
  }
  return v;
}

inline uint32_t sobol_point(uint64_t index, uint32_t dimension, uint32_t n_bits,
                            const SobolTable& table = default_sobol_table()) {
  if (index >= (uint64_t{1} << n_bits))
    throw std::invalid_argument("sobol_point: index past sequence width");
  std::vector<uint32_t> v = sobol_direction_numbers(dimension, n_bits, table);
  uint64_t gray = index ^ (index >> 1);
  uint32_t x = 0;
  for (uint32_t j = 0; j < n_bits; ++j)
    if ((gray >> j) & 1u) x ^= v[j];
  return x;
}

// Data file: one line per dimension, `d s a m_1 ... m_s` (d starts at 2; the
// first dimension is van der Corput by construction). '#' comments allowed.
inline SobolTable load_sobol_directions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_sobol_directions: cannot open " + path);
  SobolTable t;
  t.dims.resize(1);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    uint32_t d, s, a;
    if (!(ls >> d >> s >> a)) continue;
    SobolDimParams p{s, a, {}};
    for (uint32_t i = 0; i < s; ++i) {
      uint32_t m;
      if (!(ls >> m)) throw std::runtime_error("load_sobol_directions: short row in " + path);
      p.m.push_back(m);
    }
    if (d != t.dims.size() + 1)
      throw std::runtime_error("load_sobol_directions: rows out of order in " + path);
    t.dims.push_back(std::move(p));
  }
  if (t.dims.size() < 2) throw std::runtime_error("load_sobol_directions: no rows in " + path);
  return t;
}

// ---------------------------------------------------------------------------
// Halton: radical inverse of the index in a prime base, kept as an exact
// integer fraction and floored to n bits. No floating point anywhere.

inline uint32_t halton_point(uint64_t index, uint32_t base, uint32_t scale_log2) {
  if (base < 2) throw std::invalid_argument("halton_point: base must be >= 2");
  uint64_t num = 0, den = 1;
  while (index > 0) {
    num = num * base + index % base;
    den *= base;
    index /= base;
  }
  return uint32_t((num << scale_log2) / den);
}

// ---------------------------------------------------------------------------

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UnaryCounter;
  uint32_t width_log2 = 4;        // stream length 2^n
  uint32_t lfsr_polynomial = 0;   // 0 = table default for the width
  uint32_t lfsr_seed = 1;
  uint32_t sobol_dimension = 0;
  uint32_t halton_base = 2;
};

// Comparator generator: bit(t) = source(t) < numerator. Strict less-than
// makes the counter source emit exactly `numerator` ones (thermometer code,
// all 1s up front).
inline BitStream generate_stream(const UnaryValue& value, const GeneratorSpec& spec,
                                 const SobolTable& sobol = default_sobol_table()) {
  if (value.resolution_log2 != spec.width_log2)
    throw std::invalid_argument("generate_stream: resolution does not match generator width");
  uint32_t n = spec.width_log2;
  uint64_t length = uint64_t{1} << n;
  BitStream out(length);
  switch (spec.kind) {
    case GeneratorKind::UnaryCounter:
      for (uint64_t t = 0; t < length; ++t)
        out.set_bit(t, t < value.numerator);
      break;
    case GeneratorKind::Lfsr: {
      if (spec.lfsr_seed == 0) throw std::invalid_argument("generate_stream: zero LFSR seed");
      uint32_t poly = spec.lfsr_polynomial ? spec.lfsr_polynomial : lfsr_default_polynomial(n);
      uint32_t state = spec.lfsr_seed & ((1u << n) - 1);
      if (state == 0) throw std::invalid_argument("generate_stream: LFSR seed reduces to zero");
      for (uint64_t t = 0; t < length; ++t) {
        out.set_bit(t, state < value.numerator);
        state = lfsr_step(state, poly, n);
      }
      break;
    }
    case GeneratorKind::Sobol: {
      std::vector<uint32_t> v = sobol_direction_numbers(spec.sobol_dimension, n, sobol);
      uint32_t x = 0;  // incremental Gray-code update: flip one direction per step
      for (uint64_t t = 0; t < length; ++t) {
        out.set_bit(t, x < value.numerator);
        if (t + 1 < length) x ^= v[std::countr_zero(t + 1)];
      }
      break;
    }
    case GeneratorKind::Halton:
      for (uint64_t t = 0; t < length; ++t)
        out.set_bit(t, halton_point(t, spec.halton_base, n) < value.numerator);
      break;
  }
  return out;
}

inline UnaryValue measure(const BitStream& stream) {
  size_t len = stream.length();
  if (len == 0 || (len & (len - 1)) != 0)
    throw std::invalid_argument("measure: stream length must be a power of two");
  return UnaryValue(uint32_t(stream.popcount()), uint32_t(std::countr_zero(len)));
}

inline bool is_thermometer(const BitStream& stream) {
  for (size_t t = 1; t < stream.length(); ++t)
    if (stream.bit(t) && !stream.bit(t - 1)) return false;
  return true;
}

}  // namespace unaryflow
