#pragma once
// Deterministic unary multipliers: exact clock-division product, and the
// constant-length scalable multiplier (downscale both operands, multiply the
// short thermometer codes, compensate the dropped remainders by scheduled
// bit flips). Error of the compensated product is at most 2 bits.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

#include "unaryflow/streams.hpp"

namespace unaryflow {

// Exact product: length 2^(2n), bit(t) = a(t mod 2^n) AND b(t div 2^n).
// Holding b for a full period of a pairs every bit against every bit once,
// so popcount = a.numerator * b.numerator with no error.
inline BitStream clockdiv_multiply_exact(const UnaryValue& a, const UnaryValue& b) {
  if (a.resolution_log2 != b.resolution_log2)
    throw std::invalid_argument("clockdiv_multiply_exact: resolution mismatch");
  uint32_t n = a.resolution_log2;
  uint64_t period = uint64_t{1} << n;
  BitStream out(period * period);
  for (uint64_t t = 0; t < period * period; ++t) {
    bool abit = (t & (period - 1)) < a.numerator;
    bool bbit = (t >> n) < b.numerator;
    out.set_bit(t, abit && bbit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Downscaling: right-shift the operand register. quotient under-approximates;
// `error` counts the dropped low bits (remainder).

struct DownscaleResult {
  UnaryValue quotient;
  uint32_t error = 0;
};

inline DownscaleResult downscale(const UnaryValue& x, uint32_t shift) {
  if (shift > x.resolution_log2)
    throw std::invalid_argument("downscale: shift exceeds resolution");
  DownscaleResult r;
  r.quotient = UnaryValue(x.numerator >> shift, x.resolution_log2 - shift);
  r.error = x.numerator & ((1u << shift) - 1);
  return r;
}

// Number of compensation flips that must land on the other operand's 1-region
// to be worth a full output bit: round_half_up(error * other / q). In the
// circuit this is a q x q clock-division multiply feeding a counter whose
// value is then shifted out (stage 1).
inline uint32_t inv_count(uint32_t error, const UnaryValue& other_quotient) {
  uint64_t q = other_quotient.denominator();
  if (error >= q) throw std::invalid_argument("inv_count: error out of range");
  return uint32_t(div_round_half_up(uint64_t(error) * other_quotient.numerator, q));
}

// ---------------------------------------------------------------------------
// Flip plan. The downscaled operand is a thermometer code whose first 0 sits
// at index quotient.numerator (the "erroneous bit"). That position repeats
// once per block of the stage-2 schedule; the plan flips it 0->1 during
// `error` of those repetitions: aligned_count of them inside the other
// operand's 1-region (each worth +1 output bit), the rest parked in the
// other operand's 0-region where a flip is masked by the AND and costs
// nothing. Position rule: aligned flips take the lowest-index blocks
// (0, 1, ...); parked flips take the highest (q-1 descending).
//
// The only cell both plans can want is the overlap (i = A'_num, j = B'_num),
// where both raw bits are 0: one flip there is masked, both together would
// mint a spurious 1. A's plan wins the cell; B skips it. In the full-house
// corner (B's parked flips need the entire 0-region and A holds the overlap)
// B has no legal cell left and drops that flip — it was masked anyway, so
// the popcount is unaffected; dropped_overlap records it so plan-level
// conservation stays checkable.

enum class OperandTag { A, B };

struct FlipPlan {
  uint32_t erroneous_index = 0;        // = own quotient numerator
  std::vector<uint32_t> flip_cycles;   // ascending cycle indices in [0, 2^n)
  uint32_t aligned_count = 0;          // flips coinciding with other's 1-bits
  uint32_t dropped_overlap = 0;        // 1 only in the full-house corner (B)
};

inline FlipPlan build_flip_plan(const DownscaleResult& own, const DownscaleResult& other,
                                OperandTag which) {
  // A cycles fast (index i, range 2^rA); B is held (index j, range 2^rB).
  // Cycle number of cell (i, j) is j * 2^rA + i.
  uint32_t rA = (which == OperandTag::A) ? own.quotient.resolution_log2
                                         : other.quotient.resolution_log2;
  uint32_t own_num = own.quotient.numerator;
  uint32_t other_num = other.quotient.numerator;
  uint32_t other_range = 1u << other.quotient.resolution_log2;

  FlipPlan plan;
  plan.erroneous_index = own_num;
  if (own.error == 0) return plan;

  plan.aligned_count = inv_count(own.error, other.quotient);
  uint32_t parked = own.error - plan.aligned_count;

  auto cycle_of = [&](uint32_t other_block) {
    return (which == OperandTag::A) ? other_block * (1u << rA) + own_num
                                    : own_num * (1u << rA) + other_block;
  };

  std::vector<uint32_t> blocks;
  for (uint32_t b = 0; b < plan.aligned_count; ++b) blocks.push_back(b);

  // Does A's plan hold the overlap cell? Only when its parked flips fill the
  // whole 0-region of B', i.e. parkedA == range - B'_num.
  bool overlap_taken_by_a = false;
  if (which == OperandTag::B) {
    uint32_t inv_a = inv_count(other.error, own.quotient);
    uint32_t parked_a = other.error - inv_a;
    uint32_t a_zero_region = (1u << own.quotient.resolution_log2) - own_num;
    overlap_taken_by_a = parked_a > 0 && parked_a == a_zero_region;
  }

  uint32_t placed = 0;
  for (uint32_t b = other_range; b-- > other_num && placed < parked;) {
    if (which == OperandTag::B && b == other_num && overlap_taken_by_a) continue;
    blocks.push_back(b);
    ++placed;
  }
  plan.dropped_overlap = parked - placed;

  for (uint32_t b : blocks) plan.flip_cycles.push_back(cycle_of(b));
  std::sort(plan.flip_cycles.begin(), plan.flip_cycles.end());
  return plan;
}

// ---------------------------------------------------------------------------

struct MulResult {
  BitStream stream;
  UnaryValue value;        // popcount / 2^n
  UnaryValue ideal;        // optimal n-bit approximation of the true product
  int32_t error_bits = 0;  // popcount - ideal.numerator, in [-2, 2]
  uint64_t stage1_cycles = 0;
  uint64_t stage2_cycles = 0;
};

// Nearest representable value at the output resolution (ties round up).
// This is the error reference everywhere: measured against the ideal
// approximation, not the full-precision product.
inline UnaryValue optimal_approximation(const UnaryValue& a, const UnaryValue& b,
                                        uint32_t out_resolution_log2) {
  uint64_t num = uint64_t(a.numerator) * b.numerator << out_resolution_log2;
  uint64_t den = uint64_t{1} << (a.resolution_log2 + b.resolution_log2);
  return UnaryValue(uint32_t(div_round_half_up(num, den)), out_resolution_log2);
}

// Downscale shifts: floor(n/2) for A, ceil(n/2) for B. For odd n the split
// is asymmetric so the stage-2 index ranges still multiply out to 2^n and
// the output keeps the input length.
inline uint32_t downscale_shift_a(uint32_t n) { return n / 2; }
inline uint32_t downscale_shift_b(uint32_t n) { return n - n / 2; }

// Stage-2 datapath, cycle-accurate: i = t mod 2^rA sweeps A', j = t div 2^rA
// holds B'; output = (a'_i XOR flipA(t)) AND (b'_j XOR flipB(t)).
// `compensate = false` disables both flip plans (the raw under-approximation,
// popcount exactly A_H * B_H).
inline BitStream scalable_multiply_stream(const UnaryValue& a, const UnaryValue& b,
                                          bool compensate = true) {
  if (a.resolution_log2 != b.resolution_log2)
    throw std::invalid_argument("scalable_multiply_stream: resolution mismatch");
  uint32_t n = a.resolution_log2;
  DownscaleResult da = downscale(a, downscale_shift_a(n));
  DownscaleResult db = downscale(b, downscale_shift_b(n));
  FlipPlan pa, pb;
  if (compensate) {
    pa = build_flip_plan(da, db, OperandTag::A);
    pb = build_flip_plan(db, da, OperandTag::B);
  }
  uint32_t ri = da.quotient.resolution_log2;
  uint64_t length = uint64_t{1} << n;
  BitStream out(length);
  size_t ia = 0, ib = 0;  // cursors into the sorted flip cycle lists
  for (uint64_t t = 0; t < length; ++t) {
    uint32_t i = uint32_t(t) & ((1u << ri) - 1);
    uint32_t j = uint32_t(t) >> ri;
    bool abit = i < da.quotient.numerator;
    bool bbit = j < db.quotient.numerator;
    while (ia < pa.flip_cycles.size() && pa.flip_cycles[ia] < t) ++ia;
    while (ib < pb.flip_cycles.size() && pb.flip_cycles[ib] < t) ++ib;
    if (ia < pa.flip_cycles.size() && pa.flip_cycles[ia] == t) abit = !abit;
    if (ib < pb.flip_cycles.size() && pb.flip_cycles[ib] == t) bbit = !bbit;
    out.set_bit(t, abit && bbit);
  }
  return out;
}

inline MulResult scalable_multiply(const UnaryValue& a, const UnaryValue& b) {
  uint32_t n = a.resolution_log2;
  MulResult r;
  r.stream = scalable_multiply_stream(a, b);
  r.value = measure(r.stream);
  r.ideal = optimal_approximation(a, b, n);
  r.error_bits = int32_t(r.value.numerator) - int32_t(r.ideal.numerator);
  r.stage1_cycles = uint64_t{1} << n;  // downscale + inv counters consume one period
  r.stage2_cycles = uint64_t{1} << n;
  return r;
}

// Term-sum oracle for the quotient/remainder expansion of the product:
//   A*B = q^2 A_H B_H + q A_L B_H + q B_L A_H + A_L B_L.
// The datapath realizes the first three terms (the remainder cross terms via
// the rounded inv counters); the fourth is excluded from the design but can
// be added here to confirm it removes the residual error.
inline uint32_t expansion_oracle_popcount(const UnaryValue& a, const UnaryValue& b,
                                          bool include_fourth_term = false) {
  if (a.resolution_log2 != b.resolution_log2)
    throw std::invalid_argument("expansion_oracle_popcount: resolution mismatch");
  uint32_t n = a.resolution_log2;
  DownscaleResult da = downscale(a, downscale_shift_a(n));
  DownscaleResult db = downscale(b, downscale_shift_b(n));
  uint32_t pop = da.quotient.numerator * db.quotient.numerator
               + inv_count(da.error, db.quotient)
               + inv_count(db.error, da.quotient);
  if (include_fourth_term)
    pop += uint32_t(div_round_half_up(uint64_t(da.error) * db.error, uint64_t{1} << n));
  return pop;
}

// Per-cycle trace for one multiply; a_bit/b_bit are the raw downscaled
// thermometer bits before the flip XORs.
inline void write_trace_csv(const UnaryValue& a, const UnaryValue& b, std::ostream& os) {
  if (a.resolution_log2 != b.resolution_log2)
    throw std::invalid_argument("write_trace_csv: resolution mismatch");
  uint32_t n = a.resolution_log2;
  DownscaleResult da = downscale(a, downscale_shift_a(n));
  DownscaleResult db = downscale(b, downscale_shift_b(n));
  FlipPlan pa = build_flip_plan(da, db, OperandTag::A);
  FlipPlan pb = build_flip_plan(db, da, OperandTag::B);
  uint32_t ri = da.quotient.resolution_log2;
  os << "cycle,i,j,a_bit,b_bit,flip_a,flip_b,out_bit\n";
  size_t ia = 0, ib = 0;
  for (uint64_t t = 0; t < (uint64_t{1} << n); ++t) {
    uint32_t i = uint32_t(t) & ((1u << ri) - 1);
    uint32_t j = uint32_t(t) >> ri;
    bool abit = i < da.quotient.numerator;
    bool bbit = j < db.quotient.numerator;
    bool fa = false, fb = false;
    while (ia < pa.flip_cycles.size() && pa.flip_cycles[ia] < t) ++ia;
    while (ib < pb.flip_cycles.size() && pb.flip_cycles[ib] < t) ++ib;
    if (ia < pa.flip_cycles.size() && pa.flip_cycles[ia] == t) fa = true;
    if (ib < pb.flip_cycles.size() && pb.flip_cycles[ib] == t) fb = true;
    bool outb = (abit ^ fa) && (bbit ^ fb);
    os << t << ',' << i << ',' << j << ',' << abit << ',' << bbit << ','
       << fa << ',' << fb << ',' << outb << '\n';
  }
}

// ---------------------------------------------------------------------------

struct PipelineEstimate {
  uint64_t unpipelined_cycles = 0;     // num_multiplies * 2^(n+1)
  uint64_t pipelined_cycles = 0;       // (num_multiplies + 1) * 2^n
  uint64_t steady_state_interval = 0;  // 2^n
  uint32_t stage_imbalance = 0;        // |shiftA - shiftB|, nonzero for odd n
};

inline PipelineEstimate pipeline_model(uint64_t num_multiplies, uint32_t n) {
  if (num_multiplies < 1) throw std::invalid_argument("pipeline_model: need >= 1 multiply");
  PipelineEstimate e;
  uint64_t period = uint64_t{1} << n;
  e.unpipelined_cycles = num_multiplies * period * 2;
  e.pipelined_cycles = (num_multiplies + 1) * period;
  e.steady_state_interval = period;
  e.stage_imbalance = downscale_shift_b(n) - downscale_shift_a(n);
  return e;
}

// ---------------------------------------------------------------------------
// Method selector shared by the evaluation layers: the scalable deterministic
// multiplier, or a comparator-pair baseline (two independently sourced
// streams into an AND gate, observed for 2^n cycles).

enum class Method { ScalableDeterministic, Lfsr, Sobol, Halton };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::ScalableDeterministic: return "det";
    case Method::Lfsr: return "lfsr";
    case Method::Sobol: return "sobol";
    case Method::Halton: return "halton";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "det") return Method::ScalableDeterministic;
  if (s == "lfsr") return Method::Lfsr;
  if (s == "sobol") return Method::Sobol;
  if (s == "halton") return Method::Halton;
  throw std::invalid_argument("unknown method: " + std::string(s));
}

// Source parameters for the two operand streams of a baseline multiply.
// Defaults are the shipped reproducible configuration.
struct MethodParams {
  uint32_t lfsr_polynomial = 0;  // 0 = width default
  uint32_t lfsr_seed_a = 1;
  uint32_t lfsr_seed_b = 2;
  uint32_t sobol_dim_a = 1;
  uint32_t sobol_dim_b = 3;
  uint32_t halton_base_a = 2;
  uint32_t halton_base_b = 3;
};

inline GeneratorSpec operand_spec(Method m, uint32_t n, const MethodParams& p, bool second) {
  GeneratorSpec g;
  g.width_log2 = n;
  switch (m) {
    case Method::ScalableDeterministic:
      g.kind = GeneratorKind::UnaryCounter;
      break;
    case Method::Lfsr:
      g.kind = GeneratorKind::Lfsr;
      g.lfsr_polynomial = p.lfsr_polynomial;
      g.lfsr_seed = second ? p.lfsr_seed_b : p.lfsr_seed_a;
      break;
    case Method::Sobol:
      g.kind = GeneratorKind::Sobol;
      g.sobol_dimension = second ? p.sobol_dim_b : p.sobol_dim_a;
      break;
    case Method::Halton:
      g.kind = GeneratorKind::Halton;
      g.halton_base = second ? p.halton_base_b : p.halton_base_a;
      break;
  }
  return g;
}

// One 2^n-cycle multiply under the given method. Baselines AND two streams;
// the deterministic method runs the scalable datapath.
inline BitStream method_multiply_stream(const UnaryValue& a, const UnaryValue& b,
                                        Method m, const MethodParams& p = {}) {
  if (m == Method::ScalableDeterministic) return scalable_multiply_stream(a, b);
  uint32_t n = a.resolution_log2;
  BitStream sa = generate_stream(a, operand_spec(m, n, p, false));
  BitStream sb = generate_stream(b, operand_spec(m, n, p, true));
  BitStream out(sa.length());
  for (size_t t = 0; t < sa.length(); ++t) out.set_bit(t, sa.bit(t) && sb.bit(t));
  return out;
}

inline uint32_t method_multiply_popcount(const UnaryValue& a, const UnaryValue& b,
                                         Method m, const MethodParams& p = {}) {
  return uint32_t(method_multiply_stream(a, b, m, p).popcount());
}

}  // namespace unaryflow
