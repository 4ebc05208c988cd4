#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "unaryflow/funcs.hpp"

using namespace unaryflow;

TEST_CASE("AND gate multiplies only uncorrelated streams") {
  SECTION("aligned thermometer codes collapse to min") {
    for (uint32_t a = 0; a <= 16; ++a)
      for (uint32_t b = 0; b <= 16; ++b) {
        GeneratorSpec spec;
        spec.width_log2 = 4;
        BitStream s = and_multiply(generate_stream(UnaryValue(a, 4), spec),
                                   generate_stream(UnaryValue(b, 4), spec));
        REQUIRE(s.popcount() == std::min(a, b));
      }
  }

  SECTION("disjoint streams collapse to zero") {
    BitStream s = and_multiply(BitStream::from_string("11100"), BitStream::from_string("00011"));
    REQUIRE(s.popcount() == 0);
  }

  SECTION("clock-division scheduling recovers the exact product") {
    // a on the fast index, b held per block: AND == the exact multiplier
    const uint32_t n = 3;
    for (uint32_t a = 0; a <= 8; ++a)
      for (uint32_t b = 0; b <= 8; ++b) {
        BitStream sa(64), sb(64);
        for (uint32_t t = 0; t < 64; ++t) {
          sa.set_bit(t, (t % 8) < a);
          sb.set_bit(t, (t / 8) < b);
        }
        REQUIRE(and_multiply(sa, sb) ==
                clockdiv_multiply_exact(UnaryValue(a, n), UnaryValue(b, n)));
      }
  }

  REQUIRE_THROWS_AS(and_multiply(BitStream(4), BitStream(8)), std::invalid_argument);
}

TEST_CASE("MUX select blends two streams") {
  BitStream ones = BitStream::from_string("1111");
  BitStream zeros = BitStream::from_string("0000");
  BitStream mixed = BitStream::from_string("1010");
  REQUIRE(mux_scaled_add(mixed, zeros, ones) == mixed);   // sel 1 passes a
  REQUIRE(mux_scaled_add(mixed, zeros, zeros) == zeros);  // sel 0 passes b
  // half/half select of 1.0 and 0.0 lands at 1/2
  REQUIRE(mux_scaled_add(ones, zeros, mixed).popcount() == 2);
  REQUIRE_THROWS_AS(mux_scaled_add(ones, zeros, BitStream(8)), std::invalid_argument);
}

TEST_CASE("NAND stage computes the complemented product") {
  BitStream a = BitStream::from_string("1100");
  BitStream b = BitStream::from_string("1010");
  REQUIRE(nand_stage(a, b).to_string() == "0111");
  REQUIRE(nand_stage(a, BitStream::from_string("1111")).to_string() == "0011");
  // value-level: pop(nand) = len - pop(and)
  REQUIRE(nand_stage(a, b).popcount() == 4 - and_multiply(a, b).popcount());
}

TEST_CASE("series specs validate") {
  for (SeriesFunction f : {SeriesFunction::ExpNeg, SeriesFunction::Sin, SeriesFunction::Log1p,
                           SeriesFunction::Sigmoid}) {
    SeriesSpec spec = default_series(f);
    REQUIRE_NOTHROW(validate_series(spec));
    REQUIRE(spec.degree >= 1);
    REQUIRE(std::string(series_name(f)) == series_name(spec.function));
    REQUIRE(parse_series_function(series_name(f)) == f);
  }
  SeriesSpec bad = default_series(SeriesFunction::Sin);
  bad.degree = 0;
  REQUIRE_THROWS_AS(validate_series(bad), std::invalid_argument);
  bad = default_series(SeriesFunction::Sin);
  bad.coefficients.clear();
  REQUIRE_THROWS_AS(validate_series(bad), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_series_function("tanh"), std::invalid_argument);
}

TEST_CASE("series files match the embedded defaults") {
  struct Row { const char* path; SeriesFunction f; };
  for (Row row : {Row{"data/funcs/expneg.conf", SeriesFunction::ExpNeg},
                  Row{"data/funcs/sin.conf", SeriesFunction::Sin},
                  Row{"data/funcs/log1p.conf", SeriesFunction::Log1p},
                  Row{"data/funcs/sigmoid.conf", SeriesFunction::Sigmoid}}) {
    SeriesSpec got = parse_series_file(row.path);
    SeriesSpec want = default_series(row.f);
    REQUIRE(got.function == want.function);
    REQUIRE(got.degree == want.degree);
    REQUIRE(got.coefficients == want.coefficients);
  }
  REQUIRE_THROWS_AS(parse_series_file("data/funcs/missing.conf"), std::runtime_error);
}

TEST_CASE("chain evaluation endpoints") {
  // x = 0 kills every product term regardless of multiplier
  for (Method m : {Method::ScalableDeterministic, Method::Lfsr, Method::Sobol, Method::Halton}) {
    REQUIRE(maclaurin_eval(default_series(SeriesFunction::ExpNeg), UnaryValue(0, 8), m).numerator ==
            256);
    REQUIRE(maclaurin_eval(default_series(SeriesFunction::Sin), UnaryValue(0, 8), m).numerator == 0);
    REQUIRE(maclaurin_eval(default_series(SeriesFunction::Log1p), UnaryValue(0, 8), m).numerator ==
            0);
    REQUIRE(maclaurin_eval(default_series(SeriesFunction::Sigmoid), UnaryValue(0, 8), m).numerator ==
            128);
  }
  REQUIRE_THROWS_AS(maclaurin_eval(default_series(SeriesFunction::Sin), UnaryValue(3, 4),
                                   Method::ScalableDeterministic),
                    std::invalid_argument);
}

TEST_CASE("deterministic chains track the true functions") {
  const uint32_t one = 256;
  for (SeriesFunction f : {SeriesFunction::ExpNeg, SeriesFunction::Sin, SeriesFunction::Log1p,
                           SeriesFunction::Sigmoid}) {
    SeriesSpec spec = default_series(f);
    uint64_t abs_err = 0;
    for (uint32_t k = 0; k <= one; ++k) {
      UnaryValue x(k, 8);
      uint32_t out = maclaurin_eval(spec, x, Method::ScalableDeterministic).numerator;
      REQUIRE(out <= one);
      int64_t ideal = std::llround(true_function_value(f, x.value()) * one);
      abs_err += uint64_t(std::llabs(int64_t(out) - ideal));
    }
    double mae_pct = 100.0 * double(abs_err) / (one * 257.0);
    INFO(series_name(f));
    REQUIRE(mae_pct <= 2.5);
  }
}

TEST_CASE("deterministic e^-x chain stays monotone on a coarse grid") {
  SeriesSpec spec = default_series(SeriesFunction::ExpNeg);
  uint32_t prev = 257;
  for (uint32_t k = 0; k <= 16; ++k) {
    uint32_t out = maclaurin_eval(spec, UnaryValue(16 * k, 8),
                                  Method::ScalableDeterministic).numerator;
    REQUIRE(out < prev);  // e^-x strictly falls; 16/256 steps resolve that
    prev = out;
  }
}

TEST_CASE("baseline chains stay in range") {
  for (Method m : {Method::Lfsr, Method::Sobol, Method::Halton}) {
    for (SeriesFunction f : {SeriesFunction::ExpNeg, SeriesFunction::Sin, SeriesFunction::Log1p,
                             SeriesFunction::Sigmoid}) {
      SeriesSpec spec = default_series(f);
      for (uint32_t k = 0; k <= 16; ++k) {
        uint32_t out = maclaurin_eval(spec, UnaryValue(16 * k, 8), m).numerator;
        REQUIRE(out <= 256);
      }
    }
  }
}

TEST_CASE("true function reference values") {
  REQUIRE(true_function_value(SeriesFunction::ExpNeg, 0.0) == Catch::Approx(1.0));
  REQUIRE(true_function_value(SeriesFunction::Sin, 1.0) == Catch::Approx(std::sin(1.0)));
  REQUIRE(true_function_value(SeriesFunction::Log1p, 1.0) == Catch::Approx(std::log(2.0)));
  REQUIRE(true_function_value(SeriesFunction::Sigmoid, 0.0) == Catch::Approx(0.5));
}
