#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "unaryflow/streams.hpp"

using namespace unaryflow;

TEST_CASE("UnaryValue validates and reports") {
  UnaryValue v(5, 4);
  REQUIRE(v.numerator == 5);
  REQUIRE(v.denominator() == 16);
  REQUIRE(v.value() == Catch::Approx(0.3125));
  REQUIRE_NOTHROW(UnaryValue(16, 4));  // 1.0 is representable
  REQUIRE_THROWS_AS(UnaryValue(17, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(UnaryValue(1, 32), std::invalid_argument);
}

TEST_CASE("div_round_half_up ties go up") {
  REQUIRE(div_round_half_up(0, 4) == 0);
  REQUIRE(div_round_half_up(1, 4) == 0);
  REQUIRE(div_round_half_up(2, 4) == 1);  // exact half
  REQUIRE(div_round_half_up(3, 4) == 1);
  REQUIRE(div_round_half_up(6, 4) == 2);  // 1.5 -> 2
  REQUIRE(div_round_half_up(45, 16) == 3);
}

TEST_CASE("BitStream basics") {
  BitStream s(70);  // straddles a word boundary
  REQUIRE(s.length() == 70);
  REQUIRE(s.popcount() == 0);
  s.set_bit(0, true);
  s.set_bit(63, true);
  s.set_bit(64, true);
  s.set_bit(69, true);
  REQUIRE(s.popcount() == 4);
  REQUIRE(s.bit(63));
  REQUIRE_FALSE(s.bit(62));
  s.set_bit(63, false);
  REQUIRE(s.popcount() == 3);

  SECTION("prefix popcount matches a bit-by-bit walk") {
    for (size_t t = 0; t <= s.length(); ++t) {
      uint64_t manual = 0;
      for (size_t k = 0; k < t; ++k) manual += s.bit(k);
      REQUIRE(s.popcount_prefix(t) == manual);
    }
  }

  SECTION("bounds are enforced") {
    REQUIRE_THROWS_AS(s.bit(70), std::out_of_range);
    REQUIRE_THROWS_AS(s.set_bit(70, true), std::out_of_range);
    REQUIRE_THROWS_AS(s.popcount_prefix(71), std::out_of_range);
  }

  SECTION("push_back and string round trip") {
    BitStream b;
    for (int t = 0; t < 67; ++t) b.push_back(t % 3 == 0);
    REQUIRE(b.length() == 67);
    REQUIRE(BitStream::from_string(b.to_string()) == b);
    REQUIRE(BitStream::from_string("10110").to_string() == "10110");
    REQUIRE_THROWS_AS(BitStream::from_string("102"), std::invalid_argument);
  }
}

TEST_CASE("counter source emits thermometer codes") {
  // bit(t) = t < numerator: all the ones up front, exhaustively per value
  for (uint32_t n = 2; n <= 8; ++n) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::UnaryCounter;
    spec.width_log2 = n;
    for (uint32_t k = 0; k <= (1u << n); ++k) {
      BitStream s = generate_stream(UnaryValue(k, n), spec);
      REQUIRE(s.length() == (uint64_t{1} << n));
      REQUIRE(s.popcount() == k);
      REQUIRE(is_thermometer(s));
      UnaryValue back = measure(s);
      REQUIRE(back.numerator == k);
      REQUIRE(back.resolution_log2 == n);
    }
  }
}

TEST_CASE("counter stream worked example") {
  GeneratorSpec spec;
  spec.width_log2 = 4;
  REQUIRE(generate_stream(UnaryValue(12, 4), spec).to_string() == "1111111111110000");
  REQUIRE(generate_stream(UnaryValue(0, 4), spec).to_string() == "0000000000000000");
}

TEST_CASE("is_thermometer flags a one after a zero") {
  REQUIRE(is_thermometer(BitStream::from_string("111000")));
  REQUIRE(is_thermometer(BitStream::from_string("000000")));
  REQUIRE(is_thermometer(BitStream::from_string("111111")));
  REQUIRE_FALSE(is_thermometer(BitStream::from_string("101000")));
  REQUIRE_FALSE(is_thermometer(BitStream::from_string("011000")));
}

TEST_CASE("measure requires a power-of-two length") {
  BitStream s(12);
  REQUIRE_THROWS_AS(measure(s), std::invalid_argument);
  REQUIRE_THROWS_AS(measure(BitStream(0)), std::invalid_argument);
  REQUIRE(measure(BitStream(8)).resolution_log2 == 3);
}

TEST_CASE("LFSR step sequence, width 4") {
  // x^4 + x^3 + 1, seed 8: the full 15-state orbit
  const uint32_t poly = lfsr_default_polynomial(4);
  REQUIRE(poly == 0b1100);
  std::vector<uint32_t> expect = {8, 1, 2, 4, 9, 3, 6, 13, 10, 5, 11, 7, 15, 14, 12};
  uint32_t state = 8;
  for (size_t i = 0; i < expect.size(); ++i) {
    REQUIRE(state == expect[i]);
    state = lfsr_step(state, poly, 4);
  }
  REQUIRE(state == 8);  // period 15
}

TEST_CASE("default LFSR polynomials are maximal") {
  for (uint32_t w = 2; w <= 16; ++w) {
    INFO("width " << w);
    REQUIRE(lfsr_is_maximal(lfsr_default_polynomial(w), w));
  }
  REQUIRE_FALSE(lfsr_is_maximal(0b1010, 4));
  REQUIRE_THROWS_AS(lfsr_default_polynomial(17), std::invalid_argument);
  REQUIRE_THROWS_AS(lfsr_default_polynomial(1), std::invalid_argument);
}

TEST_CASE("LFSR stream matches a hand-stepped comparator") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Lfsr;
  spec.width_log2 = 4;
  spec.lfsr_seed = 8;
  BitStream s = generate_stream(UnaryValue(5, 4), spec);
  // states < 5 from the orbit above: 1,2,4,3 plus the never-visited 0 absent
  REQUIRE(s.to_string() == "0111010000000000");
  REQUIRE(s.popcount() == 4);  // state 0 never occurs: popcount is value-1 biased

  SECTION("zero seed rejected") {
    spec.lfsr_seed = 0;
    REQUIRE_THROWS_AS(generate_stream(UnaryValue(5, 4), spec), std::invalid_argument);
    spec.lfsr_seed = 16;  // reduces to zero in 4 bits
    REQUIRE_THROWS_AS(generate_stream(UnaryValue(5, 4), spec), std::invalid_argument);
  }
}

TEST_CASE("Sobol direction numbers and points") {
  const SobolTable& table = default_sobol_table();
  REQUIRE(table.dimension_count() == 8);

  SECTION("index 0 is 0 in every dimension") {
    for (uint32_t d = 0; d < 8; ++d) REQUIRE(sobol_point(0, d, 6, table) == 0);
  }

  SECTION("dimension 0 is the bit-reversal (van der Corput) sequence") {
    std::vector<uint32_t> expect = {0, 4, 6, 2, 3, 7, 5, 1};
    for (uint32_t i = 0; i < 8; ++i) REQUIRE(sobol_point(i, 0, 3, table) == expect[i]);
    for (uint32_t n = 3; n <= 10; ++n) REQUIRE(sobol_point(1, 0, n, table) == (1u << (n - 1)));
  }

  SECTION("every dimension permutes 0..2^n-1") {
    const uint32_t n = 6;
    for (uint32_t d = 0; d < 8; ++d) {
      std::set<uint32_t> seen;
      for (uint64_t i = 0; i < (1u << n); ++i) {
        uint32_t x = sobol_point(i, d, n, table);
        REQUIRE(x < (1u << n));
        seen.insert(x);
      }
      INFO("dimension " << d);
      REQUIRE(seen.size() == (1u << n));
    }
  }

  SECTION("comparator stream is exactly balanced over a full period") {
    // permutation property: popcount == numerator for every value
    for (uint32_t n = 4; n <= 6; n += 2) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::Sobol;
      spec.width_log2 = n;
      spec.sobol_dimension = 1;
      for (uint32_t k = 0; k <= (1u << n); ++k)
        REQUIRE(generate_stream(UnaryValue(k, n), spec).popcount() == k);
    }
  }

  SECTION("bad arguments throw") {
    REQUIRE_THROWS_AS(sobol_point(0, 8, 6, table), std::invalid_argument);
    REQUIRE_THROWS_AS(sobol_point(64, 1, 6, table), std::invalid_argument);
  }
}

TEST_CASE("Sobol direction file matches the embedded table") {
  SobolTable loaded = load_sobol_directions("data/sobol_directions.txt");
  REQUIRE(loaded.dimension_count() == default_sobol_table().dimension_count());
  for (uint32_t d = 0; d < 8; ++d)
    REQUIRE(sobol_direction_numbers(d, 8, loaded) ==
            sobol_direction_numbers(d, 8, default_sobol_table()));
  REQUIRE_THROWS_AS(load_sobol_directions("data/no_such_file.txt"), std::runtime_error);
}

TEST_CASE("Halton radical inverse points") {
  REQUIRE(halton_point(0, 2, 4) == 0);
  REQUIRE(halton_point(1, 2, 4) == 8);    // 1/2 scaled to 16
  REQUIRE(halton_point(5, 3, 4) == 12);   // 5 -> 0.21_3 = 7/9; floor(16*7/9)
  REQUIRE(halton_point(3, 2, 4) == 12);   // 0.11_2
  for (uint64_t i = 0; i < 64; ++i) REQUIRE(halton_point(i, 3, 4) < 16);
  REQUIRE_THROWS_AS(halton_point(0, 1, 4), std::invalid_argument);
}

TEST_CASE("generate_stream enforces resolution agreement") {
  GeneratorSpec spec;
  spec.width_log2 = 6;
  REQUIRE_THROWS_AS(generate_stream(UnaryValue(5, 4), spec), std::invalid_argument);
}

TEST_CASE("kind_name round trip") {
  REQUIRE(std::string(kind_name(GeneratorKind::UnaryCounter)) == "counter");
  REQUIRE(std::string(kind_name(GeneratorKind::Lfsr)) == "lfsr");
  REQUIRE(std::string(kind_name(GeneratorKind::Sobol)) == "sobol");
  REQUIRE(std::string(kind_name(GeneratorKind::Halton)) == "halton");
}
