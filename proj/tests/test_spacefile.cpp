#include "doctest.h"
#include "mms/harness.hpp"
#include "mms/spacefile.hpp"

using namespace mms;

TEST_CASE("explicit space files") {
  ParsedSpace p = parse_space_text(
      "# three points\n"
      "labels: [a b c]\n"
      "dist: [[0 1 2] [1 0 1] [2 1 0]]\n"
      "weight: [0.5 0.3 0.2]\n");
  REQUIRE(std::holds_alternative<FiniteMmSpace>(p));
  const auto& x = std::get<FiniteMmSpace>(p);
  CHECK(x.size() == 3);
  CHECK(x.dist(0, 2) == 2.0);
  // zero weights are pruned on load
  ParsedSpace q = parse_space_text(
      "labels: [a b]\ndist: [[0 1] [1 0]]\nweight: [1 0]\n");
  CHECK(std::get<FiniteMmSpace>(q).size() == 1);
  // infinite entries produce an extended space
  ParsedSpace e = parse_space_text(
      "labels: [a b]\ndist: [[0 inf] [inf 0]]\nweight: [0.5 0.5]\n");
  CHECK(std::holds_alternative<ExtendedMmSpace>(e));
}

TEST_CASE("generator expressions") {
  ParsedSpace p = parse_space_expression("dissipation(8)");
  CHECK(std::get<FiniteMmSpace>(p).size() == 8);
  ParsedSpace w = parse_space_expression(
      "wedge(two_point(1, 0.5), 0, two_point(1, 0.5), 0, 0.5)");
  CHECK(std::get<FiniteMmSpace>(w).size() == 3);
  ParsedSpace g = parse_space_expression(
      "gapped_sum([(two_point(1, 0.5), 0, 0.5) (point(), 0, 0.5)], 5)");
  CHECK(std::get<FiniteMmSpace>(g).size() == 3);
  ParsedSpace d = parse_space_expression(
      "direct_sum([(cycle(4, 6.28), 0.5) (point(), 0.5)])");
  CHECK(std::holds_alternative<ExtendedMmSpace>(d));
  ParsedSpace s = parse_space_expression("scale(lp_power(two_point(1, 0.5), inf, 2), 3)");
  CHECK(std::get<FiniteMmSpace>(s).diameter() == doctest::Approx(3.0));
  ParsedSpace r = parse_space_expression("restrict(cycle(6, 6.0), [0 1 2])");
  CHECK(std::get<FiniteMmSpace>(r).size() == 3);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_space_text("labels: [a b]\ndist: [[0 1] [1 0 3]]\nweight: [0.5 0.5]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_space_expression("unknown_gen(3)"), ParseError);
  CHECK_THROWS_AS(parse_space_expression("two_point(1"), ParseError);
  CHECK_THROWS_AS(parse_space_expression("two_point(1, 0.5) trailing"), ParseError);
}

TEST_CASE("serialize round trip") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    FiniteMmSpace x = random_space(rng, 1, 6);
    ParsedSpace back = parse_space_text(serialize_space(x));
    REQUIRE(std::holds_alternative<FiniteMmSpace>(back));
    CHECK(mm_isomorphic(x, std::get<FiniteMmSpace>(back)).has_value());
  }
  // extended round trip via expression building
  ExtendedMmSpace z = std::get<ExtendedMmSpace>(parse_space_expression(
      "direct_sum([(two_point(1, 0.5), 0.25) (point(), 0.75)])"));
  ParsedSpace back = parse_space_text(serialize_space(z));
  REQUIRE(std::holds_alternative<ExtendedMmSpace>(back));
  CHECK(std::get<ExtendedMmSpace>(back).finite_components().size() == 2);
}
