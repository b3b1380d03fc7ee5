#include <catch2/catch_amalgamated.hpp>

#include "projdyn/poly_parser.hpp"
#include "test_support.hpp"

using namespace projdyn;
using test_support::kXYZ;

TEST_CASE("parses plain integer polynomials") {
  auto p = parse_homogeneous("3*x^2*y - z^3", kXYZ);
  CHECK(p.degree() == 3);
  CHECK(p.term_count() == 2);
  CHECK(p.to_string(kXYZ) == "3*x^2*y - z^3");
}

TEST_CASE("parses parenthesized products and juxtaposition") {
  CHECK(parse_homogeneous("(x + y)^2", kXYZ) == parse_homogeneous("x^2 + 2*x*y + y^2", kXYZ));
  CHECK(parse_homogeneous("2x y", kXYZ) == parse_homogeneous("2*x*y", kXYZ));
  CHECK(parse_homogeneous("-x*y + -(y*z)", kXYZ) == parse_homogeneous("0 - x*y - y*z", kXYZ));
}

TEST_CASE("clears rational coefficients by the denominator lcm") {
  auto p = parse_homogeneous("1/2*x^2 + y^2", kXYZ);
  CHECK(p == parse_homogeneous("x^2 + 2*y^2", kXYZ));
}

TEST_CASE("rejects non-homogeneous input naming the offending monomials") {
  try {
    parse_homogeneous("x^2*y + z^2", kXYZ);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("z^2") != std::string::npos);
    CHECK(msg.find("degree") != std::string::npos);
  }
}

TEST_CASE("reports the position of syntax errors") {
  try {
    parse_homogeneous("x^2 + q^2", kXYZ);
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("q") != std::string::npos);
    CHECK(e.column == 6);
  }
  CHECK_THROWS_AS(parse_homogeneous("x^2 +", kXYZ), ParseError);
  CHECK_THROWS_AS(parse_homogeneous("(x^2", kXYZ), ParseError);
  CHECK_THROWS_AS(parse_homogeneous("1/0*x", kXYZ), ParseError);
}

TEST_CASE("zero polynomial parses") {
  CHECK(parse_homogeneous("0", kXYZ).is_zero());
  CHECK(parse_homogeneous("x*y - x*y", kXYZ).is_zero());
}
