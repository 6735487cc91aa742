#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vanet/csv.hpp"
#include "vanet/errors.hpp"

using namespace vanet;

TEST_CASE("doubles round trip through text") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(400.0) == "400");
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK(parse_double(format_double(std::numeric_limits<double>::infinity())) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("optional fields") {
  CHECK(format_optional(std::nullopt).empty());
  CHECK_FALSE(parse_optional("").has_value());
  CHECK(*parse_optional(format_optional(2.25)) == 2.25);
}

TEST_CASE("malformed numbers") {
  CHECK_THROWS_AS(parse_double("abc"), IoError);
  CHECK_THROWS_AS(parse_double("1.5x"), IoError);
  CHECK_THROWS_AS(parse_int("3.5"), IoError);
  CHECK(parse_int("-42") == -42);
}

TEST_CASE("writer and parser round trip") {
  std::ostringstream os;
  {
    CsvWriter w(os, {"a", "b", "c"}, {"config seed=1 f=400"});
    w.row({"1", "0.25", ""});
    w.row({"2", "1e-300", "x"});
    CHECK_THROWS(w.row({"only", "two"}));
  }
  const std::string text = os.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.rfind("# config seed=1 f=400\na,b,c\n", 0) == 0);
  const auto table = parse_csv(text);
  CHECK(table.comments == std::vector<std::string>{"config seed=1 f=400"});
  CHECK(table.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0] == std::vector<std::string>{"1", "0.25", ""});
  CHECK(table.rows[1][1] == "1e-300");
  CHECK(table.column("c") == 2);
  CHECK_THROWS_AS(table.column("zzz"), IoError);
}

TEST_CASE("reading a missing file is an IO error") {
  CHECK_THROWS_AS(read_csv("/nonexistent/dir/file.csv"), IoError);
}
