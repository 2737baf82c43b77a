#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include "zebra/error.hpp"
#include "zebra/json_format.hpp"

using namespace zebra;

TEST_CASE("format_double keeps floats recognizable") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e300) == "1e+300");
  CHECK_THROWS_AS(format_double(std::nan("")), ValidationError);
  CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("format_double round-trips random doubles exactly") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int i = 0; i < 20000; ++i) {
    double v = unit(rng) * std::pow(10.0, exponent(rng));
    if (i % 2) v = -v;
    std::string s = format_double(v);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(ec == std::errc());
    CHECK(back == v);
  }
}

TEST_CASE("dump_canonical preserves insertion order and is byte-stable") {
  ordered_json doc = ordered_json::object();
  doc["zeta"] = 1;
  doc["alpha"] = 0.25;
  doc["mid"] = ordered_json::array({1.0, "x", nullptr, true});
  doc["empty"] = ordered_json::object();
  std::string once = dump_canonical(doc);
  CHECK(once == R"({"zeta":1,"alpha":0.25,"mid":[1.0,"x",null,true],"empty":{}})");
  CHECK(dump_canonical(doc) == once);
  CHECK(nlohmann::json::parse(dump_pretty(doc)) == nlohmann::json::parse(once));
}

TEST_CASE("strings are escaped as JSON") {
  ordered_json doc = {{"t", "line\nbreak \"quoted\" \\ tab\t"}};
  auto parsed = nlohmann::json::parse(dump_canonical(doc));
  CHECK(parsed["t"] == "line\nbreak \"quoted\" \\ tab\t");
}
