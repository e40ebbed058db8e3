#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "lis/config.hpp"

using namespace lis;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> errors_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal document") {
  const auto c = parse_config("lambda = 0.5 m\nn0 = 1\np_hat = 10");
  CHECK(*c.lambda == 0.5);
  CHECK(*c.n0 == 1.0);
  CHECK(*c.p_hat == 10.0);
  CHECK_FALSE(c.p.has_value());
}

TEST_CASE("error messages carry line numbers") {
  auto e = errors_of("lambda = -1 m");
  REQUIRE(e.size() == 1);
  CHECK(e[0] == "non-positive value, line 1");

  e = errors_of("n0 = 1\nlambda = 0.5");
  REQUIRE(e.size() == 1);
  CHECK(e[0] == "missing unit 'm', line 2");

  e = errors_of("p_hat = 10 m");
  REQUIRE(e.size() == 1);
  CHECK(e[0].find("unexpected unit") == 0);

  e = errors_of("foo = 1\n\nbar = 2");
  REQUIRE(e.size() == 2);
  CHECK(e[0] == "unknown key 'foo', line 1");
  CHECK(e[1] == "unknown key 'bar', line 3");

  CHECK(errors_of("n0 = 1\nn0 = 2")[0] == "duplicate key 'n0', line 2");
  CHECK(errors_of("lambda 0.5 m")[0] == "expected 'key = value', line 1");
  CHECK(errors_of("n0 = 1.2.3")[0] == "invalid number, line 1");
  CHECK(errors_of("p = 1\np_hat = 2").back().find("mutually exclusive") != std::string::npos);
}

TEST_CASE("lists, enums and infinite extents") {
  const auto c = parse_config(
      "lambdas = 0.1, 0.5 m\nthetas = 0.5, 1, 2\nreceivers = optimal, cs2\n"
      "scenario = plane\nplacement = uniform\ngram_method = sinc2d\nlis_half_length = inf m\n");
  CHECK(c.lambdas->size() == 2);
  CHECK(c.thetas->at(2) == 2.0);
  CHECK(c.receivers->at(1) == Receiver::cs(2));
  CHECK(*c.scenario == ScenarioKind::Plane);
  CHECK(*c.placement == Placement::Uniform);
  CHECK(*c.gram_method == GramMethod::Sinc2d);
  CHECK(std::isinf(*c.lis_half_length));
}

TEST_CASE("room document round-trips to identical text") {
  const std::string text = slurp(std::string(LIS_EXAMPLES_DIR) + "/fig9.cfg");
  REQUIRE(!text.empty());
  const auto c = parse_config(text);
  CHECK(c.to_text() == text);
  CHECK(*c.scenario == ScenarioKind::Room);
  CHECK(*c.lis_half_length == 1.0);
  CHECK(*c.lis_half_width == 0.5);
  CHECK(parse_config(c.to_text()).to_text() == text);
}

TEST_CASE("apply overlays a scenario") {
  Scenario sc;
  const auto c = load_config(std::string(LIS_EXAMPLES_DIR) + "/fig9.cfg");
  c.apply(sc);
  CHECK(sc.kind == ScenarioKind::Room);
  CHECK(sc.length == 4.0);
  CHECK(sc.surface.half_length() == 1.0);
  CHECK(sc.wavelength == 0.5);
  CHECK(sc.power_mode == PowerMode::PerVolume);
  CHECK(sc.power == 10.0);
  CHECK(sc.trials == 20);

  Scenario sp;
  parse_config("p = 3").apply(sp);
  CHECK(sp.power_mode == PowerMode::PerTerminal);
  CHECK(sp.power == 3.0);
}

TEST_CASE("load_config on a missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), InputError);
}

TEST_CASE("format_number is shortest round-trip") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(10.0) == "10");
  CHECK(format_number(kInf) == "inf");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
