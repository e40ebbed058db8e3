#include <doctest.h>

#include <cmath>

#include "lis/capacity.hpp"
#include "lis/error.hpp"
#include "lis/scenario.hpp"

using namespace lis;

namespace {

Scenario line_preset() {
  Scenario sc;
  sc.kind = ScenarioKind::Line;
  sc.length = 10.0;
  sc.terminal_z = 2.0;
  sc.wavelength = 0.5;
  sc.method = GramMethod::Sinc1d;
  sc.surface = SurfaceSpec::infinite_plane();
  sc.power_mode = PowerMode::PerVolume;
  sc.power = 10.0;
  return sc;
}

}  // namespace

TEST_CASE("receiver names") {
  CHECK(Receiver::optimal().name() == "optimal");
  CHECK(Receiver::mf().name() == "mf");
  CHECK(Receiver::lmmse().name() == "lmmse");
  CHECK(Receiver::cs(3).name() == "cs3");
}

TEST_CASE("terminal counts and placement bounds") {
  auto sc = line_preset();
  sc.density = 10.0;
  const auto d = deploy(sc, 0).deployment;
  CHECK(d.size() == 100);
  for (const auto& t : d.terminals) {
    CHECK(std::abs(t.x) <= 5.0);
    CHECK(t.y == 0.0);
    CHECK(t.z == 2.0);
  }
  // Per-extent power is shared among terminals.
  CHECK(d.powers[0] == doctest::Approx(1.0));

  sc.kind = ScenarioKind::Room;
  sc.length = sc.width = sc.height = 4.0;
  sc.density = 0.5;
  sc.method = GramMethod::Quadrature;
  const auto r = deploy(sc, 3).deployment;
  CHECK(r.size() == 32);
  for (const auto& t : r.terminals) {
    CHECK(t.z >= 0.25);
    CHECK(t.z <= 4.0);
    CHECK(std::abs(t.y) <= 2.0);
  }
}

TEST_CASE("window shrinks when the count exceeds k_max") {
  Scenario sc;
  sc.kind = ScenarioKind::Plane;
  sc.length = sc.width = 20.0;
  sc.density = 10.0;
  sc.k_max = 500;
  sc.method = GramMethod::Sinc2d;
  const auto res = deploy(sc, 0);
  CHECK(res.deployment.size() <= 500);
  CHECK(res.deployment.size() >= 495);
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("k_max") != std::string::npos);
  double xmax = 0.0;
  for (const auto& t : res.deployment.terminals) xmax = std::max(xmax, std::abs(t.x));
  CHECK(xmax <= 10.0 * std::sqrt(500.0 / 4000.0) + 1e-12);
}

TEST_CASE("plane preset at ds = lambda^2 / pi is capped at 2048 terminals") {
  Scenario sc;
  sc.kind = ScenarioKind::Plane;
  sc.length = sc.width = 20.0;
  sc.wavelength = 0.4;
  sc.density = kPi / (0.4 * 0.4);
  sc.method = GramMethod::Sinc2d;
  CHECK(std::lround(sc.density * sc.extent_measure()) == 7854);
  const auto res = deploy(sc, 0);
  CHECK(res.deployment.size() <= 2048);
  CHECK(res.deployment.size() >= 2040);
  CHECK(res.warnings.size() == 1);
}

TEST_CASE("uniform placement on the line is a regular grid") {
  auto sc = line_preset();
  sc.placement = Placement::Uniform;
  sc.density = 4.0;
  const auto d = deploy(sc, 0).deployment;
  REQUIRE(d.size() == 40);
  for (std::size_t i = 1; i < d.size(); ++i)
    CHECK(d.terminals[i].x - d.terminals[i - 1].x == doctest::Approx(0.25));
}

TEST_CASE("deployments are deterministic per (seed, trial)") {
  auto sc = line_preset();
  sc.density = 3.0;
  const auto a = deploy(sc, 5).deployment;
  const auto b = deploy(sc, 5).deployment;
  const auto c = deploy(sc, 6).deployment;
  REQUIRE(a.size() == b.size());
  bool differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.terminals[i].x == b.terminals[i].x);
    differ = differ || a.terminals[i].x != c.terminals[i].x;
  }
  CHECK(differ);
}

TEST_CASE("sweep results do not depend on the worker count") {
  auto sc = line_preset();
  sc.trials = 5;
  const std::vector<double> dens{1.0, 4.0};
  const std::vector<Receiver> rx{Receiver::optimal(), Receiver::mf(), Receiver::cs(1)};
  sc.workers = 1;
  const auto one = run_sweep(sc, dens, rx);
  sc.workers = 3;
  const auto three = run_sweep(sc, dens, rx);
  REQUIRE(one.rows.size() == 6);
  REQUIRE(three.rows.size() == 6);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].mean == three.rows[i].mean);
    CHECK(one.rows[i].stddev == three.rows[i].stddev);
    CHECK(one.rows[i].receiver == three.rows[i].receiver);
  }
  CHECK(one.at(4.0, Receiver::cs(1)).trials == 5);
  CHECK_THROWS(one.at(2.0, Receiver::optimal()));
}

TEST_CASE("optimal receiver dominates the linear ones") {
  auto sc = line_preset();
  sc.trials = 4;
  const auto res = run_sweep(sc, {2.0, 8.0},
                             {Receiver::optimal(), Receiver::mf(), Receiver::lmmse(), Receiver::cs(2)});
  for (double d : {2.0, 8.0}) {
    const double opt = res.at(d, Receiver::optimal()).mean;
    CHECK(res.at(d, Receiver::mf()).mean <= opt + 1e-12);
    CHECK(res.at(d, Receiver::lmmse()).mean <= res.at(d, Receiver::cs(2)).mean + 1e-12);
    CHECK(res.at(d, Receiver::cs(2)).mean <= opt + 1e-12);
  }
}

TEST_CASE("uniform line converges to the infinite-line closed form") {
  for (double theta : {0.5, 1.0, 2.0}) {
    CAPTURE(theta);
    auto sc = line_preset();
    sc.placement = Placement::Uniform;
    sc.length = 60 * sc.wavelength;
    const double dx = sc.wavelength / (2 * theta);
    const auto res = run_sweep(sc, {1.0 / dx}, {Receiver::optimal()}, MetricMode::Normalized);
    const double closed = capacity_1d_optimal(theta, 0.5, sc.power, sc.wavelength, sc.n0) / dx;
    CHECK(res.rows[0].mean == doctest::Approx(closed).epsilon(0.05));
  }
}

TEST_CASE("receiver_rate on a diagonal Gram matrix") {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 3.0;
  const double ref = 0.5 * (std::log(2.0) + std::log(4.0));
  for (auto r : {Receiver::optimal(), Receiver::mf(), Receiver::lmmse(), Receiver::cs(1)})
    CHECK(receiver_rate(g, 1.0, r) == doctest::Approx(ref));
}

TEST_CASE("scenario validation") {
  Scenario sc;
  sc.density = -1.0;
  CHECK_THROWS_AS(sc.validate(), InputError);
  sc = Scenario{};
  sc.kind = ScenarioKind::Plane;
  sc.width = 0.0;
  CHECK_THROWS_AS(sc.validate(), InputError);
}
