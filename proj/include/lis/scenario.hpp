#pragma once

// Seeded Monte Carlo deployments and density sweeps.
//
// Geometry: the surface lies in the plane z = 0, centred at the origin.
//  - line:  terminals on y = 0, z = terminal_z, x in [-L/2, L/2]
//  - plane: z = terminal_z, x in [-L/2, L/2], y in [-W/2, W/2]
//  - room:  x in [-L/2, L/2], y in [-W/2, W/2], z in [z_min, H]; the
//           surface hangs on the wall (or ceiling) at z = 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lis/em_channel.hpp"
#include "lis/types.hpp"

namespace lis {

enum class ScenarioKind { Line, Plane, Room };
enum class Placement { Random, Uniform };
enum class PowerMode { PerTerminal, PerVolume };
enum class MetricMode { Normalized, PerTerminal, SumRate };

struct Receiver {
  enum class Kind { Optimal, MatchedFilter, Lmmse, ChannelShortening };
  Kind kind = Kind::Optimal;
  int nu = 0;  // only for ChannelShortening

  static Receiver optimal() { return {Kind::Optimal, 0}; }
  static Receiver mf() { return {Kind::MatchedFilter, 0}; }
  static Receiver lmmse() { return {Kind::Lmmse, 0}; }
  static Receiver cs(int nu) { return {Kind::ChannelShortening, nu}; }
  std::string name() const;
  bool operator==(const Receiver&) const = default;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Line;
  Placement placement = Placement::Random;
  double length = 10.0;      // m
  double width = 0.0;        // m, plane and room
  double height = 0.0;       // m, room depth away from the surface
  double terminal_z = 2.0;   // m, line and plane
  double room_z_min = 0.0;   // m, room; 0 selects wavelength / 2
  double density = 1.0;      // terminals per m, m^2 or m^3
  SurfaceSpec surface = SurfaceSpec::infinite_plane();
  double wavelength = 0.5;
  double n0 = 1.0;
  PowerMode power_mode = PowerMode::PerVolume;
  double power = 10.0;       // P per terminal, or P_hat per unit extent
  GramMethod method = GramMethod::Quadrature;
  QuadratureConfig quadrature;
  std::uint64_t seed = 1;
  int trials = 1;
  std::size_t k_max = 2048;
  unsigned workers = 0;      // 0 selects hardware concurrency

  void validate() const;
  /// Length, area or volume of the deployment region.
  double extent_measure() const;
};

struct DeployResult {
  Deployment deployment;
  std::vector<std::string> warnings;
};

/// Terminal count round(density * extent); the window shrinks (keeping the
/// density) when that exceeds k_max. Deterministic in (seed, trial_index).
DeployResult deploy(const Scenario& scenario, std::uint64_t trial_index);

struct SweepRow {
  double density = 0.0;
  Receiver receiver;
  double mean = 0.0;
  double stddev = 0.0;
  int trials = 0;
  double terminals = 0.0;  // mean K
};

struct SweepResult {
  MetricMode metric = MetricMode::Normalized;
  std::vector<SweepRow> rows;  // sorted by density, then receiver order
  std::vector<std::string> warnings;

  /// Mean for (density, receiver); throws if absent.
  const SweepRow& at(double density, const Receiver& r) const;
};

/// Per-terminal rate of one receiver on one Gram matrix (nats/s/Hz).
double receiver_rate(const CMatrix& g, double n0, const Receiver& r);

/// For each density, runs `trials` deployments, evaluates every receiver on
/// the Gram matrix and aggregates mean and sample standard deviation. Trials
/// may run on several threads; the reduction is indexed, so the output does
/// not depend on the worker count.
SweepResult run_sweep(const Scenario& scenario, const std::vector<double>& densities,
                      const std::vector<Receiver>& receivers,
                      MetricMode metric = MetricMode::Normalized);

}  // namespace lis
