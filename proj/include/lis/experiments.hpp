#pragma once

// Figure presets and table builders shared by the CLI and the acceptance
// runner. Each builder returns the CSV table, an optional chart and notes.

#include <optional>
#include <string>
#include <vector>

#include "lis/config.hpp"
#include "lis/report.hpp"
#include "lis/scenario.hpp"

namespace lis {

struct RunOptions {
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<unsigned> workers;
  ExperimentConfig config;  // overlays the preset; flags win over config
};

struct Artifact {
  Table table;
  Plot plot;
  std::vector<std::string> notes;     // printed to stdout
  std::vector<std::string> warnings;  // printed to stderr
};

enum class Figure { Fig4, Fig5, Fig7, Fig8, Fig9, FigCS, Fig10 };

std::optional<Figure> parse_figure(std::string_view name);
std::string figure_name(Figure f);

/// Preset scenario of a figure before options are applied.
Scenario figure_scenario(Figure f);

/// Default spacing grid (m, m^2 or m^3 per terminal) of a sweep figure.
/// Line and plane grids are factors of two around the expected threshold.
std::vector<double> figure_spacings(Figure f, double wavelength);

/// Preset with config, lambda, seed, trials and workers applied.
Scenario resolve_scenario(Figure f, const RunOptions& opt);

/// Largest spacing s on a factor-2 grid with value(s/2) < (1 + rel_gain) value(s).
struct SaturationResult {
  std::optional<double> onset;           // nullopt when no spacing qualifies
  std::vector<double> spacings;          // descending
  std::vector<double> gains;             // value(s/2)/value(s) - 1, NaN for the last
};
SaturationResult detect_saturation(const std::vector<double>& spacings,
                                   const std::vector<double>& values, double rel_gain = 0.02);

/// Number of factor-2 steps between a and b (log2(a/b)), rounded.
int grid_steps(double a, double b);

Artifact run_figure(Figure f, const RunOptions& opt);

Artifact run_appendix_a();
Artifact run_lattice(double wavelength);
Artifact run_capacity_1d(const RunOptions& opt);
Artifact run_capacity_2d(const RunOptions& opt);
Artifact run_gram(const RunOptions& opt);
Artifact run_cs_air(const RunOptions& opt);

}  // namespace lis
