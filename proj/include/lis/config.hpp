#pragma once

// Flat `key = value` experiment documents. Lengths carry an `m` suffix;
// powers and N0 are linear and unitless. Blank lines and `#` comments are
// kept so that a parsed document prints back to the same text.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lis/error.hpp"
#include "lis/scenario.hpp"

namespace lis {

class ConfigError : public InputError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ExperimentConfig {
  std::optional<ScenarioKind> scenario;
  std::optional<Placement> placement;
  std::optional<double> length, width, height, terminal_z, room_z_min;
  std::optional<double> lis_half_length, lis_half_width;  // may be infinite
  std::optional<double> lambda, n0, zeta, p, p_hat;
  std::optional<std::vector<double>> densities;
  std::optional<std::vector<double>> thetas;
  std::optional<std::vector<double>> lambdas;
  std::optional<std::vector<Receiver>> receivers;
  std::optional<GramMethod> gram_method;
  std::optional<int> points_per_wavelength;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> k_max;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<bool> svg;

  /// Overlays the fields that are set onto `sc`. Setting `p` selects
  /// per-terminal power, `p_hat` per-extent power.
  void apply(Scenario& sc) const;

  /// Canonical text in the order the keys were read (or a fixed order for
  /// programmatically built configs).
  std::string to_text() const;

  // Source layout for round-tripping: key names and verbatim comment lines.
  struct Line {
    std::string key;      // empty for comment/blank lines
    std::string verbatim; // comment/blank text
  };
  std::vector<Line> layout;
};

/// Parses a document; raises ConfigError listing every problem as
/// "<message>, line N".
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file.
ExperimentConfig load_config(const std::string& path);

/// Shortest decimal text that reads back to the same double ("inf" for +inf).
std::string format_number(double v);

}  // namespace lis
