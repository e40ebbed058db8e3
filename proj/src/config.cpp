#include "lis/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lis {

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto c = s.find(',', start);
    out.push_back(trim(s.substr(start, c == std::string_view::npos ? s.npos : c - start)));
    if (c == std::string_view::npos) break;
    start = c + 1;
  }
  return out;
}

// Thrown inside a key handler; the parser attaches the line number.
struct LineError {
  std::string message;
};

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s == "inf") return kInf;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::int64_t parse_integer(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || s.empty()) throw LineError{"invalid integer"};
  return v;
}

// Splits "<numbers> m" into the number text; enforces the unit rule.
std::string_view strip_unit(std::string_view value, bool is_length) {
  value = trim(value);
  const bool has_m = value.size() >= 2 && value.back() == 'm' &&
                     (value[value.size() - 2] == ' ' || value[value.size() - 2] == '\t');
  if (is_length) {
    if (!has_m) throw LineError{"missing unit 'm'"};
    return trim(value.substr(0, value.size() - 1));
  }
  // Anything alphabetic after the number other than "inf" is a unit.
  if (!value.empty() && std::isalpha(static_cast<unsigned char>(value.back())) && value != "inf") {
    throw LineError{"unexpected unit (powers and N0 are linear)"};
  }
  return value;
}

double positive_number(std::string_view text, bool allow_inf) {
  const auto v = parse_double(text);
  if (!v || std::isnan(*v)) throw LineError{"invalid number"};
  if (!(*v > 0.0)) throw LineError{"non-positive value"};
  if (std::isinf(*v) && !allow_inf) throw LineError{"infinite value not allowed"};
  return *v;
}

std::vector<double> positive_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(positive_number(item, false));
  return out;
}

Receiver parse_receiver(std::string_view s) {
  if (s == "optimal") return Receiver::optimal();
  if (s == "mf") return Receiver::mf();
  if (s == "lmmse") return Receiver::lmmse();
  if (s.starts_with("cs")) {
    const auto nu = parse_integer(s.substr(2));
    if (nu < 0) throw LineError{"cs depth must be non-negative"};
    return Receiver::cs(static_cast<int>(nu));
  }
  throw LineError{"unknown receiver '" + std::string(s) + "'"};
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<std::pair<const char*, E>> options) {
  s = trim(s);
  std::vector<std::string> names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names.emplace_back(name);
  }
  throw LineError{"expected one of " + join(names, ", ")};
}

template <typename E>
const char* enum_name(E v, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, value] : options) {
    if (v == value) return name;
  }
  return "?";
}

const std::initializer_list<std::pair<const char*, ScenarioKind>> kKinds = {
    {"line", ScenarioKind::Line}, {"plane", ScenarioKind::Plane}, {"room", ScenarioKind::Room}};
const std::initializer_list<std::pair<const char*, Placement>> kPlacements = {
    {"random", Placement::Random}, {"uniform", Placement::Uniform}};
const std::initializer_list<std::pair<const char*, GramMethod>> kMethods = {
    {"quadrature", GramMethod::Quadrature}, {"sinc1d", GramMethod::Sinc1d},
    {"sinc2d", GramMethod::Sinc2d}};

std::string format_list(const std::vector<double>& v, const char* unit) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(format_number(x));
  return join(parts, ", ") + unit;
}

struct KeySpec {
  std::function<void(ExperimentConfig&, std::string_view)> parse;
  std::function<std::optional<std::string>(const ExperimentConfig&)> print;
};

template <typename T>
std::optional<std::string> maybe(const std::optional<T>& v, std::function<std::string(const T&)> f) {
  if (!v) return std::nullopt;
  return f(*v);
}

using DoubleField = std::optional<double> ExperimentConfig::*;
using IntField = std::optional<int> ExperimentConfig::*;
using ListField = std::optional<std::vector<double>> ExperimentConfig::*;

KeySpec length_key(DoubleField field, bool allow_inf) {
  return {[=](ExperimentConfig& c, std::string_view v) {
            c.*field = positive_number(strip_unit(v, true), allow_inf);
          },
          [=](const ExperimentConfig& c) {
            return maybe<double>(c.*field, [](const double& x) { return format_number(x) + " m"; });
          }};
}

KeySpec scalar_key(DoubleField field) {
  return {[=](ExperimentConfig& c, std::string_view v) {
            c.*field = positive_number(strip_unit(v, false), false);
          },
          [=](const ExperimentConfig& c) {
            return maybe<double>(c.*field, [](const double& x) { return format_number(x); });
          }};
}

KeySpec count_key(IntField field, std::int64_t min_value) {
  return {[=](ExperimentConfig& c, std::string_view v) {
            const auto n = parse_integer(strip_unit(v, false));
            if (n < min_value) throw LineError{min_value > 0 ? "non-positive value" : "negative value"};
            if (n > 1000000000) throw LineError{"value too large"};
            c.*field = static_cast<int>(n);
          },
          [=](const ExperimentConfig& c) {
            return maybe<int>(c.*field, [](const int& x) { return std::to_string(x); });
          }};
}

KeySpec list_key(ListField field, bool lengths) {
  return {[=](ExperimentConfig& c, std::string_view v) {
            c.*field = positive_list(strip_unit(v, lengths));
          },
          [=](const ExperimentConfig& c) {
            return maybe<std::vector<double>>(
                c.*field, [=](const std::vector<double>& x) { return format_list(x, lengths ? " m" : ""); });
          }};
}

const std::map<std::string, KeySpec, std::less<>>& key_table() {
  static const std::map<std::string, KeySpec, std::less<>> table = {
      {"scenario",
       {[](ExperimentConfig& c, std::string_view v) { c.scenario = parse_enum(v, kKinds); },
        [](const ExperimentConfig& c) {
          return maybe<ScenarioKind>(c.scenario, [](const ScenarioKind& k) {
            return std::string(enum_name(k, kKinds));
          });
        }}},
      {"placement",
       {[](ExperimentConfig& c, std::string_view v) { c.placement = parse_enum(v, kPlacements); },
        [](const ExperimentConfig& c) {
          return maybe<Placement>(c.placement, [](const Placement& p) {
            return std::string(enum_name(p, kPlacements));
          });
        }}},
      {"gram_method",
       {[](ExperimentConfig& c, std::string_view v) { c.gram_method = parse_enum(v, kMethods); },
        [](const ExperimentConfig& c) {
          return maybe<GramMethod>(c.gram_method, [](const GramMethod& m) {
            return std::string(enum_name(m, kMethods));
          });
        }}},
      {"length", length_key(&ExperimentConfig::length, false)},
      {"width", length_key(&ExperimentConfig::width, false)},
      {"height", length_key(&ExperimentConfig::height, false)},
      {"terminal_z", length_key(&ExperimentConfig::terminal_z, false)},
      {"room_z_min", length_key(&ExperimentConfig::room_z_min, false)},
      {"lis_half_length", length_key(&ExperimentConfig::lis_half_length, true)},
      {"lis_half_width", length_key(&ExperimentConfig::lis_half_width, true)},
      {"lambda", length_key(&ExperimentConfig::lambda, false)},
      {"n0", scalar_key(&ExperimentConfig::n0)},
      {"zeta", scalar_key(&ExperimentConfig::zeta)},
      {"p", scalar_key(&ExperimentConfig::p)},
      {"p_hat", scalar_key(&ExperimentConfig::p_hat)},
      {"densities", list_key(&ExperimentConfig::densities, false)},
      {"thetas", list_key(&ExperimentConfig::thetas, false)},
      {"lambdas", list_key(&ExperimentConfig::lambdas, true)},
      {"receivers",
       {[](ExperimentConfig& c, std::string_view v) {
          std::vector<Receiver> rs;
          for (auto item : split_list(v)) rs.push_back(parse_receiver(item));
          c.receivers = rs;
        },
        [](const ExperimentConfig& c) {
          return maybe<std::vector<Receiver>>(c.receivers, [](const auto& rs) {
            std::vector<std::string> names;
            for (const auto& r : rs) names.push_back(r.name());
            return join(names, ", ");
          });
        }}},
      {"ppw", count_key(&ExperimentConfig::points_per_wavelength, 1)},
      {"trials", count_key(&ExperimentConfig::trials, 1)},
      {"k_max", count_key(&ExperimentConfig::k_max, 1)},
      {"workers", count_key(&ExperimentConfig::workers, 0)},
      {"seed",
       {[](ExperimentConfig& c, std::string_view v) {
          v = trim(v);
          std::uint64_t s = 0;
          const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
          if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty()) {
            throw LineError{"invalid seed"};
          }
          c.seed = s;
        },
        [](const ExperimentConfig& c) {
          return maybe<std::uint64_t>(c.seed, [](const std::uint64_t& s) { return std::to_string(s); });
        }}},
      {"out",
       {[](ExperimentConfig& c, std::string_view v) {
          v = trim(v);
          if (v.empty()) throw LineError{"empty path"};
          c.out = std::string(v);
        },
        [](const ExperimentConfig& c) {
          return maybe<std::string>(c.out, [](const std::string& s) { return s; });
        }}},
      {"svg",
       {[](ExperimentConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "true") c.svg = true;
          else if (v == "false") c.svg = false;
          else throw LineError{"expected true or false"};
        },
        [](const ExperimentConfig& c) {
          return maybe<bool>(c.svg, [](const bool& b) { return std::string(b ? "true" : "false"); });
        }}},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : InputError(join(errors, "\n")), errors_(std::move(errors)) {}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  const auto& table = key_table();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::string> seen;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (nl == std::string_view::npos && raw.empty()) break;  // trailing newline
    const auto line = trim(raw);
    const auto suffix = ", line " + std::to_string(line_no);
    if (line.empty() || line.front() == '#') {
      cfg.layout.push_back({"", std::string(raw)});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("expected 'key = value'" + suffix);
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) {
      errors.push_back("unknown key '" + key + "'" + suffix);
      continue;
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      errors.push_back("duplicate key '" + key + "'" + suffix);
      continue;
    }
    if (value.empty()) {
      errors.push_back("missing value" + suffix);
      continue;
    }
    try {
      it->second.parse(cfg, value);
      seen.push_back(key);
      cfg.layout.push_back({key, ""});
    } catch (const LineError& e) {
      errors.push_back(e.message + suffix);
    }
    if (key == "p_hat" || key == "p") {
      if (cfg.p && cfg.p_hat) errors.push_back("p and p_hat are mutually exclusive" + suffix);
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string ExperimentConfig::to_text() const {
  const auto& table = key_table();
  std::string out;
  std::vector<std::string> printed;
  for (const auto& line : layout) {
    if (line.key.empty()) {
      out += line.verbatim + "\n";
      continue;
    }
    const auto v = table.at(line.key).print(*this);
    if (!v) continue;
    out += line.key + " = " + *v + "\n";
    printed.push_back(line.key);
  }
  // Fields set programmatically after parsing, in table order.
  for (const auto& [key, spec] : table) {
    if (std::find(printed.begin(), printed.end(), key) != printed.end()) continue;
    if (const auto v = spec.print(*this)) out += key + " = " + *v + "\n";
  }
  return out;
}

void ExperimentConfig::apply(Scenario& sc) const {
  if (scenario) sc.kind = *scenario;
  if (placement) sc.placement = *placement;
  if (length) sc.length = *length;
  if (width) sc.width = *width;
  if (height) sc.height = *height;
  if (terminal_z) sc.terminal_z = *terminal_z;
  if (room_z_min) sc.room_z_min = *room_z_min;
  if (lis_half_length || lis_half_width) {
    sc.surface = SurfaceSpec(lis_half_length.value_or(sc.surface.half_length()),
                             lis_half_width.value_or(sc.surface.half_width()));
  }
  if (lambda) sc.wavelength = *lambda;
  if (n0) sc.n0 = *n0;
  if (p) {
    sc.power_mode = PowerMode::PerTerminal;
    sc.power = *p;
  }
  if (p_hat) {
    sc.power_mode = PowerMode::PerVolume;
    sc.power = *p_hat;
  }
  if (gram_method) sc.method = *gram_method;
  if (points_per_wavelength) sc.quadrature.points_per_wavelength = *points_per_wavelength;
  if (seed) sc.seed = *seed;
  if (trials) sc.trials = *trials;
  if (k_max) sc.k_max = static_cast<std::size_t>(*k_max);
  if (workers) sc.workers = static_cast<unsigned>(*workers);
}

}  // namespace lis
