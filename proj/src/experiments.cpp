#include "lis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lis/capacity.hpp"
#include "lis/cs_equalizer.hpp"
#include "lis/error.hpp"
#include "lis/lattice.hpp"
#include "lis/spectrum.hpp"

namespace lis {

namespace {

std::string pct(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << 100.0 * v << "%";
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(lo + step * i);
  return v;
}

std::vector<double> factor_two_grid(double center, int up, int down) {
  std::vector<double> v;
  for (int j = up; j >= -down; --j) v.push_back(std::ldexp(center, j));
  return v;
}

const Table kSweepHeader{{"spacing", "density", "receiver", "mean", "std", "trials", "terminals"}, {}};

void append_rows(Table& t, const SweepResult& r, const std::vector<Cell>& prefix = {}) {
  for (const auto& row : r.rows) {
    std::vector<Cell> cells = prefix;
    cells.insert(cells.end(), {1.0 / row.density, row.density, row.receiver.name(), row.mean,
                               row.stddev, static_cast<std::int64_t>(row.trials), row.terminals});
    t.add(std::move(cells));
  }
}

void plot_series(Plot& p, const SweepResult& r, const std::string& prefix = {}) {
  std::map<std::string, Series> by_name;
  std::vector<std::string> order;
  for (const auto& row : r.rows) {
    const auto name = prefix + row.receiver.name();
    if (!by_name.count(name)) order.push_back(name);
    auto& s = by_name[name];
    s.name = name;
    s.x.push_back(1.0 / row.density);
    s.y.push_back(row.mean);
  }
  for (const auto& n : order) p.series.push_back(by_name[n]);
}

std::vector<double> densities_for(Figure f, const Scenario& sc, const RunOptions& opt) {
  if (opt.config.densities) return *opt.config.densities;
  std::vector<double> d;
  for (double s : figure_spacings(f, sc.wavelength)) d.push_back(1.0 / s);
  return d;
}

std::vector<Receiver> receivers_for(const RunOptions& opt, std::vector<Receiver> fallback) {
  return opt.config.receivers ? *opt.config.receivers : fallback;
}

// Closed-form figures over (lambda, theta).
Artifact closed_form_line(Figure f, const RunOptions& opt) {
  const bool mf = f == Figure::Fig5;
  const double zeta = opt.config.zeta.value_or(mf ? 0.5 : 0.1);
  const double p_hat = opt.config.p_hat.value_or(mf ? 40.0 : 10.0);
  const double n0 = opt.config.n0.value_or(mf ? 0.05 : 1.0);
  std::vector<double> lambdas = mf ? std::vector<double>{1.0, 0.5, 0.25}
                                   : std::vector<double>{1.0, 0.5, 0.1, 0.01, 0.001};
  if (opt.config.lambdas) lambdas = *opt.config.lambdas;
  if (opt.lambda) lambdas = {*opt.lambda};
  const auto thetas = opt.config.thetas ? *opt.config.thetas
                                        : (mf ? range(0.1, 3.0, 0.05) : range(0.1, 3.0, 0.1));
  Artifact a;
  a.table.header = mf ? std::vector<std::string>{"lambda", "theta", "dx", "c_hat_optimal", "c_hat_mf"}
                      : std::vector<std::string>{"lambda", "theta", "dx", "c_hat"};
  a.plot.title = mf ? "Optimal vs matched filter, uniform line" : "Uniform line, optimal receiver";
  a.plot.x_label = "theta";
  a.plot.y_label = "C_hat [nats/s/Hz/m]";
  for (double lambda : lambdas) {
    Series so{"optimal, lambda=" + num(lambda), {}, {}};
    Series sm{"mf, lambda=" + num(lambda), {}, {}};
    for (double theta : thetas) {
      const double dx = lambda / (2.0 * theta);
      const double c = capacity_1d_optimal(theta, zeta, p_hat, lambda, n0) / dx;
      so.x.push_back(theta);
      so.y.push_back(c);
      if (mf) {
        const double cm = capacity_1d_mf(theta, zeta, p_hat * dx, n0) / dx;
        sm.x.push_back(theta);
        sm.y.push_back(cm);
        a.table.add({lambda, theta, dx, c, cm});
      } else {
        a.table.add({lambda, theta, dx, c});
      }
    }
    a.plot.series.push_back(so);
    if (mf) a.plot.series.push_back(sm);
  }
  if (!mf) a.notes.push_back("limit zeta*P_hat/N0 = " + num(zeta * p_hat / n0));
  return a;
}

Artifact sweep_figure(Figure f, const RunOptions& opt) {
  Scenario sc = resolve_scenario(f, opt);
  const auto dens = densities_for(f, sc, opt);
  Artifact a;
  a.table = kSweepHeader;
  a.plot.log_x = true;

  if (f == Figure::Fig7 || f == Figure::Fig8) {
    const auto rec = receivers_for(opt, {Receiver::optimal(), Receiver::mf()});
    const auto r = run_sweep(sc, dens, rec, MetricMode::Normalized);
    append_rows(a.table, r);
    plot_series(a.plot, r);
    a.warnings = r.warnings;
    const bool line = f == Figure::Fig7;
    a.plot.title = line ? "Random terminals on a line" : "Random terminals on a plane";
    a.plot.x_label = line ? "dx [m]" : "ds [m^2]";
    a.plot.y_label = line ? "C_hat [nats/s/Hz/m]" : "C_hat [nats/s/Hz/m^2]";
    if (std::find(rec.begin(), rec.end(), Receiver::optimal()) != rec.end()) {
      std::vector<double> sp, val;
      for (auto it = r.rows.rbegin(); it != r.rows.rend(); ++it) {
        if (it->receiver == Receiver::optimal()) {
          sp.push_back(1.0 / it->density);
          val.push_back(it->mean);
        }
      }
      const auto sat = detect_saturation(sp, val);
      const double ref = line ? sc.wavelength / 2.0 : sc.wavelength * sc.wavelength / kPi;
      for (std::size_t i = 0; i + 1 < sat.spacings.size(); ++i) {
        a.notes.push_back("gain from halving spacing " + num(sat.spacings[i]) + ": " + pct(sat.gains[i]));
      }
      a.notes.push_back(sat.onset ? "saturation onset " + num(*sat.onset) + " (" +
                                        std::to_string(grid_steps(*sat.onset, ref)) +
                                        " factor-2 steps from " + num(ref) + ")"
                                  : "no saturation onset on the grid");
    }
    return a;
  }

  if (f == Figure::Fig9) {
    a.table.header.insert(a.table.header.begin(), "case");
    const auto rec = receivers_for(opt, {Receiver::optimal(), Receiver::mf()});
    Scenario fixed_p = sc;
    fixed_p.power_mode = PowerMode::PerTerminal;
    fixed_p.power = opt.config.p.value_or(10.0);
    Scenario fixed_phat = sc;
    fixed_phat.power_mode = PowerMode::PerVolume;
    fixed_phat.power = opt.config.p_hat.value_or(10.0);
    const auto r1 = run_sweep(fixed_p, dens, rec, MetricMode::PerTerminal);
    const auto r2 = run_sweep(fixed_phat, dens, rec, MetricMode::Normalized);
    append_rows(a.table, r1, {std::string("fixed_p")});
    append_rows(a.table, r2, {std::string("fixed_p_hat")});
    plot_series(a.plot, r1, "C fixed P, ");
    plot_series(a.plot, r2, "C_hat fixed P_hat, ");
    a.warnings = r1.warnings;
    for (const auto& w : r2.warnings) a.warnings.push_back(w);
    a.plot.title = "Random terminals in a room";
    a.plot.x_label = "dv [m^3]";
    a.plot.y_label = "C [nats/s/Hz], C_hat [nats/s/Hz/m^3]";
    if (std::find(rec.begin(), rec.end(), Receiver::optimal()) != rec.end()) {
      const auto [dmin, dmax] = std::minmax_element(dens.begin(), dens.end());
      const auto& lo = r1.at(*dmin, Receiver::optimal());
      const auto& hi = r1.at(*dmax, Receiver::optimal());
      a.notes.push_back("fixed P: per-terminal capacity " + num(lo.mean) + " at K=" + num(lo.terminals) +
                        ", " + num(hi.mean) + " at K=" + num(hi.terminals) + " (drop " +
                        pct(1.0 - hi.mean / lo.mean) + ")");
    }
    return a;
  }

  if (f == Figure::FigCS) {
    const auto rec = receivers_for(opt, {Receiver::optimal(), Receiver::cs(1), Receiver::lmmse()});
    a.plot.title = "Sum rate, 15 terminals on a line";
    a.plot.x_label = "dx [m]";
    a.plot.y_label = "sum rate [nats/s/Hz]";
    std::map<std::string, Series> series;
    const double k = std::round(sc.length * sc.density);
    for (double d : dens) {
      Scenario s = sc;
      s.length = k / d;
      const auto r = run_sweep(s, {d}, rec, MetricMode::SumRate);
      append_rows(a.table, r);
      for (const auto& w : r.warnings) a.warnings.push_back(w);
      double opt_rate = 0.0;
      for (const auto& row : r.rows) {
        if (row.receiver == Receiver::optimal()) opt_rate = row.mean;
        auto& se = series[row.receiver.name()];
        se.name = row.receiver.name();
        se.x.push_back(1.0 / d);
        se.y.push_back(row.mean);
      }
      if (opt_rate > 0.0) {
        for (const auto& row : r.rows) {
          if (row.receiver == Receiver::optimal()) continue;
          a.notes.push_back("dx=" + num(1.0 / d) + " " + row.receiver.name() + " gap " +
                            pct(1.0 - row.mean / opt_rate));
        }
      }
    }
    for (const auto& r : rec) a.plot.series.push_back(series[r.name()]);
    return a;
  }

  // Fig10
  const auto rec = receivers_for(opt, {Receiver::optimal(), Receiver::lmmse()});
  const auto r = run_sweep(sc, dens, rec, MetricMode::PerTerminal);
  append_rows(a.table, r);
  plot_series(a.plot, r);
  a.warnings = r.warnings;
  a.plot.title = "Per-terminal capacity, terminals on the floor";
  a.plot.x_label = "ds [m^2]";
  a.plot.y_label = "C [nats/s/Hz]";
  if (std::find(rec.begin(), rec.end(), Receiver::optimal()) != rec.end()) {
    const double dmax = *std::max_element(dens.begin(), dens.end());
    const double c_opt = r.at(dmax, Receiver::optimal()).mean;
    for (const auto& rc : rec) {
      if (rc == Receiver::optimal()) continue;
      a.notes.push_back("densest (" + num(dmax) + "/m^2): " + rc.name() + " loss " +
                        pct(1.0 - r.at(dmax, rc).mean / c_opt));
    }
  }
  return a;
}

}  // namespace

std::optional<Figure> parse_figure(std::string_view name) {
  static const std::pair<const char*, Figure> names[] = {
      {"fig4", Figure::Fig4}, {"fig5", Figure::Fig5},   {"fig7", Figure::Fig7},  {"fig8", Figure::Fig8},
      {"fig9", Figure::Fig9}, {"figCS", Figure::FigCS}, {"fig10", Figure::Fig10}};
  for (const auto& [n, f] : names) {
    if (name == n) return f;
  }
  return std::nullopt;
}

std::string figure_name(Figure f) {
  switch (f) {
    case Figure::Fig4: return "fig4";
    case Figure::Fig5: return "fig5";
    case Figure::Fig7: return "fig7";
    case Figure::Fig8: return "fig8";
    case Figure::Fig9: return "fig9";
    case Figure::FigCS: return "figCS";
    case Figure::Fig10: return "fig10";
  }
  return "?";
}

Scenario figure_scenario(Figure f) {
  Scenario s;
  s.n0 = 1.0;
  s.power = 10.0;
  s.power_mode = PowerMode::PerVolume;
  s.trials = 20;
  switch (f) {
    case Figure::Fig4:
    case Figure::Fig5:
    case Figure::Fig7:
      s.kind = ScenarioKind::Line;
      s.length = 10.0;
      s.terminal_z = 2.0;
      s.surface = SurfaceSpec::infinite_plane();
      s.wavelength = 0.2;
      s.method = GramMethod::Sinc1d;
      break;
    case Figure::Fig8:
      s.kind = ScenarioKind::Plane;
      s.length = s.width = 20.0;
      s.terminal_z = 2.0;
      s.surface = SurfaceSpec::infinite_plane();
      s.wavelength = 0.4;
      s.method = GramMethod::Sinc2d;
      break;
    case Figure::Fig9:
      s.kind = ScenarioKind::Room;
      s.length = s.width = s.height = 4.0;
      s.surface = SurfaceSpec(1.0, 0.5);  // 2 m x 1 m
      s.wavelength = 0.5;
      s.method = GramMethod::Quadrature;
      break;
    case Figure::FigCS:
      s.kind = ScenarioKind::Line;
      s.placement = Placement::Uniform;
      s.terminal_z = 4.0;
      s.surface = SurfaceSpec(1.0, 1.0);
      s.wavelength = 0.5;
      s.length = 15.0 * 0.5;
      s.density = 1.0 / 0.5;
      s.method = GramMethod::Quadrature;
      s.trials = 1;
      break;
    case Figure::Fig10:
      s.kind = ScenarioKind::Plane;
      s.length = s.width = 8.0;
      s.terminal_z = 4.0;
      s.surface = SurfaceSpec(1.0, 1.0);
      s.wavelength = 0.5;
      s.method = GramMethod::Quadrature;
      break;
  }
  return s;
}

std::vector<double> figure_spacings(Figure f, double wavelength) {
  switch (f) {
    case Figure::Fig7: return factor_two_grid(wavelength / 2.0, 3, 3);
    case Figure::Fig8: return factor_two_grid(wavelength * wavelength / kPi, 2, 3);
    case Figure::Fig9: return {2.0, 1.0, 0.5, 1.0 / 3.0, 0.25, 0.2};  // K = 32 ... 320
    case Figure::FigCS: return factor_two_grid(wavelength / 2.0, 3, 2);
    case Figure::Fig10: return {2.0, 1.0, 0.5, 0.2, 0.1};  // K = 32 ... 640
    default: return {};
  }
}

Scenario resolve_scenario(Figure f, const RunOptions& opt) {
  Scenario s = figure_scenario(f);
  opt.config.apply(s);
  if (opt.lambda) s.wavelength = *opt.lambda;
  if (opt.seed) s.seed = *opt.seed;
  if (opt.trials) s.trials = *opt.trials;
  if (opt.workers) s.workers = *opt.workers;
  return s;
}

SaturationResult detect_saturation(const std::vector<double>& spacings,
                                   const std::vector<double>& values, double rel_gain) {
  if (spacings.size() != values.size() || spacings.size() < 2) {
    throw DomainError("saturation detection needs at least two matching points");
  }
  SaturationResult r;
  std::vector<std::size_t> idx(spacings.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return spacings[a] > spacings[b]; });
  for (auto i : idx) r.spacings.push_back(spacings[i]);
  std::vector<double> v;
  for (auto i : idx) v.push_back(values[i]);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (std::abs(r.spacings[i] / r.spacings[i + 1] - 2.0) > 1e-9) {
      throw DomainError("saturation detection expects a factor-2 spacing grid");
    }
    r.gains.push_back(v[i + 1] / v[i] - 1.0);
  }
  r.gains.push_back(std::nan(""));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (r.gains[i] < rel_gain) {
      r.onset = r.spacings[i];
      break;
    }
  }
  return r;
}

int grid_steps(double a, double b) { return static_cast<int>(std::lround(std::log2(a / b))); }

Artifact run_figure(Figure f, const RunOptions& opt) {
  if (f == Figure::Fig4 || f == Figure::Fig5) return closed_form_line(f, opt);
  return sweep_figure(f, opt);
}

Artifact run_appendix_a() {
  Artifact a;
  a.table.header = {"lambda", "numeric_capacity", "sinc_capacity"};
  a.plot.title = "Spectral capacity of the line channel";
  a.plot.x_label = "lambda [m]";
  a.plot.y_label = "C [nats/s/Hz]";
  Series sn{"numeric", {}, {}}, ss{"sinc", {}, {}};
  for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
    const double cn = spectral_capacity(lambda, SpectralCapacityMode::Numeric);
    const double cs = spectral_capacity(lambda, SpectralCapacityMode::Sinc);
    a.table.add({lambda, cn, cs});
    sn.x.push_back(lambda);
    sn.y.push_back(cn);
    ss.x.push_back(lambda);
    ss.y.push_back(cs);
  }
  a.plot.series = {sn, ss};
  return a;
}

Artifact run_lattice(double wavelength) {
  Artifact a;
  a.table.header = {"kind", "det", "a_d", "rho_ant"};
  a.plot.title = "Sampling lattices";
  for (auto kind : {GeneratorKind::Hexagonal, GeneratorKind::RectDense, GeneratorKind::RectNaive}) {
    const auto s = named_generator(kind, wavelength);
    a.table.add({std::string(generator_name(kind)), s.cell_area(), antenna_density(s),
                 rho_ant(s, wavelength)});
  }
  return a;
}

Artifact run_capacity_1d(const RunOptions& opt) {
  const double lambda = opt.lambda.value_or(opt.config.lambda.value_or(0.5));
  const double zeta = opt.config.zeta.value_or(0.5);
  const double p_hat = opt.config.p_hat.value_or(10.0);
  const double n0 = opt.config.n0.value_or(1.0);
  const auto thetas = opt.config.thetas
                          ? *opt.config.thetas
                          : std::vector<double>{0.25, 0.3, 1.0 / 3.0, 0.5, 0.7, 1.0, 1.5, 2.0, 2.4, 3.0};
  Artifact a;
  a.table.header = {"lambda", "theta", "dx", "c_optimal", "c_mf", "c_folded", "c_hat_optimal", "c_hat_mf"};
  a.plot.title = "Uniform line in front of an infinite surface";
  a.plot.x_label = "theta";
  a.plot.y_label = "C_hat [nats/s/Hz/m]";
  Series so{"optimal", {}, {}}, sm{"mf", {}, {}};
  for (double theta : thetas) {
    const double dx = lambda / (2.0 * theta);
    const double p = p_hat * dx;
    const double co = capacity_1d_optimal(theta, zeta, p_hat, lambda, n0);
    const double cm = capacity_1d_mf(theta, zeta, p, n0);
    const double cf = folded_spectrum_capacity(theta, zeta, p, n0);
    a.table.add({lambda, theta, dx, co, cm, cf, co / dx, cm / dx});
    so.x.push_back(theta);
    so.y.push_back(co / dx);
    sm.x.push_back(theta);
    sm.y.push_back(cm / dx);
  }
  a.plot.series = {so, sm};
  return a;
}

Artifact run_capacity_2d(const RunOptions& opt) {
  const double p_hat = opt.config.p_hat.value_or(10.0);
  const double n0 = opt.config.n0.value_or(1.0);
  std::vector<double> lambdas{1.0, 0.5, 0.4, 0.1, 0.01, 0.001};
  if (opt.config.lambdas) lambdas = *opt.config.lambdas;
  if (opt.lambda) lambdas = {*opt.lambda};
  Artifact a;
  a.table.header = {"lambda", "c_hat", "limit", "signal_dims", "slope_estimate"};
  a.plot.title = "Infinite plane, uniform deployment";
  a.plot.x_label = "lambda [m]";
  a.plot.y_label = "C_hat [nats/s/Hz/m^2]";
  a.plot.log_x = true;
  Series s{"C_hat", {}, {}};
  for (double lambda : lambdas) {
    const double c = capacity_2d_closed(lambda, p_hat, n0);
    std::vector<double> snr;
    for (int k = 3; k <= 6; ++k) snr.push_back(4.0 * kPi / (lambda * lambda) * std::pow(10.0, k));
    const double slope =
        signal_dims_estimate([&](double x) { return capacity_2d_closed(lambda, x, 1.0); }, snr);
    a.table.add({lambda, c, p_hat / (2.0 * n0), signal_dims_2d(lambda), slope});
    s.x.push_back(lambda);
    s.y.push_back(c);
  }
  a.plot.series = {s};
  return a;
}

Artifact run_gram(const RunOptions& opt) {
  Scenario sc;
  sc.surface = SurfaceSpec(1.0, 1.0);  // 2 m x 2 m; overridable from the config
  opt.config.apply(sc);
  if (opt.lambda) sc.wavelength = *opt.lambda;
  if (opt.seed) sc.seed = *opt.seed;
  const auto dr = deploy(sc, 0);
  const auto gm = gram_matrix(dr.deployment, sc.surface, sc.method, sc.quadrature);
  Artifact a;
  a.warnings = dr.warnings;
  for (const auto& w : gm.warnings) a.warnings.push_back(w);
  a.table.header = {"k", "l", "real", "imag"};
  for (Eigen::Index k = 0; k < gm.g.rows(); ++k) {
    for (Eigen::Index l = 0; l < gm.g.cols(); ++l) {
      a.table.add({static_cast<std::int64_t>(k), static_cast<std::int64_t>(l), gm.g(k, l).real(),
                   gm.g(k, l).imag()});
    }
  }
  a.notes.push_back("K = " + std::to_string(gm.g.rows()) +
                    (gm.repaired ? ", eigenvalues floored" : ""));
  return a;
}

Artifact run_cs_air(const RunOptions& opt) {
  Scenario sc = resolve_scenario(Figure::FigCS, opt);
  if (!opt.config.length && !opt.config.densities) sc.length = 15.0 / sc.density;
  if (opt.config.densities) sc.density = opt.config.densities->front();
  const auto dr = deploy(sc, 0);
  const auto gm = gram_matrix(dr.deployment, sc.surface, sc.method, sc.quadrature);
  const Eigen::Index k = gm.g.rows();
  const double logdet = logdet_sum(gm.g, sc.n0);
  const CMatrix b = mmse_matrix(gm.g, sc.n0);
  Artifact a;
  a.warnings = dr.warnings;
  for (const auto& w : gm.warnings) a.warnings.push_back(w);
  a.table.header = {"nu", "air", "air_per_terminal", "logdet", "gap"};
  a.plot.title = "Channel-shortening AIR";
  a.plot.x_label = "nu";
  a.plot.y_label = "AIR [nats/channel use]";
  Series s{"AIR", {}, {}};
  for (int nu = 0; nu < k; ++nu) {
    const double v = air(cs_solve(b, nu).h);
    a.table.add({static_cast<std::int64_t>(nu), v, v / static_cast<double>(k), logdet,
                 1.0 - v / logdet});
    s.x.push_back(nu);
    s.y.push_back(v);
  }
  a.plot.series = {s};
  return a;
}

}  // namespace lis
