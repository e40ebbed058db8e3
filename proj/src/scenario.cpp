#include "lis/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "lis/capacity.hpp"
#include "lis/cs_equalizer.hpp"
#include "lis/error.hpp"
#include "lis/rng.hpp"

namespace lis {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
}

// Keeps one warning per kind; details in parentheses differ between trials.
void add_warning(std::vector<std::string>& list, const std::string& w) {
  const auto key = w.substr(0, w.find(" ("));
  for (const auto& e : list) {
    if (e.substr(0, e.find(" (")) == key) return;
  }
  list.push_back(w);
}

double dimension_of(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Line: return 1.0;
    case ScenarioKind::Plane: return 2.0;
    case ScenarioKind::Room: return 3.0;
  }
  return 1.0;
}

}  // namespace

std::string Receiver::name() const {
  switch (kind) {
    case Kind::Optimal: return "optimal";
    case Kind::MatchedFilter: return "mf";
    case Kind::Lmmse: return "lmmse";
    case Kind::ChannelShortening: return "cs" + std::to_string(nu);
  }
  return "?";
}

void Scenario::validate() const {
  require_positive(length, "length");
  if (kind != ScenarioKind::Line) require_positive(width, "width");
  if (kind == ScenarioKind::Room) {
    require_positive(height, "height");
    if (room_z_min < 0.0) throw DomainError("room_z_min must be non-negative");
    const double zmin = room_z_min > 0.0 ? room_z_min : 0.5 * wavelength;
    if (!(zmin < height)) throw DomainError("room_z_min must be below the room height");
  } else {
    require_positive(terminal_z, "terminal_z");
  }
  require_positive(density, "density");
  require_positive(wavelength, "wavelength");
  require_positive(n0, "n0");
  require_positive(power, "power");
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (placement == Placement::Uniform && kind == ScenarioKind::Room) {
    throw DomainError("uniform placement is only defined for line and plane scenarios");
  }
  quadrature.validate();
}

double Scenario::extent_measure() const {
  switch (kind) {
    case ScenarioKind::Line: return length;
    case ScenarioKind::Plane: return length * width;
    case ScenarioKind::Room: return length * width * height;
  }
  return length;
}

DeployResult deploy(const Scenario& sc, std::uint64_t trial_index) {
  sc.validate();
  DeployResult out;
  double len = sc.length, wid = sc.width, hgt = sc.height;
  const double requested = std::round(sc.density * sc.extent_measure());
  if (requested < 1.0) throw DomainError("scenario yields zero terminals");

  std::size_t k = static_cast<std::size_t>(requested);
  std::size_t nx = 0, ny = 0;
  if (sc.placement == Placement::Uniform && sc.kind == ScenarioKind::Plane) {
    const double d = 1.0 / std::sqrt(sc.density);
    nx = static_cast<std::size_t>(std::max(1.0, std::round(len / d)));
    ny = static_cast<std::size_t>(std::max(1.0, std::round(wid / d)));
    k = nx * ny;
  }
  if (k > sc.k_max) {
    // Shrink the window isotropically at constant density.
    const double shrink = std::pow(static_cast<double>(sc.k_max) / static_cast<double>(k),
                                   1.0 / dimension_of(sc.kind));
    len *= shrink;
    if (sc.kind != ScenarioKind::Line) wid *= shrink;
    if (sc.kind == ScenarioKind::Room) hgt *= shrink;
    std::ostringstream msg;
    msg << "K = " << k << " exceeds k_max = " << sc.k_max << "; window scaled by " << shrink;
    out.warnings.push_back(msg.str());
    if (sc.placement == Placement::Uniform && sc.kind == ScenarioKind::Plane) {
      const double d = 1.0 / std::sqrt(sc.density);
      nx = static_cast<std::size_t>(std::max(1.0, std::floor(len / d)));
      ny = static_cast<std::size_t>(std::max(1.0, std::floor(wid / d)));
      k = nx * ny;
    } else {
      k = sc.k_max;
    }
  }

  const double p = sc.power_mode == PowerMode::PerTerminal ? sc.power : sc.power / sc.density;
  Deployment& dep = out.deployment;
  dep.wavelength = sc.wavelength;
  dep.terminals.resize(k);
  dep.powers.assign(k, p);

  Rng rng(sc.seed, trial_index);
  if (sc.placement == Placement::Uniform) {
    if (sc.kind == ScenarioKind::Line) {
      const double dx = 1.0 / sc.density;
      for (std::size_t i = 0; i < k; ++i) {
        const double x = (static_cast<double>(i) - 0.5 * static_cast<double>(k - 1)) * dx;
        dep.terminals[i] = {x, 0.0, sc.terminal_z};
      }
    } else {
      const double d = 1.0 / std::sqrt(sc.density);
      for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
          const double x = (static_cast<double>(i) - 0.5 * static_cast<double>(nx - 1)) * d;
          const double y = (static_cast<double>(j) - 0.5 * static_cast<double>(ny - 1)) * d;
          dep.terminals[i * ny + j] = {x, y, sc.terminal_z};
        }
      }
    }
    return out;
  }

  const double zmin = sc.room_z_min > 0.0 ? sc.room_z_min : 0.5 * sc.wavelength;
  for (auto& t : dep.terminals) {
    switch (sc.kind) {
      case ScenarioKind::Line:
        t = {rng.uniform(-0.5 * len, 0.5 * len), 0.0, sc.terminal_z};
        break;
      case ScenarioKind::Plane: {
        const double x = rng.uniform(-0.5 * len, 0.5 * len);
        t = {x, rng.uniform(-0.5 * wid, 0.5 * wid), sc.terminal_z};
        break;
      }
      case ScenarioKind::Room: {
        const double x = rng.uniform(-0.5 * len, 0.5 * len);
        const double y = rng.uniform(-0.5 * wid, 0.5 * wid);
        // The shrunk room keeps its z range anchored at the surface.
        t = {x, y, rng.uniform(zmin, std::max(zmin, hgt))};
        break;
      }
    }
  }
  return out;
}

const SweepRow& SweepResult::at(double density, const Receiver& r) const {
  for (const auto& row : rows) {
    if (row.receiver == r && std::abs(row.density - density) <= 1e-12 * std::abs(density)) return row;
  }
  throw DomainError("no sweep row for receiver " + r.name());
}

namespace {

// Per-terminal rate; `mmse` caches the MMSE matrix across receivers.
double rate_with_cache(const CMatrix& g, double n0, const Receiver& r, CMatrix& mmse) {
  const Eigen::Index k = g.rows();
  switch (r.kind) {
    case Receiver::Kind::Optimal:
      return capacity_logdet(g, n0);
    case Receiver::Kind::MatchedFilter: {
      const auto v = capacity_mf_from_gram(g, n0);
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(k);
    }
    case Receiver::Kind::Lmmse:
    case Receiver::Kind::ChannelShortening: {
      if (mmse.rows() != k) mmse = mmse_matrix(g, n0);
      const int nu = r.kind == Receiver::Kind::Lmmse
                         ? 0
                         : static_cast<int>(std::min<Eigen::Index>(r.nu, k - 1));
      return air(cs_solve(mmse, nu).h) / static_cast<double>(k);
    }
  }
  return 0.0;
}

}  // namespace

double receiver_rate(const CMatrix& g, double n0, const Receiver& r) {
  CMatrix cache;
  return rate_with_cache(g, n0, r, cache);
}

SweepResult run_sweep(const Scenario& scenario, const std::vector<double>& densities,
                      const std::vector<Receiver>& receivers, MetricMode metric) {
  scenario.validate();
  if (densities.empty()) throw DomainError("no densities given");
  if (receivers.empty()) throw DomainError("no receivers given");
  for (const auto& r : receivers) {
    if (r.kind == Receiver::Kind::ChannelShortening && r.nu < 0) {
      throw DomainError("cs receiver needs nu >= 0");
    }
  }
  std::vector<double> dens = densities;
  for (double d : dens) require_positive(d, "density");
  std::sort(dens.begin(), dens.end());

  const std::size_t nd = dens.size();
  const std::size_t nt = static_cast<std::size_t>(scenario.trials);
  const std::size_t nr = receivers.size();
  const std::size_t tasks = nd * nt;

  struct TaskOut {
    std::vector<double> values;
    double terminals = 0.0;
    std::vector<std::string> warnings;
    std::exception_ptr error;
  };
  std::vector<TaskOut> results(tasks);

  auto run_task = [&](std::size_t idx) {
    TaskOut& out = results[idx];
    try {
      const std::size_t di = idx / nt;
      const std::size_t ti = idx % nt;
      Scenario sc = scenario;
      sc.density = dens[di];
      // Trial streams are shared across densities (common random numbers).
      auto dr = deploy(sc, ti);
      out.warnings = std::move(dr.warnings);
      const GramMatrix gm = gram_matrix(dr.deployment, sc.surface, sc.method, sc.quadrature);
      for (const auto& w : gm.warnings) out.warnings.push_back(w);
      const double k = static_cast<double>(dr.deployment.size());
      out.terminals = k;
      CMatrix cache;
      out.values.resize(nr);
      for (std::size_t r = 0; r < nr; ++r) {
        const double c = rate_with_cache(gm.g, sc.n0, receivers[r], cache);
        switch (metric) {
          case MetricMode::Normalized: out.values[r] = c * sc.density; break;
          case MetricMode::PerTerminal: out.values[r] = c; break;
          case MetricMode::SumRate: out.values[r] = c * k; break;
        }
      }
    } catch (...) {
      out.error = std::current_exception();
    }
  };

  unsigned workers = scenario.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks; i = next++) run_task(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  SweepResult res;
  res.metric = metric;
  for (const auto& t : results) {
    if (t.error) std::rethrow_exception(t.error);
  }
  for (std::size_t di = 0; di < nd; ++di) {
    for (std::size_t r = 0; r < nr; ++r) {
      SweepRow row;
      row.density = dens[di];
      row.receiver = receivers[r];
      row.trials = static_cast<int>(nt);
      double sum = 0.0, kk = 0.0;
      for (std::size_t ti = 0; ti < nt; ++ti) {
        sum += results[di * nt + ti].values[r];
        kk += results[di * nt + ti].terminals;
      }
      row.mean = sum / static_cast<double>(nt);
      row.terminals = kk / static_cast<double>(nt);
      double ss = 0.0;
      for (std::size_t ti = 0; ti < nt; ++ti) {
        const double d = results[di * nt + ti].values[r] - row.mean;
        ss += d * d;
      }
      row.stddev = nt > 1 ? std::sqrt(ss / static_cast<double>(nt - 1)) : 0.0;
      res.rows.push_back(row);
    }
  }
  for (const auto& t : results) {
    for (const auto& w : t.warnings) add_warning(res.warnings, w);
  }
  return res;
}

}  // namespace lis
