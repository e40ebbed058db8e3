#include "lis/commands.hpp"

#include <filesystem>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lis/config.hpp"
#include "lis/error.hpp"
#include "lis/experiments.hpp"
#include "lis/lattice.hpp"

namespace lis {

namespace {

void emit(const Artifact& a, const std::string& name, const std::string& dir, bool svg,
          std::ostream& out, std::ostream& err) {
  const auto csv_path = (std::filesystem::path(dir) / (name + ".csv")).string();
  write_text_file(csv_path, a.table.to_csv());
  out << "wrote " << csv_path << "\n";
  if (svg) {
    const auto svg_path = (std::filesystem::path(dir) / (name + ".svg")).string();
    write_text_file(svg_path, render_svg(a.plot));
    out << "wrote " << svg_path << "\n";
  }
  for (const auto& n : a.notes) out << n << "\n";
  for (const auto& w : a.warnings) err << "warning: " << w << "\n";
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity, lattice and detection tools for large intelligent surfaces", "lis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  bool svg = false;
  std::uint64_t seed = 0;
  int trials = 0;
  double lambda = 0.0;
  unsigned workers = 0;
  auto* o_config = app.add_option("--config", config_path, "experiment config file");
  auto* o_seed = app.add_option("--seed", seed, "64-bit random seed");
  auto* o_trials =
      app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_svg = app.add_flag("--svg", svg, "also write an SVG chart");
  auto* o_lambda =
      app.add_option("--lambda", lambda, "wavelength in meters")->check(CLI::PositiveNumber);
  auto* o_workers = app.add_option("--workers", workers, "worker threads (0: all cores)");

  auto* c_gram = app.add_subcommand("gram", "Gram matrix of one deployment");
  auto* c_cap1 = app.add_subcommand("capacity-1d", "uniform-line capacities (closed form)");
  auto* c_cap2 = app.add_subcommand("capacity-2d", "infinite-plane capacity and signal dimensions");
  auto* c_lat = app.add_subcommand("lattice", "named antenna lattices");
  auto* c_cs = app.add_subcommand("cs-air", "channel-shortening AIR for every depth");
  auto* c_app = app.add_subcommand("appendix-a", "spectral capacities of the line channel");
  auto* c_sim = app.add_subcommand("simulate", "reproduce a figure");
  std::string figure;
  c_sim->add_option("figure", figure, "fig4|fig5|fig7|fig8|fig9|figCS|fig10")
      ->required()
      ->check(CLI::IsMember({"fig4", "fig5", "fig7", "fig8", "fig9", "figCS", "fig10"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunOptions opt;
    if (o_config->count()) opt.config = load_config(config_path);
    if (o_seed->count()) opt.seed = seed;
    if (o_trials->count()) opt.trials = trials;
    if (o_lambda->count()) opt.lambda = lambda;
    if (o_workers->count()) opt.workers = workers;
    const std::string dir = o_out->count() ? out_dir : opt.config.out.value_or(".");
    const bool want_svg = o_svg->count() ? svg : opt.config.svg.value_or(false);

    if (c_gram->parsed()) {
      emit(run_gram(opt), "gram", dir, want_svg, out, err);
    } else if (c_cap1->parsed()) {
      emit(run_capacity_1d(opt), "capacity-1d", dir, want_svg, out, err);
    } else if (c_cap2->parsed()) {
      emit(run_capacity_2d(opt), "capacity-2d", dir, want_svg, out, err);
    } else if (c_lat->parsed()) {
      const double wl = opt.lambda.value_or(opt.config.lambda.value_or(0.5));
      emit(run_lattice(wl), "lattice", dir, want_svg, out, err);
    } else if (c_cs->parsed()) {
      emit(run_cs_air(opt), "cs-air", dir, want_svg, out, err);
    } else if (c_app->parsed()) {
      emit(run_appendix_a(), "appendix-a", dir, want_svg, out, err);
    } else if (c_sim->parsed()) {
      const auto f = parse_figure(figure);
      emit(run_figure(*f, opt), figure_name(*f), dir, want_svg, out, err);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    for (const auto& m : e.errors()) err << "config error: " << m << "\n";
    return kExitValidation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace lis
