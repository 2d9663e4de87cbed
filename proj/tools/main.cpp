#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"

int main(int argc, char** argv) {
  using qwalk::cli::RunConfig;

  CLI::App app{"Three-state quantum walks on the line: simulation, dispersion and localization analysis"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format;

  auto add_common = [&](CLI::App* sub, const char* coin_help) {
    auto* coin = sub->add_option("--coin", config.coin_spec, coin_help);
    sub->add_option("--grid", config.grid, "momentum grid size");
    sub->add_option("--out", config.output_path, "output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", config.threads, "worker threads (default: QWALK_THREADS or all cores)");
    return coin;
  };
  auto add_walk = [&](CLI::App* sub) {
    sub->add_option("--state", config.state, "initial coin state: re,im of L, S, R")->expected(6)->delimiter(',');
    sub->add_option_function<long>("--steps", [&](long s) { config.steps = s; }, "number of steps");
  };

  auto* simulate = app.add_subcommand("simulate", "evolve a walk and write p(m, T)");
  auto* dispersion = app.add_subcommand("dispersion", "tabulate eigenphase branches and group velocities");
  auto* velocity = app.add_subcommand("velocity", "peak velocities from the dispersion relation");
  auto* sweep = app.add_subcommand("sweep", "peak velocity over a family parameter grid");
  auto* localize = app.add_subcommand("localize", "origin probability, trapping estimate and flat-band check");
  for (auto* sub : {simulate, dispersion, velocity, localize}) {
    add_common(sub, "grover | pi | c1:<phi> | c2:<rho> | matrix:<path>");
  }
  add_common(sweep, "family to sweep: c1 | c2")->required();
  add_walk(simulate);
  add_walk(localize);
  velocity->add_flag("--analytic", config.analytic, "closed-form velocities for the known families");
  sweep->add_option("--points", config.points, "number of grid points");
  sweep->add_option_function<double>("--min", [&](double v) { config.range_min = v; }, "lower parameter bound");
  sweep->add_option_function<double>("--max", [&](double v) { config.range_max = v; }, "upper parameter bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", {{"kind", "config"}, {"message", e.what()}, {"exit_code", 2}}}}.dump()
              << '\n';
    return 2;
  }

  config.command = qwalk::cli::command_from_string(app.get_subcommands().front()->get_name());
  if (!format.empty()) config.format = qwalk::cli::format_from_string(format);
  return qwalk::cli::run(config, std::cout, std::cerr);
}
