// Command-line front end: flag parsing only, the commands live in wetmax/cli.hpp.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wetmax/cli.hpp"

namespace {

using wetmax::cli::RunConfig;

void add_input(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "CSV of date,value_mm (or one value per line); '-' reads stdin")
      ->required();
  cmd->add_option("--wet-threshold", cfg.wet_threshold, "a day is wet when its volume exceeds this")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--missing-marker", cfg.missing_marker, "cell text marking a missing day");
  cmd->add_option("--missing-policy", cfg.missing_policy, "split: missing day ends a run and warns; dry: silent")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, wetmax::MissingPolicy>{{"split", wetmax::MissingPolicy::Split},
                                                       {"dry", wetmax::MissingPolicy::Dry}},
          CLI::ignore_case));
}

void add_estimation(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--method", cfg.method, "quantile | ls | mle | all")
      ->check(CLI::IsMember({"quantile", "ls", "mle", "all"}));
  cmd->add_option("--r", cfg.r, "fix the shape r: a number, or 'from-durations' for the NB fit of durations-1");
  cmd->add_option("--p1", cfg.p1, "first quantile level");
  cmd->add_option("--p2", cfg.p2, "second quantile level");
  cmd->add_option("--p3", cfg.p3, "third quantile level");
  cmd->add_option("--tau-grid", cfg.tau_grid, "symmetric triples (tau, 1/2, 1-tau) scanned for the smallest KS")
      ->delimiter(',');
  cmd->add_option("--out", cfg.out, "output file (default stdout)");
}

void add_model(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--shape-r", cfg.model_r, "r")->required();
  cmd->add_option("--lambda", cfg.model_lambda, "lambda")->required();
  cmd->add_option("--gamma", cfg.model_gamma, "gamma")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wetmax: maxima of precipitation volumes over wet periods"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* segment = app.add_subcommand("segment", "split a daily series into wet periods (JSON)");
  add_input(segment, cfg);
  segment->add_option("--out", cfg.out, "output file (default stdout)");
  segment->add_option("--durations-out", cfg.durations_out, "write wet-period lengths, one per line");

  auto* fit = app.add_subcommand("fit", "fit (r, lambda, gamma) to censored wet-period maxima");
  add_input(fit, cfg);
  add_estimation(fit, cfg);
  fit->add_flag("--maxima", cfg.input_is_maxima, "input holds maxima, one per line");
  fit->add_option("--min-wet-days", cfg.min_wet_days, "keep periods of at least this many days")
      ->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("gof-sweep", "KS distance of each method for a range of h");
  add_input(sweep, cfg);
  add_estimation(sweep, cfg);
  std::string h_range = "1:15";
  sweep->add_option("--h-range", h_range, "a:b or a..b");
  sweep->add_option("--plot-dir", cfg.plot_dir, "write ecdf/model TSV per h and method here");
  sweep->add_option("--workers", cfg.workers, "threads")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "draw from the limit law, pre-limit maxima or a daily series");
  add_model(simulate, cfg);
  simulate->add_option("--mode", cfg.mode, "limit | prelimit | series")
      ->check(CLI::IsMember({"limit", "prelimit", "series"}));
  simulate->add_option("--tag", cfg.tag, "product representation for --mode limit");
  simulate->add_option("--n", cfg.n, "number of draws (periods for --mode series)");
  simulate->add_option("--index-n", cfg.prelimit_n, "index n of the pre-limit maximum");
  simulate->add_option("--q", cfg.q, "cap on the NB success probability of the pre-limit count");
  simulate->add_option("--nb-p", cfg.nb_p, "NB p of durations-1 for --mode series");
  simulate->add_option("--seed", cfg.seed, "seed");
  simulate->add_option("--out", cfg.out, "output file (default stdout)");

  auto* quantile = app.add_subcommand("quantile", "quantile of the limit law");
  add_model(quantile, cfg);
  quantile->add_option("--eps", cfg.eps, "probability level")->required();

  auto* moment = app.add_subcommand("moment", "moment of order delta of the limit law");
  add_model(moment, cfg);
  moment->add_option("--delta", cfg.delta, "order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wetmax::cli::kExitInput;
  }

  namespace c = wetmax::cli;
  if (*segment) return c::cmd_segment(cfg, std::cout, std::cerr);
  if (*fit) return c::cmd_fit(cfg, std::cout, std::cerr);
  if (*sweep) {
    try {
      std::tie(cfg.h_first, cfg.h_last) = c::parse_h_range(h_range);
    } catch (const wetmax::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return c::kExitInput;
    }
    return c::cmd_gof_sweep(cfg, std::cout, std::cerr);
  }
  if (*simulate) return c::cmd_simulate(cfg, std::cout, std::cerr);
  if (*quantile) return c::cmd_quantile(cfg, std::cout, std::cerr);
  if (*moment) return c::cmd_moment(cfg, std::cout, std::cerr);
  return c::kExitInput;
}
