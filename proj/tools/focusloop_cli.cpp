// focusloop: simulate, replay, score and serve attention-training sessions.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"

#include "focusloop/commands.hpp"
#include "focusloop/server.hpp"

namespace {

focusloop::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace focusloop;

  CLI::App app{"Attention-training session engine"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_override;
  std::string data_dir = "data";
  OutputOptions out_opt;
  app.add_option("--seed-override", seed_override, "Replace the configured seed");
  app.add_option("--data-dir", data_dir, "Directory for logs and reports")->capture_default_str();
  app.add_flag("-q,--quiet", out_opt.quiet, "Print only the machine-readable JSON line");

  SimulateOptions sim;
  std::string sim_config, sim_trace, sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run a session from a config and an input trace");
  simulate->add_option("config", sim_config, "Session config (JSON)")->required();
  simulate->add_option("trace", sim_trace, "Input trace (CSV lines)")->required();
  simulate->add_option("out_dir", sim_out, "Output directory (defaults to --data-dir)");

  std::string replay_log;
  auto* replay = app.add_subcommand("replay", "Re-run a log and verify its outputs");
  replay->add_option("log", replay_log, "Session log")->required();

  ScoreOptions score;
  std::string score_kind, score_csv, score_scale;
  auto* score_cmd = app.add_subcommand("score", "Score a questionnaire or contingency CSV");
  score_cmd->add_option("kind", score_kind, "sus | alpha | likert | chisq")
      ->required()
      ->check(CLI::IsMember({"sus", "alpha", "likert", "chisq"}));
  score_cmd->add_option("csv", score_csv, "Input CSV with a header row")->required();
  score_cmd->add_option("--min", score.min_value, "Lowest item value")->capture_default_str();
  score_cmd->add_option("--max", score.max_value, "Highest item value")->capture_default_str();
  score_cmd->add_option("--reverse", score.reverse_items, "1-based reverse-coded items")->delimiter(',');
  score_cmd->add_option("--scale", score_scale, "Scale sidecar JSON {name, min, max, reverse}");
  score_cmd->add_flag("--table", score.table, "chisq: CSV is a labelled contingency table");
  score_cmd->add_option("--columns", score.columns, "chisq: the two columns to cross")->delimiter(',');

  std::string synth_config, synth_trace;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth-trace", "Write a synthetic gaze/answer trace for a config");
  synth->add_option("config", synth_config, "Session config (JSON)")->required();
  synth->add_option("trace", synth_trace, "Output trace path")->required();
  synth->add_option("--trace-seed", synth_seed, "Seed of the synthetic trace")->capture_default_str();

  ServerOptions srv;
  long long tick_rate_ms = 50;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/WebSocket session service");
  serve->add_option("--bind", srv.address, "Bind address")->envname("FOCUSLOOP_BIND")->capture_default_str();
  serve->add_option("--port", srv.port, "Port")->envname("FOCUSLOOP_PORT")->capture_default_str();
  serve->add_option("--tick-rate", tick_rate_ms, "Wall-clock pump period in ms")
      ->envname("FOCUSLOOP_TICK_RATE")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  serve->add_option("--time-scale", srv.service.time_scale, "Logical ms per wall ms")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  if (*simulate) {
    sim.config_path = sim_config;
    sim.trace_path = sim_trace;
    sim.out_dir = sim_out.empty() ? data_dir : sim_out;
    sim.seed_override = seed_override;
    return cmd_simulate(sim, out_opt, std::cout, std::cerr).exit_code;
  }
  if (*replay) return cmd_replay(replay_log, out_opt, std::cout, std::cerr);
  if (*score_cmd) {
    score.csv_path = score_csv;
    if (!score_scale.empty()) score.scale_path = score_scale;
    if (score_kind == "sus") score.kind = ScoreKind::Sus;
    else if (score_kind == "alpha") score.kind = ScoreKind::Alpha;
    else if (score_kind == "likert") score.kind = ScoreKind::Likert;
    else score.kind = ScoreKind::ChiSquare;
    return cmd_score(score, out_opt, std::cout, std::cerr);
  }
  if (*synth) return cmd_synth_trace(synth_config, synth_trace, synth_seed, seed_override, std::cerr);
  if (*serve) {
    srv.pump_interval = std::chrono::milliseconds(tick_rate_ms);
    srv.service.data_dir = data_dir;
    try {
      Server server(srv);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      if (!out_opt.quiet) std::cout << "listening on " << srv.address << ":" << server.port() << std::endl;
      server.run();
      g_server = nullptr;
    } catch (const std::exception& e) {
      std::cerr << "serve: " << e.what() << "\n";
      return kExitInputError;
    }
    return kExitOk;
  }
  return kExitInputError;
}
