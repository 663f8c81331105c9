#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace focusloop {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInputError = 2;

struct OutputOptions {
  bool quiet = false;  // suppress human-readable lines; the JSON line is always printed
};

struct SimulateOptions {
  std::filesystem::path config_path;
  std::filesystem::path trace_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed_override;
};

struct SimulateOutcome {
  int exit_code = kExitOk;
  std::filesystem::path log_path;
  std::filesystem::path report_json;
  std::filesystem::path report_text;
};

// Writes <out_dir>/<child_id>/<session_id>-<seed>.log plus .report.json and
// .report.txt next to it (unless report_enabled is false).
SimulateOutcome cmd_simulate(const SimulateOptions& opt, const OutputOptions& out_opt, std::ostream& out,
                             std::ostream& err);

int cmd_replay(const std::filesystem::path& log_path, const OutputOptions& out_opt, std::ostream& out,
               std::ostream& err);

enum class ScoreKind { Sus, Alpha, ChiSquare, Likert };

struct ScoreOptions {
  ScoreKind kind = ScoreKind::Sus;
  std::filesystem::path csv_path;
  // alpha/likert: item bounds and 1-based reverse-coded item numbers. A JSON
  // sidecar {"name", "min", "max", "reverse"} overrides them when given.
  int min_value = 1;
  int max_value = 5;
  std::vector<int> reverse_items;
  std::optional<std::filesystem::path> scale_path;
  // chisq: read a contingency table instead of two raw categorical columns.
  bool table = false;
  std::vector<std::string> columns;  // chisq raw mode: the two columns to cross (default: first two)
};

int cmd_score(const ScoreOptions& opt, const OutputOptions& out_opt, std::ostream& out, std::ostream& err);

// Writes a synthetic Markov gaze/answer trace for the session a config describes.
int cmd_synth_trace(const std::filesystem::path& config_path, const std::filesystem::path& trace_path,
                    std::uint64_t trace_seed, std::optional<std::uint64_t> seed_override, std::ostream& err);

}  // namespace focusloop
