#pragma once

#include <optional>
#include <string>
#include <vector>

#include "focusloop/event_log.hpp"
#include "focusloop/session.hpp"

namespace focusloop {

// The external inputs a log recorded: debounced attention events, keypresses
// and submitted answers. Raw gaze is not needed because the attention events
// already carry the monitor's decisions.
std::vector<ExternalInput> recorded_inputs(const EventLog& log);

struct ReplayResult {
  bool match = false;
  std::optional<std::uint64_t> first_divergent_seq;
  std::string detail;
};

// Re-runs the session from the log's ConfigSnapshot and recorded inputs and
// compares every non-gaze, non-warning record. Throws InvalidLog when the log
// is not a complete or aborted session (e.g. truncated).
ReplayResult replay_verify(const EventLog& log);

// Records that replay compares (everything but GazeSample and Warning).
bool is_replayed_kind(RecordKind k);

}  // namespace focusloop
