#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"

#include "focusloop/attention.hpp"
#include "focusloop/event_log.hpp"
#include "focusloop/phrases.hpp"
#include "focusloop/rct_engine.hpp"
#include "focusloop/tasks.hpp"

namespace focusloop {

struct SessionConfig {
  std::string child_name;
  int age = 8;
  std::string child_id;
  std::int64_t session_id = 1;
  int degree_of_distraction = 2;

  Millis intro_duration_ms = 15000;
  Millis trial_duration_ms = 300000;
  Millis break_duration_ms = 60000;
  Millis goodbye_duration_ms = 5000;
  Millis tick_interval_ms = 250;
  std::uint64_t seed = 0;

  // Session-1 policy; the runner applies fade_params for later sessions.
  PolicyParams policy;
  MonitorParams monitor;
  ScreenGeometry screen;
  PhraseBook phrases = PhraseBook::defaults();
  std::vector<AgeBand> task_bands = default_age_bands();

  bool log_full_gaze = false;
  bool report_enabled = true;
};

// Throws ValidationError naming every invalid field.
void validate(const SessionConfig& c);
// Reads a configuration document. Missing optional fields keep their
// defaults; unknown keys are rejected. Throws ValidationError.
SessionConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SessionConfig& c);
SessionConfig load_config(const std::string& path);

inline constexpr Millis kPraiseIntervalCapMs = 120000;
inline constexpr Millis kDistractionMarginMs = 30000;
inline constexpr Millis kDistractionSpacingMs = 60000;
inline constexpr Millis kCriticismSuppressionMs = 5000;
inline constexpr Millis kGazeLogPeriodMs = 250;

// Feedback fading: the periodic praise interval grows by 25% of the base per
// session after the first, capped at two minutes.
PolicyParams fade_params(const PolicyParams& base, std::int64_t session_id);

int distraction_count(int degree_of_distraction);

enum class PhaseKind { Intro, Trial, Break, Goodbye };

std::string_view to_string(PhaseKind k);

struct DistractionEvent {
  Millis t = 0;  // relative to the trial start
  std::string phrase;
  Expression expression = Expression::MakingFaces;
};

struct Phase {
  PhaseKind kind = PhaseKind::Intro;
  int trial = 0;  // 1 or 2 for trials
  Millis start = 0;
  Millis duration = 0;
  std::vector<std::string> utterances;
  std::vector<DistractionEvent> distractions;

  Millis end() const { return start + duration; }
};

struct SessionScript {
  std::vector<Phase> phases;

  Millis end() const { return phases.empty() ? 0 : phases.back().end(); }
  const Phase* phase_at(Millis t) const;
  std::vector<const Phase*> trials() const;
};

nlohmann::json to_json(const SessionScript& s);

// Intro, Trial 1 (no distractions), Break, Trial 2 (distractions), Goodbye.
// Distraction times are drawn from the "distractions" stream of the seed.
SessionScript plan_session(const SessionConfig& config);

struct KeypressInput {
  Millis t = 0;
};

// A typed answer. The literal texts "@correct" and "@wrong" are resolved
// against the active task when processed (simulation affordance); the log
// records the resolved text.
struct AnswerInput {
  Millis t = 0;
  std::string text;
};

// Attention can arrive as raw gaze or as already-debounced events (external
// detector, manual toggle, or a replayed log).
using ExternalInput = std::variant<GazeSample, AttentionEvent, KeypressInput, AnswerInput>;

Millis input_time(const ExternalInput& in);
// Tie-break rank at equal timestamps: scripted 0 < attention 1 < keypress 2 < tick 3.
int input_rank(const ExternalInput& in);
// Stable sort into processing order.
void sort_inputs(std::vector<ExternalInput>& inputs);

enum class SessionEnd { Finished, Aborted };

// Drives one session on a logical clock: merges external inputs with scripted
// events and ticks, routes them through the monitor, engine and task session,
// and appends every input and output to the log. Single-threaded; callers
// that receive inputs concurrently must serialize them.
class SessionRunner {
 public:
  using Sink = std::function<void(const EventLogRecord&)>;

  explicit SessionRunner(SessionConfig config, Sink sink = {});
  SessionRunner(SessionConfig config, SessionScript script, Sink sink = {});

  // Queues an input. Inputs dated before now() are rejected with a Warning
  // record; inputs at or after the session end are reported at finish().
  void submit(ExternalInput input);

  // Processes everything scheduled at or before t (capped below end()).
  void advance_to(Millis t);

  // Runs to the end of the script and appends the End marker.
  void finish();
  // Appends an Aborted marker at max(now, t) after processing up to t.
  void abort(Millis t);

  bool done() const { return ended_.has_value(); }
  std::optional<SessionEnd> ended() const { return ended_; }
  Millis now() const { return now_; }
  Millis end() const { return script_.end(); }
  const EventLog& log() const { return log_; }
  const SessionScript& script() const { return script_; }
  const SessionConfig& config() const { return config_; }
  const PolicyParams& effective_policy() const { return policy_; }
  const RctEngine& engine() const { return engine_; }
  const Phase* current_phase() const { return script_.phase_at(now_); }

 private:
  struct Scripted {
    Millis t;
    std::function<void()> run;
  };
  struct QueueKey {
    Millis t;
    int rank;
    std::uint64_t order;
    bool operator<(const QueueKey& o) const { return std::tie(t, rank, order) < std::tie(o.t, o.rank, o.order); }
  };

  void build_schedule();
  const EventLogRecord& record(Millis t, RecordKind kind, nlohmann::json payload);
  void warn(Millis t, std::string reason, nlohmann::json detail = nullptr);
  bool in_trial(Millis t) const;
  void feed_engine(const EngineInput& in);
  void on_attention_event(const AttentionEvent& ev);
  void process(const ExternalInput& in);
  void process_gaze(const GazeSample& s);
  void process_attention(const AttentionEvent& ev);
  void process_keypress(const KeypressInput& k);
  void process_answer(const AnswerInput& a);
  void route_first_keypress(Millis t);
  void present_task(Millis t);
  void process_tick(Millis t);

  SessionConfig config_;
  SessionScript script_;
  Sink sink_;
  PolicyParams policy_;
  EventLog log_;
  AttentionMonitor monitor_;
  RctEngine engine_;
  TaskSession tasks_;

  std::vector<Scripted> schedule_;
  std::size_t next_scripted_ = 0;
  std::map<QueueKey, ExternalInput> queue_;
  std::uint64_t arrival_ = 0;
  Millis now_ = 0;
  Millis next_tick_ = 0;
  std::optional<Millis> last_logged_gaze_;
  bool first_keypress_routed_ = false;
  std::optional<SessionEnd> ended_;
};

// Batch form: runs the whole session over a pre-recorded input stream.
EventLog run_session(const SessionConfig& config, const SessionScript& script, std::vector<ExternalInput> inputs);
EventLog run_session(const SessionConfig& config, std::vector<ExternalInput> inputs);

}  // namespace focusloop
