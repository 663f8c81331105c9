#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace focusloop {

using Millis = std::int64_t;

enum class AttentionState { Attentive, Inattentive };

enum class RawAttention { OnTask, OffTask, NoFace };

std::string_view to_string(AttentionState s);
std::string_view to_string(RawAttention r);
std::optional<AttentionState> parse_attention_state(std::string_view s);

// One gaze/face observation. Angles in degrees; negative yaw looks left,
// negative pitch looks down.
struct GazeSample {
  Millis t = 0;
  bool face_present = true;
  double gaze_yaw = 0.0;
  double gaze_pitch = 0.0;
};

bool is_valid(const GazeSample& s);

// The on-screen gaze cone plus the keyboard band directly below it. Looking at
// the keyboard is on-task.
struct ScreenGeometry {
  double yaw_min = -20.0;
  double yaw_max = 20.0;
  double pitch_min = -15.0;
  double pitch_max = 15.0;
  double keyboard_pitch_min = -40.0;
};

bool is_valid(const ScreenGeometry& g);

// Debounced attention transition. `onset` is when the new state began in the
// raw stream; `t` is when the transition became known (onset + dwell for
// gaze-derived events, equal to onset for pre-debounced inputs).
struct AttentionEvent {
  Millis t = 0;
  AttentionState state = AttentionState::Attentive;
  Millis onset = 0;

  friend bool operator==(const AttentionEvent&, const AttentionEvent&) = default;
};

RawAttention classify_gaze(const GazeSample& sample, const ScreenGeometry& screen);

struct MonitorParams {
  Millis hysteresis_ms = 1000;
  Millis noface_grace_ms = 2000;
};

// Debouncer turning a RawAttention stream into alternating AttentionEvents.
//
// A raw OnTask maps to Attentive and OffTask to Inattentive. NoFace maps to
// Inattentive only once it has lasted noface_grace_ms; before that it maps to
// the current state, so a short face dropout can neither start nor sustain a
// transition. A mapped state different from the current one becomes the
// candidate; once the candidate has persisted hysteresis_ms it is emitted with
// onset = the time the candidate was first seen.
class AttentionMonitor {
 public:
  explicit AttentionMonitor(MonitorParams params = {},
                            AttentionState initial = AttentionState::Attentive);

  // Throws InputRejected if t is earlier than the previous step.
  std::optional<AttentionEvent> step(RawAttention raw, Millis t);

  // Adopt a pre-debounced state (manual toggle or external detector). Any
  // pending candidate is dropped. Throws InputRejected on time regression.
  void force(AttentionState state, Millis t);

  AttentionState current() const { return current_; }
  std::optional<AttentionState> candidate() const { return candidate_; }
  Millis candidate_since() const { return candidate_since_; }
  const MonitorParams& params() const { return params_; }

 private:
  void check_time(Millis t) const;

  MonitorParams params_;
  AttentionState current_;
  std::optional<AttentionState> candidate_;
  Millis candidate_since_ = 0;
  std::optional<Millis> noface_since_;
  std::optional<Millis> last_t_;
};

}  // namespace focusloop
