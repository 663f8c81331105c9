#include "focusloop/attention.hpp"

#include <cmath>
#include <string>

#include "focusloop/errors.hpp"

namespace focusloop {

std::string_view to_string(AttentionState s) {
  return s == AttentionState::Attentive ? "Attentive" : "Inattentive";
}

std::string_view to_string(RawAttention r) {
  switch (r) {
    case RawAttention::OnTask: return "OnTask";
    case RawAttention::OffTask: return "OffTask";
    case RawAttention::NoFace: return "NoFace";
  }
  return "?";
}

std::optional<AttentionState> parse_attention_state(std::string_view s) {
  if (s == "Attentive" || s == "attentive" || s == "1") return AttentionState::Attentive;
  if (s == "Inattentive" || s == "inattentive" || s == "0") return AttentionState::Inattentive;
  return std::nullopt;
}

bool is_valid(const GazeSample& s) {
  auto ok = [](double a) { return std::isfinite(a) && a >= -90.0 && a <= 90.0; };
  return s.t >= 0 && ok(s.gaze_yaw) && ok(s.gaze_pitch);
}

bool is_valid(const ScreenGeometry& g) {
  return g.yaw_min < g.yaw_max && g.pitch_min < g.pitch_max &&
         g.keyboard_pitch_min <= g.pitch_min;
}

RawAttention classify_gaze(const GazeSample& sample, const ScreenGeometry& screen) {
  if (!sample.face_present) return RawAttention::NoFace;
  const double yaw = sample.gaze_yaw;
  const double pitch = sample.gaze_pitch;
  if (!(yaw >= screen.yaw_min && yaw <= screen.yaw_max)) return RawAttention::OffTask;
  if (pitch >= screen.pitch_min && pitch <= screen.pitch_max) return RawAttention::OnTask;
  if (pitch >= screen.keyboard_pitch_min && pitch < screen.pitch_min) return RawAttention::OnTask;
  return RawAttention::OffTask;
}

AttentionMonitor::AttentionMonitor(MonitorParams params, AttentionState initial)
    : params_(params), current_(initial) {
  if (params_.hysteresis_ms <= 0) throw ConfigError("hysteresis_ms must be > 0");
  if (params_.noface_grace_ms < 0) throw ConfigError("noface_grace_ms must be >= 0");
}

void AttentionMonitor::check_time(Millis t) const {
  if (last_t_ && t < *last_t_) {
    throw InputRejected("attention input at t=" + std::to_string(t) +
                        " precedes previous input at t=" + std::to_string(*last_t_));
  }
}

std::optional<AttentionEvent> AttentionMonitor::step(RawAttention raw, Millis t) {
  check_time(t);
  last_t_ = t;

  AttentionState mapped = current_;
  switch (raw) {
    case RawAttention::OnTask:
      noface_since_.reset();
      mapped = AttentionState::Attentive;
      break;
    case RawAttention::OffTask:
      noface_since_.reset();
      mapped = AttentionState::Inattentive;
      break;
    case RawAttention::NoFace:
      if (!noface_since_) noface_since_ = t;
      if (t - *noface_since_ >= params_.noface_grace_ms) mapped = AttentionState::Inattentive;
      break;
  }

  if (mapped == current_) {
    candidate_.reset();
    return std::nullopt;
  }
  if (candidate_ != mapped) {
    candidate_ = mapped;
    candidate_since_ = t;
  }
  if (t - candidate_since_ >= params_.hysteresis_ms) {
    AttentionEvent ev{t, mapped, candidate_since_};
    current_ = mapped;
    candidate_.reset();
    return ev;
  }
  return std::nullopt;
}

void AttentionMonitor::force(AttentionState state, Millis t) {
  check_time(t);
  last_t_ = t;
  current_ = state;
  candidate_.reset();
  noface_since_.reset();
}

}  // namespace focusloop
