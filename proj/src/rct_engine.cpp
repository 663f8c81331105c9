#include "focusloop/rct_engine.hpp"

#include <algorithm>

#include "focusloop/errors.hpp"

namespace focusloop {

std::string_view to_string(Expression e) {
  switch (e) {
    case Expression::SlightlyHappy: return "SlightlyHappy";
    case Expression::Happy: return "Happy";
    case Expression::Disappointed: return "Disappointed";
    case Expression::MakingFaces: return "MakingFaces";
  }
  return "?";
}

int point_delta_for(FeedbackClass c) { return is_praise(c) ? +1 : -1; }

Expression expression_for(FeedbackClass c) {
  return is_praise(c) ? Expression::Happy : Expression::Disappointed;
}

void TokenLedger::apply(Millis t, FeedbackClass cls, int delta) {
  history_.push_back({t, delta, cls});
  balance_ += delta;
  if (floor_at_zero_ && balance_ < 0) balance_ = 0;
}

TokenLedger apply_delta(TokenLedger ledger, Millis t, FeedbackClass cls, int delta) {
  ledger.apply(t, cls, delta);
  return ledger;
}

void validate(const PolicyParams& p) {
  std::vector<FieldError> errs;
  if (p.praise_interval_ms <= 0) errs.push_back({"praise_interval_ms", "must be > 0"});
  if (!(p.short_praise_ratio >= 0.0 && p.short_praise_ratio <= 1.0))
    errs.push_back({"short_praise_ratio", "must be in [0, 1]"});
  if (p.start_window_ms <= 0) errs.push_back({"start_window_ms", "must be > 0"});
  if (p.criticize_grace_ms <= 0) errs.push_back({"criticize_grace_ms", "must be > 0"});
  if (p.recriticize_interval_ms <= 0) errs.push_back({"recriticize_interval_ms", "must be > 0"});
  if (!errs.empty()) throw ValidationError(std::move(errs));
}

nlohmann::json to_json(const PolicyParams& p) {
  return {{"praise_interval_ms", p.praise_interval_ms},
          {"short_praise_ratio", p.short_praise_ratio},
          {"start_window_ms", p.start_window_ms},
          {"criticize_grace_ms", p.criticize_grace_ms},
          {"recriticize_interval_ms", p.recriticize_interval_ms},
          {"floor_at_zero", p.floor_at_zero}};
}

PolicyParams policy_from_json(const nlohmann::json& j, PolicyParams base) {
  if (!j.is_object()) throw ConfigError("policy: expected an object");
  std::vector<FieldError> errs;
  auto read_ms = [&](const char* key, Millis& dst) {
    if (auto it = j.find(key); it != j.end()) {
      if (it->is_number_integer()) dst = it->get<Millis>();
      else errs.push_back({std::string("policy.") + key, "must be an integer"});
    }
  };
  read_ms("praise_interval_ms", base.praise_interval_ms);
  read_ms("start_window_ms", base.start_window_ms);
  read_ms("criticize_grace_ms", base.criticize_grace_ms);
  read_ms("recriticize_interval_ms", base.recriticize_interval_ms);
  if (auto it = j.find("short_praise_ratio"); it != j.end()) {
    if (it->is_number()) base.short_praise_ratio = it->get<double>();
    else errs.push_back({"policy.short_praise_ratio", "must be a number"});
  }
  if (auto it = j.find("floor_at_zero"); it != j.end()) {
    if (it->is_boolean()) base.floor_at_zero = it->get<bool>();
    else errs.push_back({"policy.floor_at_zero", "must be a boolean"});
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return base;
}

Millis input_time(const EngineInput& in) {
  return std::visit([](const auto& v) { return v.t; }, in);
}

RctEngine::RctEngine(PolicyParams params, PhraseSelector phrases, std::string child_name,
                     RandomStream praise_mix)
    : params_(params),
      phrases_(std::move(phrases)),
      child_name_(std::move(child_name)),
      praise_mix_(std::move(praise_mix)),
      ledger_(params.floor_at_zero) {
  validate(params_);
}

FeedbackAction RctEngine::emit(Millis t, FeedbackClass cls) {
  FeedbackAction a;
  a.t = t;
  a.cls = cls;
  a.point_delta = point_delta_for(cls);
  a.phrase = phrases_.select(cls, child_name_);
  a.expression = expression_for(cls);
  ledger_.apply(t, cls, a.point_delta);
  return a;
}

std::vector<FeedbackAction> RctEngine::step(const EngineInput& input) {
  const Millis t = input_time(input);
  if (state_.last_input_t && t < *state_.last_input_t) {
    throw InputRejected("engine input at t=" + std::to_string(t) +
                        " precedes previous input at t=" + std::to_string(*state_.last_input_t));
  }
  state_.last_input_t = t;

  std::vector<FeedbackAction> out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AttentionEvent>) {
          on_attention(v, out);
        } else if constexpr (std::is_same_v<T, Tick>) {
          on_tick(v.t, out);
        } else if constexpr (std::is_same_v<T, FirstKeypress>) {
          on_keypress(v.t, out);
        } else if constexpr (std::is_same_v<T, TaskExplained>) {
          state_.task_explained_t = v.t;
        }
      },
      input);
  return out;
}

void RctEngine::on_attention(const AttentionEvent& ev, std::vector<FeedbackAction>& out) {
  if (ev.state == state_.attention) return;
  state_.attention = ev.state;
  state_.attention_since = std::min(ev.onset, ev.t);
  if (ev.state == AttentionState::Attentive && state_.criticized()) {
    out.push_back(emit(ev.t, FeedbackClass::PraiseAfterReattention));
    state_.last_criticism_t.reset();
    state_.last_periodic_praise_t = ev.t;
  }
}

void RctEngine::on_tick(Millis t, std::vector<FeedbackAction>& out) {
  if (state_.attention == AttentionState::Attentive) {
    const Millis since = std::max(state_.attention_since, state_.last_periodic_praise_t);
    if (t - since >= params_.praise_interval_ms) {
      const auto cls = praise_mix_.bernoulli(params_.short_praise_ratio) ? FeedbackClass::ShortPraise
                                                                         : FeedbackClass::Praise;
      out.push_back(emit(t, cls));
      state_.last_periodic_praise_t = t;
    }
    return;
  }

  if (t <= state_.criticism_suppressed_until) return;
  if (!state_.criticized()) {
    if (t - state_.attention_since >= params_.criticize_grace_ms) {
      out.push_back(emit(t, FeedbackClass::Criticize));
      state_.last_criticism_t = t;
    }
  } else if (t - *state_.last_criticism_t >= params_.recriticize_interval_ms) {
    out.push_back(emit(t, FeedbackClass::CriticizeAgain));
    state_.last_criticism_t = t;
  }
}

void RctEngine::on_keypress(Millis t, std::vector<FeedbackAction>& out) {
  if (state_.first_keypress_seen || state_.start_praised || !state_.task_explained_t) return;
  state_.first_keypress_seen = true;
  if (t - *state_.task_explained_t <= params_.start_window_ms) {
    out.push_back(emit(t, FeedbackClass::PraiseImmediateStart));
    state_.start_praised = true;
  }
}

void RctEngine::begin_trial(Millis t, AttentionState attention) {
  if (state_.last_input_t && t < *state_.last_input_t) {
    throw InputRejected("trial start precedes previous engine input");
  }
  state_.last_input_t = t;
  state_.attention = attention;
  state_.attention_since = t;
  state_.last_periodic_praise_t = t;
  state_.last_criticism_t.reset();
}

void RctEngine::suppress_criticism_until(Millis t) {
  state_.criticism_suppressed_until = std::max(state_.criticism_suppressed_until, t);
}

}  // namespace focusloop
