#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "focusloop/attention.hpp"
#include "focusloop/phrases.hpp"
#include "focusloop/rng.hpp"

namespace focusloop {

enum class Expression { SlightlyHappy, Happy, Disappointed, MakingFaces };

std::string_view to_string(Expression e);

struct FeedbackAction {
  Millis t = 0;
  FeedbackClass cls = FeedbackClass::Praise;
  int point_delta = 0;
  std::string phrase;
  Expression expression = Expression::SlightlyHappy;

  friend bool operator==(const FeedbackAction&, const FeedbackAction&) = default;
};

int point_delta_for(FeedbackClass c);
Expression expression_for(FeedbackClass c);

struct LedgerEntry {
  Millis t = 0;
  int delta = 0;
  FeedbackClass cls = FeedbackClass::Praise;
};

// Points account. History keeps every attempted delta even when the floor
// absorbs a deduction.
class TokenLedger {
 public:
  explicit TokenLedger(bool floor_at_zero = true) : floor_at_zero_(floor_at_zero) {}

  // delta must be +1 or -1.
  void apply(Millis t, FeedbackClass cls, int delta);

  long balance() const { return balance_; }
  bool floor_at_zero() const { return floor_at_zero_; }
  const std::vector<LedgerEntry>& history() const { return history_; }

 private:
  bool floor_at_zero_;
  long balance_ = 0;
  std::vector<LedgerEntry> history_;
};

// Value-returning form of TokenLedger::apply.
TokenLedger apply_delta(TokenLedger ledger, Millis t, FeedbackClass cls, int delta);

struct PolicyParams {
  Millis praise_interval_ms = 45000;
  double short_praise_ratio = 0.5;
  Millis start_window_ms = 10000;
  Millis criticize_grace_ms = 2000;
  Millis recriticize_interval_ms = 30000;
  bool floor_at_zero = true;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

// Throws ValidationError listing every out-of-range field.
void validate(const PolicyParams& p);
nlohmann::json to_json(const PolicyParams& p);
// Applies the fields present in `j` on top of `base`.
PolicyParams policy_from_json(const nlohmann::json& j, PolicyParams base = {});

struct TaskExplained {
  Millis t = 0;
};
struct FirstKeypress {
  Millis t = 0;
};
struct Tick {
  Millis t = 0;
};

using EngineInput = std::variant<AttentionEvent, TaskExplained, FirstKeypress, Tick>;

Millis input_time(const EngineInput& in);

struct EngineState {
  AttentionState attention = AttentionState::Attentive;
  Millis attention_since = 0;
  // Set while an inattention episode has been criticized and not yet
  // resolved by a reattention praise.
  std::optional<Millis> last_criticism_t;
  Millis last_periodic_praise_t = 0;
  bool start_praised = false;
  bool first_keypress_seen = false;
  std::optional<Millis> task_explained_t;
  std::optional<Millis> last_input_t;
  Millis criticism_suppressed_until = -1;

  bool criticized() const { return last_criticism_t.has_value(); }
};

// Response-cost token state machine. Feed inputs in non-decreasing time; each
// step returns the feedback actions it triggered, already applied to the
// ledger. With several triggers on one input the order is: reattention
// praise, periodic praise, criticism, repeated criticism, start praise.
class RctEngine {
 public:
  RctEngine(PolicyParams params, PhraseSelector phrases, std::string child_name,
            RandomStream praise_mix);

  // Throws InputRejected when the input is earlier than the previous one.
  std::vector<FeedbackAction> step(const EngineInput& input);

  // Re-baselines timing at the start of a trial: attention is taken as given
  // from `t`, periodic praise restarts and any open episode is closed. The
  // ledger and random streams carry over.
  void begin_trial(Millis t, AttentionState attention);

  // Criticisms that would trigger at or before `t` are held back; if the child
  // is still inattentive afterwards they fire on the next tick.
  void suppress_criticism_until(Millis t);

  const EngineState& state() const { return state_; }
  const TokenLedger& ledger() const { return ledger_; }
  const PolicyParams& params() const { return params_; }

 private:
  FeedbackAction emit(Millis t, FeedbackClass cls);
  void on_attention(const AttentionEvent& ev, std::vector<FeedbackAction>& out);
  void on_tick(Millis t, std::vector<FeedbackAction>& out);
  void on_keypress(Millis t, std::vector<FeedbackAction>& out);

  PolicyParams params_;
  PhraseSelector phrases_;
  std::string child_name_;
  RandomStream praise_mix_;
  EngineState state_;
  TokenLedger ledger_;
};

}  // namespace focusloop
