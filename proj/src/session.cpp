#include "focusloop/session.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "focusloop/errors.hpp"

namespace focusloop {

namespace {

constexpr Millis kNever = std::numeric_limits<Millis>::max();

bool safe_identifier(const std::string& s) {
  if (s.empty() || s == "." || s == "..") return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

Millis min_trial_for(int distractions) {
  if (distractions <= 0) return 1;
  return 2 * kDistractionMarginMs + (distractions - 1) * kDistractionSpacingMs;
}

}  // namespace

int distraction_count(int degree_of_distraction) {
  static constexpr int kMap[] = {0, 1, 2, 4};
  if (degree_of_distraction < 0 || degree_of_distraction > 3) return 0;
  return kMap[degree_of_distraction];
}

void validate(const SessionConfig& c) {
  std::vector<FieldError> errs;
  if (c.child_name.empty()) errs.push_back({"child_name", "must not be empty"});
  if (c.age < 6 || c.age > 17) errs.push_back({"age", "must be between 6 and 17"});
  if (!safe_identifier(c.child_id))
    errs.push_back({"child_id", "must be non-empty and use only letters, digits, '-', '_' or '.'"});
  if (c.session_id < 1) errs.push_back({"session_id", "must be >= 1"});
  if (c.degree_of_distraction < 0 || c.degree_of_distraction > 3)
    errs.push_back({"degree_of_distraction", "must be between 0 and 3"});
  if (c.intro_duration_ms < 0) errs.push_back({"intro_duration_ms", "must be >= 0"});
  if (c.break_duration_ms < 0) errs.push_back({"break_duration_ms", "must be >= 0"});
  if (c.goodbye_duration_ms < 0) errs.push_back({"goodbye_duration_ms", "must be >= 0"});
  if (c.trial_duration_ms <= 0) {
    errs.push_back({"trial_duration_ms", "must be > 0"});
  } else if (c.trial_duration_ms < min_trial_for(distraction_count(c.degree_of_distraction))) {
    errs.push_back({"trial_duration_ms", "too short to place the configured distractions"});
  }
  if (c.tick_interval_ms <= 0) errs.push_back({"tick_interval_ms", "must be > 0"});
  try {
    validate(c.policy);
  } catch (const ValidationError& e) {
    for (const auto& f : e.errors()) errs.push_back({"policy." + f.field, f.message});
  }
  if (c.monitor.hysteresis_ms <= 0) errs.push_back({"monitor.hysteresis_ms", "must be > 0"});
  if (c.monitor.noface_grace_ms < 0) errs.push_back({"monitor.noface_grace_ms", "must be >= 0"});
  if (!is_valid(c.screen)) errs.push_back({"screen", "needs yaw_min < yaw_max, pitch_min < pitch_max, keyboard_pitch_min <= pitch_min"});
  for (auto cls : kAllFeedbackClasses) {
    auto it = c.phrases.feedback.find(cls);
    if (it == c.phrases.feedback.end() || it->second.empty())
      errs.push_back({"phrases.feedback." + std::string(to_string(cls)), "inventory is empty"});
  }
  if (distraction_count(c.degree_of_distraction) > 0 && c.phrases.distraction.empty())
    errs.push_back({"phrases.distraction", "inventory is empty"});
  try {
    validate_bands(c.task_bands);
  } catch (const ConfigError& e) {
    errs.push_back({"task_bands", e.what()});
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
}

SessionConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError(FieldErrors{{"config", "expected a JSON object"}});
  static const std::set<std::string> kKnown = {
      "child_name", "age", "child_id", "session_id", "degree_of_distraction", "intro_duration_ms",
      "trial_duration_ms", "break_duration_ms", "goodbye_duration_ms", "tick_interval_ms", "seed",
      "policy", "monitor", "screen", "phrases", "task_bands", "log_full_gaze", "report_enabled"};

  SessionConfig c;
  std::vector<FieldError> errs;
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.count(key)) errs.push_back({key, "unknown field"});
  }

  auto read_string = [&](const char* key, std::string& dst, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) errs.push_back({key, "is required"});
    } else if (it->is_string()) {
      dst = it->get<std::string>();
    } else {
      errs.push_back({key, "must be a string"});
    }
  };
  auto read_int = [&](const char* key, auto& dst, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) errs.push_back({key, "is required"});
    } else if (it->is_number_integer()) {
      dst = it->get<std::remove_reference_t<decltype(dst)>>();
    } else {
      errs.push_back({key, "must be an integer"});
    }
  };
  auto read_bool = [&](const char* key, bool& dst) {
    if (auto it = j.find(key); it != j.end()) {
      if (it->is_boolean()) dst = it->get<bool>();
      else errs.push_back({key, "must be a boolean"});
    }
  };

  read_string("child_name", c.child_name, true);
  read_int("age", c.age, true);
  read_string("child_id", c.child_id, true);
  read_int("session_id", c.session_id, true);
  read_int("degree_of_distraction", c.degree_of_distraction, false);
  read_int("intro_duration_ms", c.intro_duration_ms, false);
  read_int("trial_duration_ms", c.trial_duration_ms, false);
  read_int("break_duration_ms", c.break_duration_ms, false);
  read_int("goodbye_duration_ms", c.goodbye_duration_ms, false);
  read_int("tick_interval_ms", c.tick_interval_ms, false);
  if (auto it = j.find("seed"); it != j.end()) {
    if (it->is_number_unsigned()) c.seed = it->get<std::uint64_t>();
    else if (it->is_number_integer() && it->get<std::int64_t>() >= 0) c.seed = it->get<std::uint64_t>();
    else errs.push_back({"seed", "must be a non-negative 64-bit integer"});
  }
  read_bool("log_full_gaze", c.log_full_gaze);
  read_bool("report_enabled", c.report_enabled);

  if (auto it = j.find("policy"); it != j.end()) {
    try {
      c.policy = policy_from_json(*it, c.policy);
    } catch (const ValidationError& e) {
      errs.insert(errs.end(), e.errors().begin(), e.errors().end());
    } catch (const ConfigError& e) {
      errs.push_back({"policy", e.what()});
    }
  }
  if (auto it = j.find("monitor"); it != j.end()) {
    if (!it->is_object()) {
      errs.push_back({"monitor", "must be an object"});
    } else {
      for (const auto& [key, v] : it->items()) {
        if (!v.is_number_integer()) {
          errs.push_back({"monitor." + key, "must be an integer"});
        } else if (key == "hysteresis_ms") {
          c.monitor.hysteresis_ms = v.get<Millis>();
        } else if (key == "noface_grace_ms") {
          c.monitor.noface_grace_ms = v.get<Millis>();
        } else {
          errs.push_back({"monitor." + key, "unknown field"});
        }
      }
    }
  }
  if (auto it = j.find("screen"); it != j.end()) {
    if (!it->is_object()) {
      errs.push_back({"screen", "must be an object"});
    } else {
      const std::map<std::string, double*> fields = {{"yaw_min", &c.screen.yaw_min},
                                                     {"yaw_max", &c.screen.yaw_max},
                                                     {"pitch_min", &c.screen.pitch_min},
                                                     {"pitch_max", &c.screen.pitch_max},
                                                     {"keyboard_pitch_min", &c.screen.keyboard_pitch_min}};
      for (const auto& [key, v] : it->items()) {
        auto f = fields.find(key);
        if (f == fields.end()) errs.push_back({"screen." + key, "unknown field"});
        else if (!v.is_number()) errs.push_back({"screen." + key, "must be a number"});
        else *f->second = v.get<double>();
      }
    }
  }
  if (auto it = j.find("phrases"); it != j.end()) {
    try {
      c.phrases = phrase_book_from_json(*it);
    } catch (const ConfigError& e) {
      errs.push_back({"phrases", e.what()});
    }
  }
  if (auto it = j.find("task_bands"); it != j.end()) {
    try {
      c.task_bands = age_bands_from_json(*it);
    } catch (const ConfigError& e) {
      errs.push_back({"task_bands", e.what()});
    }
  }

  try {
    validate(c);
  } catch (const ValidationError& e) {
    for (const auto& f : e.errors()) {
      const bool seen = std::any_of(errs.begin(), errs.end(), [&](const FieldError& x) { return x.field == f.field; });
      if (!seen) errs.push_back(f);
    }
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return c;
}

nlohmann::json to_json(const SessionConfig& c) {
  return {{"child_name", c.child_name},
          {"age", c.age},
          {"child_id", c.child_id},
          {"session_id", c.session_id},
          {"degree_of_distraction", c.degree_of_distraction},
          {"intro_duration_ms", c.intro_duration_ms},
          {"trial_duration_ms", c.trial_duration_ms},
          {"break_duration_ms", c.break_duration_ms},
          {"goodbye_duration_ms", c.goodbye_duration_ms},
          {"tick_interval_ms", c.tick_interval_ms},
          {"seed", c.seed},
          {"policy", to_json(c.policy)},
          {"monitor", {{"hysteresis_ms", c.monitor.hysteresis_ms}, {"noface_grace_ms", c.monitor.noface_grace_ms}}},
          {"screen",
           {{"yaw_min", c.screen.yaw_min},
            {"yaw_max", c.screen.yaw_max},
            {"pitch_min", c.screen.pitch_min},
            {"pitch_max", c.screen.pitch_max},
            {"keyboard_pitch_min", c.screen.keyboard_pitch_min}}},
          {"phrases", to_json(c.phrases)},
          {"task_bands", to_json(c.task_bands)},
          {"log_full_gaze", c.log_full_gaze},
          {"report_enabled", c.report_enabled}};
}

SessionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(FieldErrors{{"config", "cannot open " + path}});
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(FieldErrors{{"config", std::string("not valid JSON: ") + e.what()}});
  }
  return config_from_json(j);
}

PolicyParams fade_params(const PolicyParams& base, std::int64_t session_id) {
  PolicyParams p = base;
  const double factor = 1.0 + 0.25 * static_cast<double>(session_id - 1);
  const double faded = std::round(static_cast<double>(base.praise_interval_ms) * factor);
  p.praise_interval_ms = std::min(static_cast<Millis>(faded), kPraiseIntervalCapMs);
  return p;
}

std::string_view to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::Intro: return "Intro";
    case PhaseKind::Trial: return "Trial";
    case PhaseKind::Break: return "Break";
    case PhaseKind::Goodbye: return "Goodbye";
  }
  return "?";
}

const Phase* SessionScript::phase_at(Millis t) const {
  for (const auto& p : phases) {
    if (t >= p.start && t < p.end()) return &p;
  }
  return nullptr;
}

std::vector<const Phase*> SessionScript::trials() const {
  std::vector<const Phase*> out;
  for (const auto& p : phases) {
    if (p.kind == PhaseKind::Trial) out.push_back(&p);
  }
  return out;
}

nlohmann::json to_json(const SessionScript& s) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : s.phases) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& ev : p.distractions) {
      d.push_back({{"t", ev.t}, {"phrase", ev.phrase}, {"expression", to_string(ev.expression)}});
    }
    phases.push_back({{"phase", to_string(p.kind)},
                      {"trial", p.trial},
                      {"start", p.start},
                      {"duration_ms", p.duration},
                      {"distractions", d}});
  }
  return {{"phases", phases}, {"end", s.end()}};
}

SessionScript plan_session(const SessionConfig& config) {
  validate(config);
  SessionScript script;
  Millis cursor = 0;
  auto add = [&](PhaseKind kind, int trial, Millis duration) -> std::size_t {
    Phase p;
    p.kind = kind;
    p.trial = trial;
    p.start = cursor;
    p.duration = duration;
    cursor += duration;
    script.phases.push_back(std::move(p));
    return script.phases.size() - 1;
  };

  const auto intro = add(PhaseKind::Intro, 0, config.intro_duration_ms);
  add(PhaseKind::Trial, 1, config.trial_duration_ms);
  add(PhaseKind::Break, 0, config.break_duration_ms);
  const auto trial2 = add(PhaseKind::Trial, 2, config.trial_duration_ms);
  const auto goodbye = add(PhaseKind::Goodbye, 0, config.goodbye_duration_ms);
  for (const auto& u : config.phrases.intro)
    script.phases[intro].utterances.push_back(substitute_name(u, config.child_name));
  for (const auto& u : config.phrases.goodbye)
    script.phases[goodbye].utterances.push_back(substitute_name(u, config.child_name));

  // Spaced uniform placement: draw n offsets in the slack, sort, then add the
  // mandatory spacing back in. Every draw satisfies the margin and spacing
  // constraints by construction.
  const int n = distraction_count(config.degree_of_distraction);
  if (n > 0) {
    RandomStream stream(config.seed, "distractions");
    const Millis slack = config.trial_duration_ms - 2 * kDistractionMarginMs - (n - 1) * kDistractionSpacingMs;
    std::vector<Millis> offsets;
    for (int i = 0; i < n; ++i) offsets.push_back(stream.uniform_int(0, slack));
    std::sort(offsets.begin(), offsets.end());
    PhraseSelector phrases(config.phrases, RandomStream(config.seed, "distraction_phrases"));
    for (int i = 0; i < n; ++i) {
      DistractionEvent ev;
      ev.t = kDistractionMarginMs + offsets[static_cast<std::size_t>(i)] + i * kDistractionSpacingMs;
      ev.phrase = phrases.select_distraction();
      script.phases[trial2].distractions.push_back(std::move(ev));
    }
  }
  return script;
}

Millis input_time(const ExternalInput& in) {
  return std::visit([](const auto& v) { return v.t; }, in);
}

int input_rank(const ExternalInput& in) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GazeSample> || std::is_same_v<T, AttentionEvent>) return 1;
        else return 2;
      },
      in);
}

void sort_inputs(std::vector<ExternalInput>& inputs) {
  std::stable_sort(inputs.begin(), inputs.end(), [](const ExternalInput& a, const ExternalInput& b) {
    return std::make_pair(input_time(a), input_rank(a)) < std::make_pair(input_time(b), input_rank(b));
  });
}

SessionRunner::SessionRunner(SessionConfig config, Sink sink)
    : SessionRunner(config, plan_session(config), std::move(sink)) {}

SessionRunner::SessionRunner(SessionConfig config, SessionScript script, Sink sink)
    : config_((validate(config), std::move(config))),
      script_(std::move(script)),
      sink_(std::move(sink)),
      policy_(fade_params(config_.policy, config_.session_id)),
      monitor_(config_.monitor, AttentionState::Attentive),
      engine_(policy_, PhraseSelector(config_.phrases, RandomStream(config_.seed, "phrases")), config_.child_name,
              RandomStream(config_.seed, "praise_mix")),
      tasks_(TaskGenerator(band_for_age(config_.task_bands, config_.age), RandomStream(config_.seed, "tasks"))) {
  record(0, RecordKind::ConfigSnapshot,
         {{"schema", kLogSchemaVersion},
          {"config", to_json(config_)},
          {"effective_policy", to_json(policy_)},
          {"script", to_json(script_)}});
  build_schedule();
}

const EventLogRecord& SessionRunner::record(Millis t, RecordKind kind, nlohmann::json payload) {
  const auto& r = log_.emit(t, kind, std::move(payload));
  if (sink_) sink_(r);
  return r;
}

void SessionRunner::warn(Millis t, std::string reason, nlohmann::json detail) {
  nlohmann::json payload = {{"reason", std::move(reason)}};
  if (!detail.is_null()) payload["detail"] = std::move(detail);
  record(t, RecordKind::Warning, std::move(payload));
}

void SessionRunner::build_schedule() {
  for (const auto& phase : script_.phases) {
    const Phase* p = &phase;
    schedule_.push_back({p->start, [this, p] {
                           record(p->start, RecordKind::PhaseStart,
                                  {{"phase", to_string(p->kind)},
                                   {"trial", p->trial},
                                   {"duration_ms", p->duration},
                                   {"utterances", p->utterances}});
                           if (p->kind == PhaseKind::Intro && p->start == 0) {
                             record(0, RecordKind::AttentionEvent,
                                    {{"state", to_string(monitor_.current())}, {"onset", 0}, {"initial", true}});
                           }
                           if (p->kind != PhaseKind::Trial) return;
                           engine_.begin_trial(p->start, monitor_.current());
                           if (p->trial == 1) feed_engine(TaskExplained{p->start});
                           present_task(p->start);
                         }});
    for (const auto& d : phase.distractions) {
      const Millis at = phase.start + d.t;
      const DistractionEvent* ev = &d;
      schedule_.push_back({at, [this, at, ev, p] {
                             record(at, RecordKind::Distraction,
                                    {{"phrase", ev->phrase},
                                     {"expression", to_string(ev->expression)},
                                     {"trial", p->trial}});
                             engine_.suppress_criticism_until(at + kCriticismSuppressionMs);
                           }});
    }
  }
  std::stable_sort(schedule_.begin(), schedule_.end(),
                   [](const Scripted& a, const Scripted& b) { return a.t < b.t; });
}

bool SessionRunner::in_trial(Millis t) const {
  const Phase* p = script_.phase_at(t);
  return p && p->kind == PhaseKind::Trial;
}

void SessionRunner::feed_engine(const EngineInput& in) {
  long balance = engine_.ledger().balance();
  const bool floor = engine_.ledger().floor_at_zero();
  for (const auto& a : engine_.step(in)) {
    balance += a.point_delta;
    if (floor && balance < 0) balance = 0;
    record(a.t, RecordKind::Feedback,
           {{"class", to_string(a.cls)},
            {"delta", a.point_delta},
            {"phrase", a.phrase},
            {"expression", to_string(a.expression)}});
    record(a.t, RecordKind::PointsUpdate, {{"class", to_string(a.cls)}, {"delta", a.point_delta}, {"balance", balance}});
  }
}

void SessionRunner::present_task(Millis t) {
  record(t, RecordKind::TaskPresented, to_json(tasks_.active()));
}

void SessionRunner::submit(ExternalInput input) {
  if (ended_) throw StateError("session already ended");
  const Millis t = input_time(input);
  if (t < now_) {
    warn(now_, "late input dropped", {{"input_t", t}});
    return;
  }
  queue_.emplace(QueueKey{t, input_rank(input), arrival_++}, std::move(input));
}

void SessionRunner::advance_to(Millis t) {
  if (ended_) return;
  const Millis limit = std::min(t, end() - 1);
  while (true) {
    Millis best_t = kNever;
    int best_rank = 4;
    int source = -1;  // 0 scripted, 1 queued input, 2 tick
    if (next_scripted_ < schedule_.size()) {
      best_t = schedule_[next_scripted_].t;
      best_rank = 0;
      source = 0;
    }
    if (!queue_.empty()) {
      const auto& key = queue_.begin()->first;
      if (std::tie(key.t, key.rank) < std::tie(best_t, best_rank)) {
        best_t = key.t;
        best_rank = key.rank;
        source = 1;
      }
    }
    if (next_tick_ < end() && std::make_pair(next_tick_, 3) < std::make_pair(best_t, best_rank)) {
      best_t = next_tick_;
      best_rank = 3;
      source = 2;
    }
    if (source < 0 || best_t > limit) break;

    now_ = best_t;
    if (source == 0) {
      schedule_[next_scripted_++].run();
    } else if (source == 1) {
      auto node = queue_.extract(queue_.begin());
      process(node.mapped());
    } else {
      process_tick(next_tick_);
      next_tick_ += config_.tick_interval_ms;
    }
  }
  now_ = std::max(now_, std::min(t, end()));
}

void SessionRunner::finish() {
  if (ended_) throw StateError("session already ended");
  advance_to(end());
  now_ = end();
  for (const auto& [key, in] : queue_) {
    warn(end(), "input beyond session end ignored", {{"input_t", key.t}});
  }
  queue_.clear();
  record(end(), RecordKind::PhaseStart, {{"phase", "End"}, {"status", "Finished"}});
  ended_ = SessionEnd::Finished;
}

void SessionRunner::abort(Millis t) {
  if (ended_) throw StateError("session already ended");
  advance_to(t);
  queue_.clear();
  record(now_, RecordKind::PhaseStart, {{"phase", "Aborted"}, {"status", "Aborted"}});
  ended_ = SessionEnd::Aborted;
}

void SessionRunner::process(const ExternalInput& in) {
  std::visit(
      [this](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GazeSample>) process_gaze(v);
        else if constexpr (std::is_same_v<T, AttentionEvent>) process_attention(v);
        else if constexpr (std::is_same_v<T, KeypressInput>) process_keypress(v);
        else process_answer(v);
      },
      in);
}

void SessionRunner::on_attention_event(const AttentionEvent& ev) {
  record(ev.t, RecordKind::AttentionEvent, {{"state", to_string(ev.state)}, {"onset", ev.onset}});
  if (in_trial(ev.t)) feed_engine(ev);
}

void SessionRunner::process_gaze(const GazeSample& s) {
  if (!is_valid(s)) {
    warn(s.t, "malformed gaze sample rejected",
         {{"face_present", s.face_present},
          {"yaw", std::isfinite(s.gaze_yaw) ? nlohmann::json(s.gaze_yaw) : nlohmann::json(nullptr)},
          {"pitch", std::isfinite(s.gaze_pitch) ? nlohmann::json(s.gaze_pitch) : nlohmann::json(nullptr)}});
    return;
  }
  const RawAttention raw = classify_gaze(s, config_.screen);
  if (config_.log_full_gaze || !last_logged_gaze_ || s.t - *last_logged_gaze_ >= kGazeLogPeriodMs) {
    last_logged_gaze_ = s.t;
    record(s.t, RecordKind::GazeSample,
           {{"face_present", s.face_present}, {"yaw", s.gaze_yaw}, {"pitch", s.gaze_pitch}, {"raw", to_string(raw)}});
  }
  if (auto ev = monitor_.step(raw, s.t)) on_attention_event(*ev);
}

void SessionRunner::process_attention(const AttentionEvent& ev) {
  if (ev.state == monitor_.current()) return;
  monitor_.force(ev.state, ev.t);
  on_attention_event({ev.t, ev.state, std::min(ev.onset, ev.t)});
}

void SessionRunner::route_first_keypress(Millis t) {
  if (first_keypress_routed_) return;
  first_keypress_routed_ = true;
  feed_engine(FirstKeypress{t});
}

void SessionRunner::process_keypress(const KeypressInput& k) {
  if (!in_trial(k.t)) {
    warn(k.t, "keypress outside trial ignored");
    return;
  }
  record(k.t, RecordKind::Keypress, nlohmann::json::object());
  route_first_keypress(k.t);
}

void SessionRunner::process_answer(const AnswerInput& a) {
  if (!in_trial(a.t)) {
    warn(a.t, "answer outside trial ignored", {{"text", a.text}});
    return;
  }
  std::string text = a.text;
  if (text == "@correct") text = std::to_string(tasks_.active().answer);
  else if (text == "@wrong") text = std::to_string(tasks_.active().answer + 1);
  try {
    parse_answer(text);
  } catch (const InputRejected& e) {
    warn(a.t, "answer rejected", {{"text", text}, {"error", e.what()}});
    return;
  }
  route_first_keypress(a.t);
  const auto task_id = tasks_.active().id;
  record(a.t, RecordKind::AnswerSubmitted, {{"task_id", task_id}, {"text", text}});
  const AnswerResult result = tasks_.submit(text);
  record(a.t, RecordKind::AnswerResult,
         {{"task_id", task_id},
          {"outcome", to_string(result.outcome)},
          {"sound", to_string(result.sound)},
          {"tier", tasks_.generator().state().current_tier}});
  if (result.correct()) present_task(a.t);
}

void SessionRunner::process_tick(Millis t) {
  if (in_trial(t)) feed_engine(Tick{t});
}

EventLog run_session(const SessionConfig& config, const SessionScript& script, std::vector<ExternalInput> inputs) {
  sort_inputs(inputs);
  SessionRunner runner(config, script);
  for (auto& in : inputs) runner.submit(std::move(in));
  runner.finish();
  return runner.log();
}

EventLog run_session(const SessionConfig& config, std::vector<ExternalInput> inputs) {
  return run_session(config, plan_session(config), std::move(inputs));
}

}  // namespace focusloop
