#include "focusloop/service.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "focusloop/errors.hpp"

namespace focusloop {

namespace {

using nlohmann::json;

std::string new_token(std::uint64_t counter) {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::ostringstream os;
  os << "s" << counter << "-" << std::hex << (gen() & 0xffffffffffffULL);
  return os.str();
}

const json& body_of(const json& msg) {
  static const json kEmpty = json::object();
  auto it = msg.find("body");
  if (it == msg.end() || it->is_null()) return kEmpty;
  if (!it->is_object()) throw InputRejected("message body must be an object");
  return *it;
}

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Created: return "Created";
    case SessionState::Running: return "Running";
    case SessionState::Finished: return "Finished";
    case SessionState::Aborted: return "Aborted";
  }
  return "?";
}

std::optional<json> to_wire(const EventLogRecord& r, const std::string& session) {
  std::string type;
  json body = r.payload;
  switch (r.kind) {
    case RecordKind::ConfigSnapshot:
      type = "agent_expression";
      body = {{"expression", to_string(Expression::SlightlyHappy)}};
      break;
    case RecordKind::PhaseStart: {
      const auto phase = r.payload.value("phase", std::string{});
      type = (phase == "End" || phase == "Aborted") ? "session_end" : "phase";
      break;
    }
    case RecordKind::TaskPresented:
      type = "task";
      body.erase("answer");
      break;
    case RecordKind::AnswerResult: type = "answer_result"; break;
    case RecordKind::Feedback: type = "feedback"; break;
    case RecordKind::PointsUpdate: type = "points"; break;
    case RecordKind::Distraction: type = "distraction"; break;
    case RecordKind::AttentionEvent: type = "attention"; break;
    case RecordKind::Warning: type = "warning"; break;
    case RecordKind::GazeSample:
    case RecordKind::Keypress:
    case RecordKind::AnswerSubmitted:
      return std::nullopt;
  }
  return json{{"type", type}, {"session", session}, {"seq", r.seq}, {"t", r.t}, {"body", std::move(body)}};
}

ClientCommand parse_client_message(const json& msg, Millis t) {
  if (!msg.is_object()) throw InputRejected("client message must be a JSON object");
  auto type_it = msg.find("type");
  if (type_it == msg.end() || !type_it->is_string()) throw InputRejected("client message needs a string 'type'");
  const auto type = type_it->get<std::string>();
  const json& body = body_of(msg);
  try {
    if (type == "start") return StartCommand{};
    if (type == "abort") return AbortCommand{};
    if (type == "keypress") return ExternalInput{KeypressInput{t}};
    if (type == "answer") {
      const auto& text = body.at("text");
      if (text.is_number_integer()) return ExternalInput{AnswerInput{t, std::to_string(text.get<std::int64_t>())}};
      return ExternalInput{AnswerInput{t, text.get<std::string>()}};
    }
    if (type == "attention_toggle") {
      const auto state = body.at("attentive").get<bool>() ? AttentionState::Attentive : AttentionState::Inattentive;
      return ExternalInput{AttentionEvent{t, state, t}};
    }
    if (type == "attention_sample") {
      GazeSample s{t, body.value("face_present", true), body.value("yaw", 0.0), body.value("pitch", 0.0)};
      return ExternalInput{s};
    }
  } catch (const json::exception& e) {
    throw InputRejected("malformed '" + type + "' message: " + e.what());
  }
  throw InputRejected("unknown client message type '" + type + "'");
}

struct SessionManager::Managed {
  std::mutex mu;
  std::string handle;
  SessionState state = SessionState::Created;
  std::unique_ptr<LogWriter> writer;
  std::unique_ptr<SessionRunner> runner;
  std::optional<SteadyClock::time_point> started;
  std::vector<json> messages;
  std::map<std::uint64_t, Listener> listeners;
  std::uint64_t next_listener = 1;
  bool ever_connected = false;
  std::optional<SteadyClock::time_point> disconnected_since;
  std::optional<SessionReport> final_report;
  std::filesystem::path log_file;

  void on_record(const EventLogRecord& r) {
    if (writer) writer->append(r);
    if (auto w = to_wire(r, handle)) {
      messages.push_back(*w);
      for (auto& [_, l] : listeners) l(messages.back());
    }
  }
};

SessionManager::SessionManager(ServiceOptions options) : options_(std::move(options)) {
  if (!(options_.time_scale > 0.0) || !std::isfinite(options_.time_scale))
    throw ConfigError("time scale must be a positive number");
}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Managed> SessionManager::find(const std::string& handle) const {
  std::lock_guard lk(mu_);
  auto it = sessions_.find(handle);
  if (it == sessions_.end()) throw NotFound("no session " + handle);
  return it->second;
}

std::string SessionManager::create(const json& config_json) {
  SessionConfig config = config_from_json(config_json);
  auto m = std::make_shared<Managed>();
  {
    std::lock_guard lk(mu_);
    m->handle = new_token(next_handle_++);
  }
  if (options_.persist) {
    m->log_file = log_path(options_.data_dir, config.child_id, config.session_id, config.seed);
    // Concurrent sessions may share child, session id and seed; keep their
    // files apart.
    if (std::filesystem::exists(m->log_file)) {
      m->log_file.replace_extension();
      m->log_file += "-" + m->handle + ".log";
    }
    m->writer = std::make_unique<LogWriter>(m->log_file);
  }
  Managed* raw = m.get();
  {
    std::lock_guard lk(m->mu);
    m->runner = std::make_unique<SessionRunner>(config, [raw](const EventLogRecord& r) { raw->on_record(r); });
  }
  std::lock_guard lk(mu_);
  sessions_[m->handle] = m;
  return m->handle;
}

Millis SessionManager::logical_time(const std::string& handle, SteadyClock::time_point now) const {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  if (!m->started) return 0;
  const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(now - *m->started).count();
  return static_cast<Millis>(std::floor(static_cast<double>(wall) / 1000.0 * options_.time_scale));
}

void SessionManager::start(const std::string& handle, SteadyClock::time_point now) {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  if (m->state != SessionState::Created)
    throw StateError("cannot start a session in state " + std::string(to_string(m->state)));
  m->state = SessionState::Running;
  m->started = now;
}

void SessionManager::advance(Managed& m, SteadyClock::time_point now) {
  if (m.state != SessionState::Running) return;
  const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(now - *m.started).count();
  const auto logical = static_cast<Millis>(std::floor(static_cast<double>(wall) / 1000.0 * options_.time_scale));
  if (logical >= m.runner->end()) {
    m.runner->finish();
    m.state = SessionState::Finished;
    finalize(m);
    return;
  }
  // Stop one millisecond short so inputs stamped at the current logical time
  // still sort ahead of the tick at that time, exactly as in a replay.
  m.runner->advance_to(logical - 1);
}

void SessionManager::finalize(Managed& m) {
  m.final_report = build_report(m.runner->log(), true);
  if (options_.persist && m.runner->config().report_enabled) {
    auto json_path = m.log_file;
    json_path.replace_extension(".report.json");
    auto text_path = m.log_file;
    text_path.replace_extension(".report.txt");
    std::ofstream(json_path) << to_json(*m.final_report).dump(2) << "\n";
    std::ofstream(text_path) << to_text(*m.final_report);
  }
}

void SessionManager::input(const std::string& handle, const json& msg, SteadyClock::time_point now) {
  auto m = find(handle);
  const auto cmd = parse_client_message(msg, 0);
  if (std::holds_alternative<StartCommand>(cmd)) {
    start(handle, now);
    return;
  }
  if (std::holds_alternative<AbortCommand>(cmd)) {
    abort(handle, now);
    return;
  }
  std::lock_guard lk(m->mu);
  if (m->state != SessionState::Running)
    throw StateError("session is " + std::string(to_string(m->state)) + ", inputs need a running session");
  advance(*m, now);
  if (m->state != SessionState::Running) throw StateError("session already finished");
  ExternalInput in = std::get<ExternalInput>(cmd);
  const Millis t = m->runner->now() + 1;
  std::visit([t](auto& v) { v.t = t; }, in);
  if (auto* ev = std::get_if<AttentionEvent>(&in)) ev->onset = t;
  m->runner->submit(std::move(in));
}

SessionReport SessionManager::abort(const std::string& handle, SteadyClock::time_point now) {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  if (m->state == SessionState::Created) {
    m->runner->abort(0);
  } else if (m->state == SessionState::Running) {
    advance(*m, now);
    if (m->state == SessionState::Finished) return *m->final_report;
    const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(now - *m->started).count();
    m->runner->abort(static_cast<Millis>(std::floor(static_cast<double>(wall) / 1000.0 * options_.time_scale)));
  } else {
    throw StateError("cannot abort a session in state " + std::string(to_string(m->state)));
  }
  m->state = SessionState::Aborted;
  finalize(*m);
  return *m->final_report;
}

void SessionManager::pump(SteadyClock::time_point now) {
  std::vector<std::shared_ptr<Managed>> all;
  {
    std::lock_guard lk(mu_);
    for (auto& [_, m] : sessions_) all.push_back(m);
  }
  for (auto& m : all) {
    bool expired = false;
    {
      std::lock_guard lk(m->mu);
      if (m->state != SessionState::Running) continue;
      advance(*m, now);
      expired = m->state == SessionState::Running && m->disconnected_since &&
                now - *m->disconnected_since >= options_.disconnect_grace;
    }
    if (expired) {
      try {
        abort(m->handle, now);
      } catch (const StateError&) {
      }
    }
  }
}

SessionState SessionManager::state(const std::string& handle) const {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  return m->state;
}

SessionReport SessionManager::report(const std::string& handle) const {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  if (!m->final_report)
    throw StateError("report not ready: session is " + std::string(to_string(m->state)));
  return *m->final_report;
}

json SessionManager::status(const std::string& handle) const {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  const auto* phase = m->runner->current_phase();
  return {{"session", handle},
          {"state", to_string(m->state)},
          {"child_id", m->runner->config().child_id},
          {"t", m->runner->now()},
          {"end", m->runner->end()},
          {"phase", phase ? json(to_string(phase->kind)) : json(nullptr)},
          {"points", m->runner->engine().ledger().balance()},
          {"records", m->runner->log().size()},
          {"connected", m->listeners.size()}};
}

std::size_t SessionManager::size() const {
  std::lock_guard lk(mu_);
  return sessions_.size();
}

bool SessionManager::exists(const std::string& handle) const {
  std::lock_guard lk(mu_);
  return sessions_.count(handle) > 0;
}

std::uint64_t SessionManager::subscribe(const std::string& handle, std::uint64_t from_seq, Listener listener,
                                        SteadyClock::time_point) {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  for (const auto& msg : m->messages)
    if (msg.at("seq").get<std::uint64_t>() >= from_seq) listener(msg);
  const auto id = m->next_listener++;
  m->listeners.emplace(id, std::move(listener));
  m->ever_connected = true;
  m->disconnected_since.reset();
  return id;
}

void SessionManager::unsubscribe(const std::string& handle, std::uint64_t id, SteadyClock::time_point now) {
  auto m = find(handle);
  std::lock_guard lk(m->mu);
  m->listeners.erase(id);
  if (m->listeners.empty() && m->ever_connected) m->disconnected_since = now;
}

}  // namespace focusloop
