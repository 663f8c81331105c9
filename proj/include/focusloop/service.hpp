#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "focusloop/report.hpp"
#include "focusloop/session.hpp"

namespace focusloop {

enum class SessionState { Created, Running, Finished, Aborted };

std::string_view to_string(SessionState s);

// Server-to-client message for one log record, or nullopt for records that
// stay server-side (raw gaze, keypresses, submitted answer texts). Shape:
// {"type", "session", "seq", "t", "body"}.
std::optional<nlohmann::json> to_wire(const EventLogRecord& r, const std::string& session);

struct StartCommand {};
struct AbortCommand {};

using ClientCommand = std::variant<ExternalInput, StartCommand, AbortCommand>;

// Parses a client message {"type", "body"} stamped at logical time t. Throws
// InputRejected for unknown types or malformed bodies.
ClientCommand parse_client_message(const nlohmann::json& msg, Millis t);

using SteadyClock = std::chrono::steady_clock;

struct ServiceOptions {
  std::filesystem::path data_dir = "data";
  double time_scale = 1.0;  // logical ms per wall ms
  std::chrono::milliseconds disconnect_grace{10000};
  bool persist = true;  // write logs and reports under data_dir
};

// Owns every session created through the service. All methods are safe to
// call from several threads; each session's inputs are serialized by its own
// lock, and sessions share no mutable state.
class SessionManager {
 public:
  using Listener = std::function<void(const nlohmann::json&)>;

  explicit SessionManager(ServiceOptions options = {});
  ~SessionManager();

  // Throws ValidationError for a bad config.
  std::string create(const nlohmann::json& config);

  // Created -> Running. Throws StateError from any other state.
  void start(const std::string& handle, SteadyClock::time_point now);
  // Applies a client command at the session's current logical time. Inputs
  // to a session that is not Running throw StateError.
  void input(const std::string& handle, const nlohmann::json& msg, SteadyClock::time_point now);
  // Running -> Aborted, or Created -> Aborted. Returns the partial report.
  SessionReport abort(const std::string& handle, SteadyClock::time_point now);

  // Advances every running session to its wall-mapped logical time, finishes
  // sessions that reached their end, and aborts sessions whose stream has
  // been disconnected for longer than the grace period.
  void pump(SteadyClock::time_point now);

  SessionState state(const std::string& handle) const;
  // Throws StateError while Created or Running.
  SessionReport report(const std::string& handle) const;
  nlohmann::json status(const std::string& handle) const;
  std::size_t size() const;
  bool exists(const std::string& handle) const;

  // Delivers buffered messages with seq >= from_seq, then live ones. Returns
  // a subscription id for unsubscribe.
  std::uint64_t subscribe(const std::string& handle, std::uint64_t from_seq, Listener listener,
                          SteadyClock::time_point now);
  void unsubscribe(const std::string& handle, std::uint64_t id, SteadyClock::time_point now);

  // Logical time of a running session at the given wall time.
  Millis logical_time(const std::string& handle, SteadyClock::time_point now) const;

  const ServiceOptions& options() const { return options_; }

 private:
  struct Managed;

  std::shared_ptr<Managed> find(const std::string& handle) const;
  void advance(Managed& m, SteadyClock::time_point now);
  void finalize(Managed& m);

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Managed>> sessions_;
  std::uint64_t next_handle_ = 1;
};

}  // namespace focusloop
