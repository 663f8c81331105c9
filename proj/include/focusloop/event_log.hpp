#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "focusloop/attention.hpp"

namespace focusloop {

// Bumped whenever a record kind or payload field changes meaning.
inline constexpr int kLogSchemaVersion = 1;

enum class RecordKind {
  ConfigSnapshot,
  PhaseStart,
  GazeSample,
  AttentionEvent,
  TaskPresented,
  AnswerSubmitted,
  AnswerResult,
  Feedback,
  Distraction,
  PointsUpdate,
  Warning,
  Keypress,
};

std::string_view to_string(RecordKind k);
std::optional<RecordKind> parse_record_kind(std::string_view s);

struct EventLogRecord {
  std::uint64_t seq = 0;
  Millis t = 0;
  RecordKind kind = RecordKind::Warning;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const EventLogRecord& a, const EventLogRecord& b) {
    return a.seq == b.seq && a.t == b.t && a.kind == b.kind && a.payload == b.payload;
  }
};

// One JSON object per line, keys sorted, no trailing newline.
std::string serialize(const EventLogRecord& r);
// Throws CorruptLog on malformed JSON, missing fields, an unknown kind or a
// schema version newer than this build understands.
EventLogRecord parse_record(std::string_view line);

// In-memory append-only log. seq must be dense from 0, t non-decreasing and
// the first record a ConfigSnapshot.
class EventLog {
 public:
  // Throws CorruptLog and leaves the log unchanged if the record would break
  // an ordering invariant.
  void append(EventLogRecord r);

  // Assigns the next seq and appends.
  const EventLogRecord& emit(Millis t, RecordKind kind, nlohmann::json payload);

  const std::vector<EventLogRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  std::uint64_t next_seq() const { return records_.size(); }
  Millis last_t() const { return records_.empty() ? 0 : records_.back().t; }

 private:
  std::vector<EventLogRecord> records_;
};

// Value-returning form of EventLog::append.
EventLog append(EventLog log, EventLogRecord record);

std::string serialize(const EventLog& log);  // newline-terminated lines
EventLog parse_log(std::istream& in);
EventLog read_log(const std::filesystem::path& path);
void write_log(const EventLog& log, const std::filesystem::path& path);

// Durable single-writer log file. Every append is validated against the
// previous record and flushed before returning.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path);

  void append(const EventLogRecord& r);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  EventLog shadow_;
};

// <data_dir>/<child_id>/<session_id>-<seed>.log
std::filesystem::path log_path(const std::filesystem::path& data_dir, std::string_view child_id,
                               std::int64_t session_id, std::uint64_t seed);

}  // namespace focusloop
