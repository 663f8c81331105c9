#include "focusloop/event_log.hpp"

#include <array>
#include <istream>
#include <sstream>

#include "focusloop/errors.hpp"

namespace focusloop {

namespace {

constexpr std::array<std::pair<RecordKind, std::string_view>, 12> kKindNames{{
    {RecordKind::ConfigSnapshot, "ConfigSnapshot"},
    {RecordKind::PhaseStart, "PhaseStart"},
    {RecordKind::GazeSample, "GazeSample"},
    {RecordKind::AttentionEvent, "AttentionEvent"},
    {RecordKind::TaskPresented, "TaskPresented"},
    {RecordKind::AnswerSubmitted, "AnswerSubmitted"},
    {RecordKind::AnswerResult, "AnswerResult"},
    {RecordKind::Feedback, "Feedback"},
    {RecordKind::Distraction, "Distraction"},
    {RecordKind::PointsUpdate, "PointsUpdate"},
    {RecordKind::Warning, "Warning"},
    {RecordKind::Keypress, "Keypress"},
}};

}  // namespace

std::string_view to_string(RecordKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<RecordKind> parse_record_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string serialize(const EventLogRecord& r) {
  nlohmann::json j = {{"v", kLogSchemaVersion},
                      {"seq", r.seq},
                      {"t", r.t},
                      {"kind", to_string(r.kind)},
                      {"payload", r.payload}};
  return j.dump();
}

EventLogRecord parse_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptLog(std::string("unparseable log line: ") + e.what());
  }
  try {
    const int v = j.at("v").get<int>();
    if (v < 1 || v > kLogSchemaVersion) throw CorruptLog("unsupported log schema version " + std::to_string(v));
    EventLogRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.t = j.at("t").get<Millis>();
    const auto kind_name = j.at("kind").get<std::string>();
    auto kind = parse_record_kind(kind_name);
    if (!kind) throw CorruptLog("unknown record kind '" + kind_name + "'");
    r.kind = *kind;
    r.payload = j.at("payload");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptLog(std::string("malformed log record: ") + e.what());
  }
}

void EventLog::append(EventLogRecord r) {
  if (r.seq != records_.size()) {
    throw CorruptLog("seq " + std::to_string(r.seq) + " does not follow " +
                     (records_.empty() ? std::string("an empty log") : std::to_string(records_.back().seq)));
  }
  if (!records_.empty() && r.t < records_.back().t) {
    throw CorruptLog("record seq " + std::to_string(r.seq) + " goes back in time (" + std::to_string(r.t) +
                     " < " + std::to_string(records_.back().t) + ")");
  }
  if (records_.empty() && r.kind != RecordKind::ConfigSnapshot) {
    throw CorruptLog("first record must be a ConfigSnapshot");
  }
  records_.push_back(std::move(r));
}

const EventLogRecord& EventLog::emit(Millis t, RecordKind kind, nlohmann::json payload) {
  append({next_seq(), t, kind, std::move(payload)});
  return records_.back();
}

EventLog append(EventLog log, EventLogRecord record) {
  log.append(std::move(record));
  return log;
}

std::string serialize(const EventLog& log) {
  std::string out;
  for (const auto& r : log.records()) {
    out += serialize(r);
    out += '\n';
  }
  return out;
}

EventLog parse_log(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      log.append(parse_record(line));
    } catch (const CorruptLog& e) {
      throw CorruptLog("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

EventLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorruptLog("cannot open log " + path.string());
  return parse_log(in);
}

void write_log(const EventLog& log, const std::filesystem::path& path) {
  LogWriter w(path);
  for (const auto& r : log.records()) w.append(r);
}

LogWriter::LogWriter(const std::filesystem::path& path) : path_(path) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out_) throw std::runtime_error("cannot open log file " + path_.string() + " for writing");
}

void LogWriter::append(const EventLogRecord& r) {
  shadow_.append(r);
  out_ << serialize(r) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write to " + path_.string() + " failed");
}

std::filesystem::path log_path(const std::filesystem::path& data_dir, std::string_view child_id,
                               std::int64_t session_id, std::uint64_t seed) {
  return data_dir / std::string(child_id) / (std::to_string(session_id) + "-" + std::to_string(seed) + ".log");
}

}  // namespace focusloop
