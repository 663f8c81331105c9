#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "focusloop/event_log.hpp"
#include "focusloop/phrases.hpp"

namespace focusloop {

struct TimelineEntry {
  int trial = 0;
  int minute = 0;      // 1-based minute within the trial
  long points = 0;     // balance at the end of the minute
  bool attentive = true;  // attention state at the end of the minute
};

struct SessionReport {
  std::string child_id;
  std::int64_t session_id = 0;
  long final_points = 0;
  std::map<FeedbackClass, int> feedback_counts;
  double attention_ratio = 1.0;
  Millis longest_attentive_streak_ms = 0;
  int tasks_attempted = 0;
  int tasks_correct = 0;
  std::vector<TimelineEntry> timeline;

  bool complete = false;
  bool aborted = false;
  std::vector<std::string> phases_covered;
  Millis trial_ms_covered = 0;
};

// Aggregates are computed over trial phases only. Attention time is rebuilt
// from AttentionEvent onsets. Throws InvalidLog when the ConfigSnapshot is
// missing, or when the log has not ended and allow_partial is false. Aborted
// logs are partial by definition and always accepted.
SessionReport build_report(const EventLog& log, bool allow_partial = false);

nlohmann::json to_json(const SessionReport& r);
std::string to_text(const SessionReport& r);

}  // namespace focusloop
