#include "focusloop/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "focusloop/errors.hpp"

namespace focusloop {

namespace {

struct Interval {
  int trial;
  Millis start;
  Millis end;
};

struct StateChange {
  Millis at;
  bool attentive;
};

bool attentive_at(const std::vector<StateChange>& changes, Millis t) {
  bool state = true;
  for (const auto& c : changes) {
    if (c.at > t) break;
    state = c.attentive;
  }
  return state;
}

}  // namespace

SessionReport build_report(const EventLog& log, bool allow_partial) {
  const auto& recs = log.records();
  if (recs.empty() || recs.front().kind != RecordKind::ConfigSnapshot) {
    throw InvalidLog("log does not start with a ConfigSnapshot");
  }

  SessionReport rep;
  bool floor_at_zero = true;
  try {
    const auto& cfg = recs.front().payload.at("config");
    rep.child_id = cfg.at("child_id").get<std::string>();
    rep.session_id = cfg.at("session_id").get<std::int64_t>();
    floor_at_zero = cfg.at("policy").at("floor_at_zero").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidLog(std::string("ConfigSnapshot incomplete: ") + e.what());
  }

  // Phase intervals: a phase runs for its declared duration or until the next
  // PhaseStart, whichever is first.
  std::vector<Interval> trials;
  struct Open {
    std::string name;
    int trial;
    Millis start;
    Millis duration;
  };
  std::optional<Open> open;
  const Millis log_end = log.last_t();
  auto close = [&](Millis at) {
    if (open && open->name == "Trial") {
      trials.push_back({open->trial, open->start, std::min(open->start + open->duration, at)});
    }
    open.reset();
  };
  for (const auto& r : recs) {
    if (r.kind != RecordKind::PhaseStart) continue;
    const auto name = r.payload.value("phase", std::string{});
    close(r.t);
    rep.phases_covered.push_back(name);
    if (name == "End") rep.complete = true;
    if (name == "Aborted") rep.aborted = true;
    if (name != "End" && name != "Aborted") {
      open = Open{name, r.payload.value("trial", 0), r.t, r.payload.value("duration_ms", Millis{0})};
    }
  }
  close(log_end);

  if (!rep.complete && !rep.aborted && !allow_partial) {
    throw InvalidLog("log has no End marker; pass allow_partial to report on it");
  }

  std::vector<StateChange> changes;
  std::vector<std::pair<Millis, long>> balances;  // (t, balance after update)
  std::set<std::uint64_t> attempted;
  std::set<std::uint64_t> solved;
  long balance = 0;
  for (const auto& r : recs) {
    switch (r.kind) {
      case RecordKind::AttentionEvent: {
        const bool att = r.payload.at("state").get<std::string>() == "Attentive";
        changes.push_back({r.payload.value("onset", r.t), att});
        break;
      }
      case RecordKind::Feedback: {
        auto cls = parse_feedback_class(r.payload.at("class").get<std::string>());
        if (!cls) throw InvalidLog("unknown feedback class at seq " + std::to_string(r.seq));
        ++rep.feedback_counts[*cls];
        break;
      }
      case RecordKind::PointsUpdate: {
        balance += r.payload.at("delta").get<int>();
        if (floor_at_zero && balance < 0) balance = 0;
        balances.emplace_back(r.t, balance);
        break;
      }
      case RecordKind::AnswerResult: {
        const auto id = r.payload.at("task_id").get<std::uint64_t>();
        attempted.insert(id);
        if (r.payload.at("outcome").get<std::string>() == "Correct") solved.insert(id);
        break;
      }
      default:
        break;
    }
  }
  std::stable_sort(changes.begin(), changes.end(),
                   [](const StateChange& a, const StateChange& b) { return a.at < b.at; });
  rep.final_points = balance;
  rep.tasks_attempted = static_cast<int>(attempted.size());
  rep.tasks_correct = static_cast<int>(solved.size());

  Millis attentive_ms = 0;
  for (const auto& iv : trials) {
    if (iv.end <= iv.start) continue;
    rep.trial_ms_covered += iv.end - iv.start;
    // Sweep the piecewise-constant attention signal across the interval.
    bool state = attentive_at(changes, iv.start);
    Millis seg_start = iv.start;
    Millis streak_start = iv.start;
    auto close_segment = [&](Millis seg_end) {
      if (state) {
        attentive_ms += seg_end - seg_start;
        rep.longest_attentive_streak_ms = std::max(rep.longest_attentive_streak_ms, seg_end - streak_start);
      }
    };
    for (const auto& c : changes) {
      if (c.at <= iv.start) continue;
      if (c.at >= iv.end) break;
      if (c.attentive == state) continue;
      close_segment(c.at);
      state = c.attentive;
      seg_start = c.at;
      if (state) streak_start = c.at;
    }
    close_segment(iv.end);

    const Millis span = iv.end - iv.start;
    const int minutes = static_cast<int>((span + 59999) / 60000);
    for (int m = 1; m <= minutes; ++m) {
      const Millis boundary = std::min(iv.start + m * Millis{60000}, iv.end);
      long pts = 0;
      for (const auto& [t, b] : balances) {
        if (t >= boundary) break;
        pts = b;
      }
      rep.timeline.push_back({iv.trial, m, pts, attentive_at(changes, boundary - 1)});
    }
  }
  rep.attention_ratio =
      rep.trial_ms_covered > 0 ? static_cast<double>(attentive_ms) / static_cast<double>(rep.trial_ms_covered) : 0.0;
  return rep;
}

nlohmann::json to_json(const SessionReport& r) {
  nlohmann::json counts = nlohmann::json::object();
  for (auto cls : kAllFeedbackClasses) {
    auto it = r.feedback_counts.find(cls);
    counts[std::string(to_string(cls))] = it == r.feedback_counts.end() ? 0 : it->second;
  }
  nlohmann::json timeline = nlohmann::json::array();
  for (const auto& e : r.timeline) {
    timeline.push_back({{"trial", e.trial},
                        {"minute", e.minute},
                        {"points", e.points},
                        {"attention", e.attentive ? "Attentive" : "Inattentive"}});
  }
  return {{"child_id", r.child_id},
          {"session_id", r.session_id},
          {"final_points", r.final_points},
          {"feedback_counts", counts},
          {"attention_ratio", r.attention_ratio},
          {"longest_attentive_streak_ms", r.longest_attentive_streak_ms},
          {"tasks_attempted", r.tasks_attempted},
          {"tasks_correct", r.tasks_correct},
          {"timeline", timeline},
          {"complete", r.complete},
          {"aborted", r.aborted},
          {"phases_covered", r.phases_covered},
          {"trial_ms_covered", r.trial_ms_covered}};
}

std::string to_text(const SessionReport& r) {
  std::ostringstream os;
  os << "Session report for child " << r.child_id << ", session " << r.session_id;
  if (r.aborted) os << " (aborted, partial)";
  else if (!r.complete) os << " (partial)";
  os << "\n";
  os << "  final points:            " << r.final_points << "\n";
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "  attentive:               " << r.attention_ratio * 100.0 << "% of " << r.trial_ms_covered / 1000
     << " s trial time\n";
  os << "  longest attentive span:  " << r.longest_attentive_streak_ms / 1000.0 << " s\n";
  os << "  tasks solved/attempted:  " << r.tasks_correct << "/" << r.tasks_attempted << "\n";
  os << "  feedback:\n";
  for (auto cls : kAllFeedbackClasses) {
    auto it = r.feedback_counts.find(cls);
    os << "    " << to_string(cls) << ": " << (it == r.feedback_counts.end() ? 0 : it->second) << "\n";
  }
  os << "  timeline (trial/minute: points, attention):\n";
  for (const auto& e : r.timeline) {
    os << "    " << e.trial << "/" << e.minute << ": " << e.points << ", "
       << (e.attentive ? "attentive" : "inattentive") << "\n";
  }
  return os.str();
}

}  // namespace focusloop
