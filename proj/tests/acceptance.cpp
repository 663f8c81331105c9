// Acceptance checks. One line per criterion; exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "focusloop/attention.hpp"
#include "focusloop/commands.hpp"
#include "focusloop/errors.hpp"
#include "focusloop/replay.hpp"
#include "focusloop/report.hpp"
#include "focusloop/session.hpp"
#include "focusloop/stats.hpp"
#include "focusloop/trace.hpp"

using namespace focusloop;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s && c.ok) {
    c.ok = false;
    c.detail = "over time budget";
  }
  if (!c.ok) ++failures;
  std::printf("[%s] %-28s %7.3f s (budget %s)  %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), secs,
              budget_s > 0 ? (std::to_string(static_cast<int>(budget_s)) + " s").c_str() : "none", c.detail.c_str());
  std::fflush(stdout);
}

SessionConfig make_config(std::uint64_t seed, int degree) {
  SessionConfig c;
  c.child_name = "Mia";
  c.child_id = "acc";
  c.age = 6 + static_cast<int>(seed % 12);
  c.degree_of_distraction = degree;
  c.seed = seed;
  return c;
}

// Pre-debounced two-state Markov attention with exponential-ish dwell times.
std::vector<ExternalInput> markov_attention(const SessionScript& script, RandomStream& rng) {
  std::vector<ExternalInput> in;
  bool attentive = true;
  Millis t = rng.uniform_int(1000, 40000);
  while (t < script.end()) {
    attentive = !attentive;
    in.emplace_back(AttentionEvent{t, attentive ? AttentionState::Attentive : AttentionState::Inattentive,
                                   std::max<Millis>(0, t - 1000)});
    const Millis dwell = attentive ? rng.uniform_int(500, 90000) : rng.uniform_int(200, 100000);
    t += dwell;
  }
  const auto trials = script.trials();
  in.emplace_back(KeypressInput{trials[0]->start + rng.uniform_int(0, 20000)});
  for (int i = 0; i < 10; ++i) {
    const Phase* p = trials[static_cast<std::size_t>(rng.uniform_int(0, 1))];
    in.emplace_back(AnswerInput{p->start + rng.uniform_int(0, p->duration - 1), rng.bernoulli(0.6) ? "@correct" : "@wrong"});
  }
  return in;
}

bool is_criticism(const std::string& cls) { return cls == "Criticize" || cls == "CriticizeAgain"; }

// Checks the feedback rules against the log alone.
void check_rules(const EventLog& log, const SessionScript& script, const PolicyParams& policy, Check& c,
                 const std::string& tag) {
  struct Change {
    Millis t;
    bool attentive;
  };
  std::vector<Change> changes;
  int start_praises = 0;
  std::vector<std::pair<Millis, std::string>> feedback;
  long balance = 0;
  std::vector<const EventLogRecord*> fb_records, pts_records;
  for (const auto& r : log.records()) {
    if (r.kind == RecordKind::AttentionEvent) changes.push_back({r.t, r.payload["state"] == "Attentive"});
    if (r.kind == RecordKind::Feedback) {
      feedback.emplace_back(r.t, r.payload["class"].get<std::string>());
      if (r.payload["class"] == "PraiseImmediateStart") ++start_praises;
      fb_records.push_back(&r);
    }
    if (r.kind == RecordKind::PointsUpdate) {
      pts_records.push_back(&r);
      balance += r.payload["delta"].get<long>();
      if (policy.floor_at_zero && balance < 0) balance = 0;
      c.require(r.payload["balance"].get<long>() == balance, tag + ": balance does not reconcile at seq " +
                                                                  std::to_string(r.seq));
    }
  }
  c.require(start_praises <= 1, tag + ": more than one PraiseImmediateStart");
  c.require(fb_records.size() == pts_records.size(), tag + ": feedback/points records do not pair");
  for (std::size_t i = 0; i < std::min(fb_records.size(), pts_records.size()); ++i) {
    const auto& f = fb_records[i]->payload;
    const auto& p = pts_records[i]->payload;
    const int expected = is_criticism(f["class"].get<std::string>()) ? -1 : 1;
    c.require(f["class"] == p["class"] && f["delta"] == p["delta"] && f["delta"] == expected,
              tag + ": feedback delta mismatch");
  }
  c.require(build_report(log).final_points == balance, tag + ": report final points differ from ledger");

  auto state_before = [&](Millis t) {
    bool s = true;
    for (const auto& ch : changes) {
      if (ch.t >= t) break;
      s = ch.attentive;
    }
    return s;
  };

  for (const Phase* trial : script.trials()) {
    // Episodes: maximal inattentive intervals clipped to the trial.
    struct Episode {
      Millis begin, end;
      bool closed_by_attention;
    };
    std::vector<Episode> episodes;
    bool att = state_before(trial->start + 1);
    for (const auto& ch : changes)
      if (ch.t == trial->start) att = ch.attentive;
    std::optional<Millis> open = att ? std::nullopt : std::optional<Millis>(trial->start);
    for (const auto& ch : changes) {
      if (ch.t <= trial->start || ch.t >= trial->end()) continue;
      if (!ch.attentive && !open) open = ch.t;
      if (ch.attentive && open) {
        episodes.push_back({*open, ch.t, true});
        open.reset();
      }
    }
    if (open) episodes.push_back({*open, trial->end(), false});

    for (const auto& [t, cls] : feedback) {
      if (t < trial->start || t >= trial->end()) continue;
      if (!is_criticism(cls)) continue;
      bool inside = false;
      for (const auto& e : episodes) inside |= t >= e.begin && t < e.end;
      c.require(inside, tag + ": criticism outside an inattention episode at t=" + std::to_string(t));
    }
    for (const auto& e : episodes) {
      std::vector<std::pair<Millis, std::string>> crit;
      for (const auto& f : feedback)
        if (f.first >= e.begin && f.first < e.end && is_criticism(f.second)) crit.push_back(f);
      for (std::size_t i = 0; i < crit.size(); ++i) {
        c.require((i == 0) == (crit[i].second == "Criticize"), tag + ": criticism order within episode");
        if (i > 0)
          c.require(crit[i].first - crit[i - 1].first >= 30000,
                    tag + ": criticisms closer than 30000 ms at t=" + std::to_string(crit[i].first));
      }
      int praises_at_end = 0;
      for (const auto& f : feedback)
        if (f.first == e.end && f.second == "PraiseAfterReattention") ++praises_at_end;
      if (e.closed_by_attention)
        c.require(praises_at_end == (crit.empty() ? 0 : 1),
                  tag + ": reattention pairing broken at t=" + std::to_string(e.end));
    }
    for (const auto& [t, cls] : feedback) {
      if (cls != "PraiseAfterReattention" || t < trial->start || t >= trial->end()) continue;
      bool paired = false;
      for (const auto& e : episodes) paired |= e.closed_by_attention && e.end == t;
      c.require(paired, tag + ": reattention praise without a closed episode at t=" + std::to_string(t));
    }
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Covariance-matrix form of alpha, used as an independent oracle.
double alpha_brute(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size(), k = rows[0].size();
  std::vector<double> mean(k, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < k; ++j) mean[j] += r[j];
  for (auto& m : mean) m /= static_cast<double>(n);
  double tr = 0.0, all = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (const auto& r : rows) s += (r[a] - mean[a]) * (r[b] - mean[b]);
      s /= static_cast<double>(n - 1);
      all += s;
      if (a == b) tr += s;
    }
  const double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - tr / all);
}

}  // namespace

int main() {
  std::printf("focusloop acceptance\n");

  criterion("feedback rules x1000", 30.0, [] {
    Check c;
    for (std::uint64_t i = 0; i < 1000 && c.ok; ++i) {
      auto cfg = make_config(1000 + i, static_cast<int>(i % 4));
      cfg.policy.floor_at_zero = i % 3 != 0;
      const auto script = plan_session(cfg);
      RandomStream rng(i, "acceptance-trace");
      std::vector<ExternalInput> in;
      if (i % 2 == 0) {
        in = markov_attention(script, rng);
      } else {
        MarkovTraceParams p;
        p.sample_period_ms = 200;
        p.p_leave_on = 0.002 + rng.uniform01() * 0.02;
        p.p_leave_off = 0.002 + rng.uniform01() * 0.02;
        in = markov_trace(script, p, rng);
      }
      const auto log = run_session(cfg, script, in);
      check_rules(log, script, fade_params(cfg.policy, cfg.session_id), c, "trace " + std::to_string(i));
    }
    if (c.ok) c.detail = "1000 traces: spacing >= 30000 ms, reattention paired, <= 1 start praise, ledger reconciled";
    return c;
  });

  criterion("determinism x20", 10.0, [] {
    Check c;
    const fs::path dir = fs::temp_directory_path() / "focusloop_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream sink;
    for (std::uint64_t i = 0; i < 20 && c.ok; ++i) {
      auto cfg = make_config(7000 + i * 13, static_cast<int>(i % 4));
      cfg.child_id = "det" + std::to_string(i);
      const auto cfg_path = dir / ("config" + std::to_string(i) + ".json");
      std::ofstream(cfg_path) << to_json(cfg).dump(2);
      const auto trace_path = dir / ("trace" + std::to_string(i) + ".csv");
      c.require(cmd_synth_trace(cfg_path, trace_path, 500 + i, std::nullopt, sink) == kExitOk, "trace generation");
      const auto a = cmd_simulate({cfg_path, trace_path, dir / "run1", std::nullopt}, {true}, sink, sink);
      const auto b = cmd_simulate({cfg_path, trace_path, dir / "run2", std::nullopt}, {true}, sink, sink);
      c.require(a.exit_code == kExitOk && b.exit_code == kExitOk, "simulate failed for triple " + std::to_string(i));
      c.require(slurp(a.log_path) == slurp(b.log_path), "logs differ for triple " + std::to_string(i));
      c.require(cmd_replay(a.log_path, {true}, sink, sink) == kExitOk, "replay failed for triple " + std::to_string(i));
    }
    fs::remove_all(dir);
    if (c.ok) c.detail = "20 triples byte-identical, replay exit 0 on all";
    return c;
  });

  criterion("desk-scale session oracle", 0, [] {
    Check c;
    auto cfg = make_config(42, 2);
    cfg.age = 8;
    const auto script = plan_session(cfg);
    const Phase& t1 = *script.trials()[0];
    const Phase& t2 = *script.trials()[1];
    std::vector<ExternalInput> in;
    for (Millis t = 0; t < script.end(); t += 250) in.emplace_back(GazeSample{t, true, 0.0, 0.0});
    in.emplace_back(KeypressInput{t1.start + 3000});
    const auto log = run_session(cfg, script, in);
    int start = 0, periodic = 0, distractions = 0;
    long balance_t1 = 0;
    for (const auto& r : log.records()) {
      if (r.kind == RecordKind::Feedback && r.t >= t1.start && r.t < t1.end()) {
        if (r.payload["class"] == "PraiseImmediateStart") ++start;
        if (r.payload["class"] == "Praise" || r.payload["class"] == "ShortPraise") ++periodic;
      }
      if (r.kind == RecordKind::PointsUpdate && r.t < t1.end()) balance_t1 = r.payload["balance"];
      if (r.kind == RecordKind::Distraction && r.t >= t2.start && r.t < t2.end()) ++distractions;
    }
    c.require(start == 1, "PraiseImmediateStart count " + std::to_string(start));
    c.require(periodic == 6, "periodic praise count " + std::to_string(periodic));
    c.require(balance_t1 == 7, "points after the 300 s trial " + std::to_string(balance_t1));
    c.require(distractions == 2, "degree-2 distractions " + std::to_string(distractions));
    if (c.ok)
      c.detail = "start praise 1, periodic 6, points 7 after the trial, 2 distractions in trial 2 (session total " +
                 std::to_string(build_report(log).final_points) + ")";
    return c;
  });

  criterion("statistics oracles", 5.0, [] {
    Check c;
    c.require(stats::sus_score(std::vector<int>(10, 3)) == 50.0, "SUS all-3 != 50");
    c.require(stats::sus_score(std::vector<int>{5, 1, 5, 1, 5, 1, 5, 1, 5, 1}) == 100.0, "SUS best != 100");
    c.require(stats::sus_band(78.89) == stats::SusBand::Good, "band(78.89) != Good");
    c.require(stats::sus_band(100.0) == stats::SusBand::BestImaginable, "band(100) != BestImaginable");
    const auto r = stats::chi_square({{{10, 20}, {20, 10}}, {}, {}});
    c.require(std::fabs(r.chi2 - 20.0 / 3.0) <= 1e-6, "chi2 != 6.6667 +- 1e-6");
    c.require(std::fabs(r.cramers_v - 1.0 / 3.0) <= 1e-6, "V != 0.3333 +- 1e-6");
    c.require(stats::chi_square_sf(34.43, 4) < 0.001, "p(34.43, 4) >= .001");
    c.require(std::fabs(stats::chi_square_sf(18.467, 4) - 0.001) <= 1e-4, "p(18.467, 4) != 0.001 +- 1e-4");
    std::vector<std::vector<std::vector<double>>> matrices = {
        {{1, 2}, {2, 3}, {3, 5}, {4, 4}},
        {{1, 2, 3}, {2, 2, 4}, {3, 4, 4}, {5, 5, 4}, {4, 3, 5}},
        {{7, 6, 7, 5}, {1, 2, 1, 3}, {4, 4, 5, 4}, {6, 7, 6, 6}, {2, 1, 3, 2}, {5, 5, 4, 6}},
    };
    RandomStream rng(8, "alpha-matrices");
    for (int m = 0; m < 200; ++m) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(3, 40));
      const auto k = static_cast<std::size_t>(rng.uniform_int(2, 10));
      std::vector<std::vector<double>> rows(n, std::vector<double>(k));
      const double base = static_cast<double>(rng.uniform_int(1, 7));
      for (auto& row : rows)
        for (auto& v : row) v = std::clamp(base + static_cast<double>(rng.uniform_int(-2, 2)), 1.0, 7.0);
      matrices.push_back(rows);
    }
    int compared = 0;
    for (const auto& rows : matrices) {
      stats::LikertScale s{"m", 1, 7, rows, {}};
      double a = 0;
      try {
        a = stats::cronbach_alpha(s);
      } catch (const UndefinedStatistic&) {
        continue;
      }
      ++compared;
      c.require(std::fabs(a - alpha_brute(rows)) <= 1e-12, "alpha differs from brute force by > 1e-12");
    }
    c.require(std::fabs(stats::cronbach_alpha({"ex", 1, 5, matrices[0], {}}) - 8.0 / 9.0) <= 1e-12, "alpha example");
    if (c.ok)
      c.detail = "SUS 50/100, bands Good/Best, chi2 6.666667, V 0.333333, p(34.43)<.001, p(18.467)=0.001, alpha " +
                 std::to_string(compared) + " matrices within 1e-12";
    return c;
  });

  criterion("debounce suite", 0, [] {
    Check c;
    AttentionMonitor flicker;
    int events = 0;
    for (Millis t = 0; t < 60000; t += 100)
      if (flicker.step((t / 100) % 2 ? RawAttention::OffTask : RawAttention::OnTask, t)) ++events;
    c.require(events == 0, "flicker produced " + std::to_string(events) + " events");

    AttentionMonitor sustained;
    std::vector<AttentionEvent> evs;
    for (Millis t = 0; t < 60000; t += 100)
      if (auto e = sustained.step(t < 5000 ? RawAttention::OnTask : RawAttention::OffTask, t)) evs.push_back(*e);
    c.require(evs.size() == 1, "sustained off-task produced " + std::to_string(evs.size()) + " events");
    if (!evs.empty()) {
      c.require(evs[0].state == AttentionState::Inattentive, "event is not Inattentive");
      c.require(evs[0].t - evs[0].onset >= MonitorParams{}.hysteresis_ms, "dwell below hysteresis");
    }

    // Same traces through a whole session, as gaze.
    auto cfg = make_config(3, 0);
    const Millis t0 = plan_session(cfg).trials()[0]->start;
    std::vector<ExternalInput> fl, su;
    for (Millis t = t0; t < t0 + 60000; t += 100) {
      fl.emplace_back(GazeSample{t, true, (t / 100) % 2 ? 60.0 : 0.0, 0.0});
      su.emplace_back(GazeSample{t, true, t < t0 + 5000 ? 0.0 : 60.0, 0.0});
    }
    auto count_events = [](const EventLog& log) {
      int n = 0;
      for (const auto& r : log.records())
        if (r.kind == RecordKind::AttentionEvent && !r.payload.value("initial", false)) ++n;
      return n;
    };
    c.require(count_events(run_session(cfg, fl)) == 0, "session flicker produced events");
    c.require(count_events(run_session(cfg, su)) == 1, "session sustained off-task event count");
    if (c.ok) c.detail = "flicker: 0 events; sustained off-task: 1 Inattentive event, dwell " +
                         std::to_string(evs[0].t - evs[0].onset) + " ms";
    return c;
  });

  std::printf("[NOTE] %-28s human-subject results (survey shares, SUS mean of 9 children, association tests) are not "
              "reproducible without raw data; the formulas are covered by the statistics oracles\n",
              "study results");

  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
