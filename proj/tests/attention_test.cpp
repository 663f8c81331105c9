#include "doctest.h"

#include <vector>

#include "focusloop/attention.hpp"
#include "focusloop/errors.hpp"
#include "focusloop/rng.hpp"

using namespace focusloop;

TEST_CASE("classify_gaze: cone, keyboard band and missing face") {
  const ScreenGeometry screen{-20, 20, -15, 15, -40};

  CHECK(classify_gaze({0, true, 0, 0}, screen) == RawAttention::OnTask);
  CHECK(classify_gaze({0, false, 0, 0}, screen) == RawAttention::NoFace);
  CHECK(classify_gaze({0, false, 80, -80}, screen) == RawAttention::NoFace);
  // pitch -25 lies in [keyboard_pitch_min, pitch_min) = [-40, -15)
  CHECK(classify_gaze({0, true, 0, -25}, screen) == RawAttention::OnTask);
  CHECK(classify_gaze({0, true, 0, -40}, screen) == RawAttention::OnTask);
  CHECK(classify_gaze({0, true, 0, -40.5}, screen) == RawAttention::OffTask);
  CHECK(classify_gaze({0, true, 25, -25}, screen) == RawAttention::OffTask);
  CHECK(classify_gaze({0, true, -21, 0}, screen) == RawAttention::OffTask);
  CHECK(classify_gaze({0, true, 20, 15}, screen) == RawAttention::OnTask);
  CHECK(classify_gaze({0, true, 0, 16}, screen) == RawAttention::OffTask);
}

TEST_CASE("classify_gaze agrees with direct interval evaluation") {
  const ScreenGeometry g{-20, 20, -15, 15, -40};
  RandomStream rs(7, "gaze");
  for (int i = 0; i < 20000; ++i) {
    GazeSample s{0, rs.bernoulli(0.9), rs.uniform01() * 180 - 90, rs.uniform01() * 180 - 90};
    RawAttention expect;
    if (!s.face_present) {
      expect = RawAttention::NoFace;
    } else {
      const bool yaw_in = s.gaze_yaw >= g.yaw_min && s.gaze_yaw <= g.yaw_max;
      const bool screen_pitch = s.gaze_pitch >= g.pitch_min && s.gaze_pitch <= g.pitch_max;
      const bool kb_pitch = s.gaze_pitch >= g.keyboard_pitch_min && s.gaze_pitch < g.pitch_min;
      expect = yaw_in && (screen_pitch || kb_pitch) ? RawAttention::OnTask : RawAttention::OffTask;
    }
    REQUIRE(classify_gaze(s, g) == expect);
    REQUIRE(classify_gaze(s, g) == classify_gaze(s, g));
  }
}

TEST_CASE("monitor: 100 ms flicker never reaches the 1000 ms dwell") {
  AttentionMonitor m({1000, 2000});
  int events = 0;
  for (Millis t = 0; t <= 10000; t += 100) {
    const auto raw = (t / 100) % 2 ? RawAttention::OffTask : RawAttention::OnTask;
    if (m.step(raw, t)) ++events;
  }
  CHECK(events == 0);
  CHECK(m.current() == AttentionState::Attentive);
}

TEST_CASE("monitor: sustained off-task emits one event dated at its onset") {
  AttentionMonitor m({1000, 2000});
  std::vector<AttentionEvent> events;
  for (Millis t = 0; t < 5000; t += 100) REQUIRE_FALSE(m.step(RawAttention::OnTask, t));
  for (Millis t = 5000; t <= 8000; t += 100) {
    if (auto ev = m.step(RawAttention::OffTask, t)) events.push_back(*ev);
  }
  REQUIRE(events.size() == 1);
  CHECK(events[0].state == AttentionState::Inattentive);
  CHECK(events[0].onset == 5000);
  CHECK(events[0].t == 6000);
}

TEST_CASE("monitor: on-task while attentive is silent") {
  AttentionMonitor m;
  for (Millis t = 0; t < 60000; t += 250) CHECK_FALSE(m.step(RawAttention::OnTask, t));
}

TEST_CASE("monitor: short face dropouts never change state") {
  AttentionMonitor m({1000, 2000});
  Millis t = 0;
  for (int rep = 0; rep < 20; ++rep) {
    for (int i = 0; i < 19; ++i, t += 100) REQUIRE_FALSE(m.step(RawAttention::NoFace, t));  // 1.8 s
    REQUIRE_FALSE(m.step(RawAttention::OnTask, t));
    t += 100;
  }
  CHECK(m.current() == AttentionState::Attentive);
}

TEST_CASE("monitor: NoFace beyond grace becomes inattention after the dwell") {
  AttentionMonitor m({1000, 2000});
  std::optional<AttentionEvent> ev;
  Millis t = 0;
  for (; t <= 5000 && !ev; t += 100) ev = m.step(RawAttention::NoFace, t);
  REQUIRE(ev);
  CHECK(ev->state == AttentionState::Inattentive);
  CHECK(ev->onset == 2000);
  CHECK(ev->t == 3000);
}

TEST_CASE("monitor: a face dropout while inattentive does not restore attention") {
  AttentionMonitor m({1000, 2000}, AttentionState::Inattentive);
  for (Millis t = 0; t < 1900; t += 100) CHECK_FALSE(m.step(RawAttention::NoFace, t));
  CHECK(m.current() == AttentionState::Inattentive);
}

TEST_CASE("monitor: time regression is rejected") {
  AttentionMonitor m;
  m.step(RawAttention::OnTask, 1000);
  CHECK_THROWS_AS(m.step(RawAttention::OnTask, 999), InputRejected);
  CHECK_THROWS_AS(m.force(AttentionState::Inattentive, 10), InputRejected);
  CHECK(m.current() == AttentionState::Attentive);
}

TEST_CASE("monitor properties over random raw streams: alternation, dwell, grace") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    RandomStream rs(seed, "monitor-prop");
    const MonitorParams p{static_cast<Millis>(rs.uniform_int(200, 2000)), static_cast<Millis>(rs.uniform_int(0, 3000))};
    AttentionMonitor m(p);
    std::vector<std::pair<Millis, RawAttention>> raw;
    std::vector<AttentionEvent> events;
    Millis t = 0;
    RawAttention cur = RawAttention::OnTask;
    for (int i = 0; i < 2000; ++i) {
      if (rs.bernoulli(0.05)) cur = static_cast<RawAttention>(rs.uniform_int(0, 2));
      raw.emplace_back(t, cur);
      if (auto ev = m.step(cur, t)) events.push_back(*ev);
      t += rs.uniform_int(1, 150);
    }
    AttentionState prev = AttentionState::Attentive;
    for (const auto& ev : events) {
      REQUIRE(ev.state != prev);
      prev = ev.state;
      REQUIRE(ev.t - ev.onset >= p.hysteresis_ms);
      // Every raw sample in the dwell window points at the new state.
      for (const auto& [ts, r] : raw) {
        if (ts < ev.onset || ts >= ev.onset + p.hysteresis_ms) continue;
        if (ev.state == AttentionState::Attentive) REQUIRE(r == RawAttention::OnTask);
        else REQUIRE(r != RawAttention::OnTask);
      }
    }
  }
}
