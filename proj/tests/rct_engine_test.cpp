#include "doctest.h"

#include <map>
#include <set>

#include "focusloop/errors.hpp"
#include "focusloop/rct_engine.hpp"

using namespace focusloop;

namespace {

RctEngine make_engine(PolicyParams p = {}, std::uint64_t seed = 1) {
  return RctEngine(p, PhraseSelector(PhraseBook::defaults(), RandomStream(seed, "phrases")), "Mia",
                   RandomStream(seed, "praise_mix"));
}

std::vector<FeedbackAction> run_ticks(RctEngine& e, Millis from, Millis to, Millis step) {
  std::vector<FeedbackAction> out;
  for (Millis t = from; t <= to; t += step) {
    auto a = e.step(Tick{t});
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

}  // namespace

TEST_CASE("periodic praise: 300 s attentive, 60 s interval, 1 s ticks gives five") {
  PolicyParams p;
  p.praise_interval_ms = 60000;
  auto e = make_engine(p);
  auto actions = run_ticks(e, 1000, 300000, 1000);
  REQUIRE(actions.size() == 5);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    CHECK(actions[i].t == 60000 * static_cast<Millis>(i + 1));
    CHECK((actions[i].cls == FeedbackClass::Praise || actions[i].cls == FeedbackClass::ShortPraise));
    CHECK(actions[i].point_delta == 1);
    CHECK(actions[i].expression == Expression::Happy);
  }
  CHECK(e.ledger().balance() == 5);
}

TEST_CASE("criticize after grace, criticize again after 30 s") {
  auto e = make_engine();
  CHECK(e.step(AttentionEvent{10000, AttentionState::Inattentive, 10000}).empty());
  std::vector<FeedbackAction> actions = run_ticks(e, 10250, 42000, 250);
  REQUIRE(actions.size() == 2);
  CHECK(actions[0].cls == FeedbackClass::Criticize);
  CHECK(actions[0].t == 12000);
  CHECK(actions[0].point_delta == -1);
  CHECK_FALSE(actions[0].phrase.empty());
  CHECK(actions[1].cls == FeedbackClass::CriticizeAgain);
  CHECK(actions[1].t == 42000);
  CHECK(actions[1].expression == Expression::Disappointed);
}

TEST_CASE("reattention praise closes a criticized episode with net zero") {
  PolicyParams p;
  p.floor_at_zero = false;
  auto e = make_engine(p);
  e.step(AttentionEvent{10000, AttentionState::Inattentive, 10000});
  auto crit = run_ticks(e, 10250, 19750, 250);
  REQUIRE(crit.size() == 1);
  CHECK(crit[0].t == 12000);
  auto back = e.step(AttentionEvent{20000, AttentionState::Attentive, 20000});
  REQUIRE(back.size() == 1);
  CHECK(back[0].cls == FeedbackClass::PraiseAfterReattention);
  CHECK(back[0].t == 20000);
  CHECK(e.ledger().balance() == 0);
  CHECK_FALSE(e.state().criticized());
  // Periodic timing restarts at the reattention praise.
  auto later = run_ticks(e, 20250, 65000, 250);
  REQUIRE(later.size() == 1);
  CHECK(later[0].t == 65000);
}

TEST_CASE("reattention before the grace expired earns no special praise") {
  auto e = make_engine();
  e.step(AttentionEvent{10000, AttentionState::Inattentive, 10000});
  CHECK(run_ticks(e, 10250, 11750, 250).empty());
  CHECK(e.step(AttentionEvent{11800, AttentionState::Attentive, 11800}).empty());
}

TEST_CASE("start praise: within the window, once per session") {
  auto e = make_engine();
  e.step(TaskExplained{0});
  auto a = e.step(FirstKeypress{3000});
  REQUIRE(a.size() == 1);
  CHECK(a[0].cls == FeedbackClass::PraiseImmediateStart);
  CHECK(e.step(FirstKeypress{4000}).empty());
  e.step(TaskExplained{5000});
  CHECK(e.step(FirstKeypress{6000}).empty());
}

TEST_CASE("start praise: a late first keypress forfeits it") {
  auto e = make_engine();
  e.step(TaskExplained{0});
  CHECK(e.step(FirstKeypress{10001}).empty());
  CHECK(e.step(FirstKeypress{10002}).empty());
  auto edge = make_engine();
  edge.step(TaskExplained{0});
  CHECK(edge.step(FirstKeypress{10000}).size() == 1);
}

TEST_CASE("out-of-order input is rejected") {
  auto e = make_engine();
  e.step(Tick{5000});
  CHECK_THROWS_AS(e.step(Tick{4999}), InputRejected);
}

TEST_CASE("suppression window defers criticism") {
  auto e = make_engine();
  e.suppress_criticism_until(15000);
  e.step(AttentionEvent{10000, AttentionState::Inattentive, 10000});
  auto a = run_ticks(e, 10250, 16000, 250);
  REQUIRE(a.size() == 1);
  CHECK(a[0].t == 15250);
}

TEST_CASE("apply_delta and the zero floor") {
  TokenLedger l(true);
  l = apply_delta(l, 0, FeedbackClass::Praise, +1);
  l = apply_delta(l, 1, FeedbackClass::Praise, +1);
  l = apply_delta(l, 2, FeedbackClass::Praise, +1);
  l = apply_delta(l, 3, FeedbackClass::Criticize, -1);
  CHECK(l.balance() == 2);

  TokenLedger floored(true);
  floored = apply_delta(floored, 0, FeedbackClass::Criticize, -1);
  CHECK(floored.balance() == 0);
  REQUIRE(floored.history().size() == 1);
  CHECK(floored.history()[0].delta == -1);

  TokenLedger open(false);
  open = apply_delta(open, 0, FeedbackClass::Criticize, -1);
  CHECK(open.balance() == -1);
}

TEST_CASE("select_phrase: name substitution and verbatim templates") {
  PhraseBook single;
  single.feedback[FeedbackClass::ShortPraise] = {"Stay with it, <NAME>!"};
  single.feedback[FeedbackClass::Criticize] = {"Look back at the tasks, <NAME> and <NAME>."};
  single.feedback[FeedbackClass::CriticizeAgain] = {"No name here."};
  PhraseSelector sel(single, RandomStream(3, "phrases"));
  CHECK(sel.select(FeedbackClass::ShortPraise, "Mia") == "Stay with it, Mia!");
  CHECK(sel.select(FeedbackClass::Criticize, "Ben") == "Look back at the tasks, Ben and Ben.");
  CHECK(sel.select(FeedbackClass::Criticize, "Ben") == "Look back at the tasks, Ben and Ben.");
  CHECK(sel.select(FeedbackClass::CriticizeAgain, "Ben") == "No name here.");
  CHECK_THROWS_AS(sel.select(FeedbackClass::Praise, "Ben"), ConfigError);
}

TEST_CASE("default inventories cover every class") {
  const auto b = PhraseBook::defaults();
  for (auto c : {FeedbackClass::PraiseImmediateStart, FeedbackClass::Praise, FeedbackClass::ShortPraise,
                 FeedbackClass::PraiseAfterReattention, FeedbackClass::Criticize, FeedbackClass::CriticizeAgain}) {
    REQUIRE(b.feedback.count(c) == 1);
    CHECK(b.feedback.at(c).size() >= 2);
  }
  for (const auto& s : b.feedback.at(FeedbackClass::ShortPraise)) CHECK(s.find("<NAME>") != std::string::npos);
  CHECK(b.distraction.size() >= 2);
  CHECK_FALSE(b.intro.empty());
  CHECK_FALSE(b.goodbye.empty());
}

TEST_CASE("select_phrase never repeats back-to-back and covers the inventory uniformly") {
  PhraseSelector sel(PhraseBook::defaults(), RandomStream(11, "phrases"));
  std::map<std::string, int> seen;
  std::string prev;
  for (int i = 0; i < 30000; ++i) {
    auto s = sel.select(FeedbackClass::Praise, "Mia");
    REQUIRE(s != prev);
    prev = s;
    ++seen[s];
  }
  REQUIRE(seen.size() == 3);
  for (const auto& [_, n] : seen) CHECK(n == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("short praise ratio extremes") {
  PolicyParams p;
  p.short_praise_ratio = 1.0;
  auto all_short = make_engine(p);
  for (const auto& a : run_ticks(all_short, 250, 600000, 250)) CHECK(a.cls == FeedbackClass::ShortPraise);
  p.short_praise_ratio = 0.0;
  auto none = make_engine(p);
  for (const auto& a : run_ticks(none, 250, 600000, 250)) CHECK(a.cls == FeedbackClass::Praise);
}

TEST_CASE("determinism: same inputs and seed give identical actions") {
  auto a = make_engine({}, 99);
  auto b = make_engine({}, 99);
  std::vector<EngineInput> inputs{TaskExplained{0}};
  for (Millis t = 250; t < 200000; t += 250) {
    if (t == 2000) inputs.push_back(FirstKeypress{t});
    if (t == 50000) inputs.push_back(AttentionEvent{t, AttentionState::Inattentive, t - 1000});
    if (t == 120000) inputs.push_back(AttentionEvent{t, AttentionState::Attentive, t - 1000});
    inputs.push_back(Tick{t});
  }
  for (const auto& in : inputs) CHECK(a.step(in) == b.step(in));
}

TEST_CASE("policy validation names the bad fields") {
  PolicyParams p;
  p.praise_interval_ms = 0;
  p.short_praise_ratio = 1.5;
  try {
    validate(p);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.names("praise_interval_ms"));
    CHECK(e.names("short_praise_ratio"));
  }
}
