#include "focusloop/replay.hpp"

#include "focusloop/errors.hpp"

namespace focusloop {

bool is_replayed_kind(RecordKind k) { return k != RecordKind::GazeSample && k != RecordKind::Warning; }

std::vector<ExternalInput> recorded_inputs(const EventLog& log) {
  std::vector<ExternalInput> inputs;
  for (const auto& r : log.records()) {
    switch (r.kind) {
      case RecordKind::AttentionEvent: {
        if (r.payload.value("initial", false)) break;
        auto state = parse_attention_state(r.payload.at("state").get<std::string>());
        if (!state) throw InvalidLog("bad attention state at seq " + std::to_string(r.seq));
        inputs.emplace_back(AttentionEvent{r.t, *state, r.payload.value("onset", r.t)});
        break;
      }
      case RecordKind::Keypress:
        inputs.emplace_back(KeypressInput{r.t});
        break;
      case RecordKind::AnswerSubmitted:
        inputs.emplace_back(AnswerInput{r.t, r.payload.at("text").get<std::string>()});
        break;
      default:
        break;
    }
  }
  return inputs;
}

ReplayResult replay_verify(const EventLog& log) {
  const auto& recs = log.records();
  if (recs.empty() || recs.front().kind != RecordKind::ConfigSnapshot) {
    throw InvalidLog("log does not start with a ConfigSnapshot");
  }
  const auto& last = recs.back();
  const std::string last_phase =
      last.kind == RecordKind::PhaseStart ? last.payload.value("phase", std::string{}) : std::string{};
  if (last_phase != "End" && last_phase != "Aborted") {
    throw InvalidLog("log is truncated: no End or Aborted marker");
  }

  SessionConfig config;
  try {
    config = config_from_json(recs.front().payload.at("config"));
  } catch (const ValidationError& e) {
    throw InvalidLog(std::string("ConfigSnapshot does not validate: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidLog(std::string("ConfigSnapshot incomplete: ") + e.what());
  }

  std::vector<ExternalInput> inputs;
  try {
    inputs = recorded_inputs(log);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidLog(std::string("malformed input record: ") + e.what());
  }

  SessionRunner runner(config);
  for (auto& in : inputs) runner.submit(std::move(in));
  if (last_phase == "End") runner.finish();
  else runner.abort(last.t);

  std::vector<const EventLogRecord*> expected, actual;
  for (const auto& r : recs)
    if (is_replayed_kind(r.kind)) expected.push_back(&r);
  for (const auto& r : runner.log().records())
    if (is_replayed_kind(r.kind)) actual.push_back(&r);

  ReplayResult res;
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = *expected[i];
    const auto& a = *actual[i];
    if (e.t != a.t || e.kind != a.kind || e.payload != a.payload) {
      res.first_divergent_seq = e.seq;
      res.detail = "recorded: " + serialize(e) + "\nreplayed: " + serialize(a);
      return res;
    }
  }
  if (expected.size() != actual.size()) {
    if (expected.size() > n) {
      res.first_divergent_seq = expected[n]->seq;
      res.detail = "recorded log has extra record: " + serialize(*expected[n]);
    } else {
      res.first_divergent_seq = recs.back().seq + 1;
      res.detail = "replay produced extra record: " + serialize(*actual[n]);
    }
    return res;
  }
  res.match = true;
  return res;
}

}  // namespace focusloop
