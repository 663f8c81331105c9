#include "focusloop/tasks.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "focusloop/errors.hpp"

namespace focusloop {

std::string_view symbol(Operator op) {
  switch (op) {
    case Operator::Add: return "+";
    case Operator::Subtract: return "-";
    case Operator::Multiply: return "*";
    case Operator::Divide: return "/";
  }
  return "?";
}

std::optional<Operator> parse_operator(std::string_view s) {
  if (s == "+") return Operator::Add;
  if (s == "-") return Operator::Subtract;
  if (s == "*" || s == "x") return Operator::Multiply;
  if (s == "/" || s == ":") return Operator::Divide;
  return std::nullopt;
}

std::string TaskItem::text() const {
  std::string_view shown;
  switch (op) {
    case Operator::Add: shown = "+"; break;
    case Operator::Subtract: shown = "-"; break;
    case Operator::Multiply: shown = "×"; break;
    case Operator::Divide: shown = "÷"; break;
  }
  return std::to_string(lhs) + " " + std::string(shown) + " " + std::to_string(rhs);
}

nlohmann::json to_json(const TaskItem& t) {
  return {{"id", t.id},   {"lhs", t.lhs},       {"rhs", t.rhs},
          {"op", symbol(t.op)}, {"answer", t.answer}, {"tier", t.difficulty_tier},
          {"text", t.text()}};
}

TaskItem task_from_json(const nlohmann::json& j) {
  TaskItem t;
  t.id = j.at("id").get<std::uint64_t>();
  t.lhs = j.at("lhs").get<std::int64_t>();
  t.rhs = j.at("rhs").get<std::int64_t>();
  auto op = parse_operator(j.at("op").get<std::string>());
  if (!op) throw InvalidLog("unknown task operator");
  t.op = *op;
  t.answer = j.at("answer").get<std::int64_t>();
  t.difficulty_tier = j.at("tier").get<int>();
  return t;
}

std::optional<std::int64_t> evaluate(std::int64_t lhs, Operator op, std::int64_t rhs) {
  switch (op) {
    case Operator::Add: return lhs + rhs;
    case Operator::Subtract: return lhs - rhs;
    case Operator::Multiply: return lhs * rhs;
    case Operator::Divide:
      if (rhs == 0 || lhs % rhs != 0) return std::nullopt;
      return lhs / rhs;
  }
  return std::nullopt;
}

namespace {

OperatorRange range(Operator op, std::int64_t lo, std::int64_t hi) { return {op, {lo, hi}, {lo, hi}}; }
OperatorRange range(Operator op, Interval lhs, Interval rhs) { return {op, lhs, rhs}; }

}  // namespace

std::vector<AgeBand> default_age_bands() {
  using enum Operator;
  std::vector<AgeBand> bands;
  bands.push_back({6, 8,
                   {
                       Tier{{range(Add, 0, 20), range(Subtract, 0, 20)}},
                       Tier{{range(Add, 0, 50), range(Subtract, 0, 50)}},
                       Tier{{range(Add, 0, 100), range(Subtract, 0, 100)}},
                   }});
  bands.push_back({9, 11,
                   {
                       Tier{{range(Add, 0, 50), range(Subtract, 0, 50), range(Multiply, {2, 5}, {2, 10})}},
                       Tier{{range(Add, 0, 100), range(Subtract, 0, 100), range(Multiply, 2, 10)}},
                       Tier{{range(Add, 0, 100), range(Subtract, 0, 100), range(Multiply, {2, 10}, {2, 20})}},
                   }});
  bands.push_back({12, 17,
                   {
                       Tier{{range(Add, 0, 100), range(Subtract, 0, 100), range(Multiply, 2, 10)}},
                       Tier{{range(Add, 0, 500), range(Subtract, 0, 500), range(Multiply, 2, 12),
                             range(Divide, 2, 12)}},
                       Tier{{range(Add, 0, 1000), range(Subtract, 0, 1000), range(Multiply, {10, 99}, {2, 12}),
                             range(Divide, {10, 99}, {2, 12})}},
                   }});
  return bands;
}

void validate_bands(const std::vector<AgeBand>& bands) {
  if (bands.empty()) throw ConfigError("task bands: none defined");
  auto sorted = bands;
  std::sort(sorted.begin(), sorted.end(),
            [](const AgeBand& a, const AgeBand& b) { return a.min_age < b.min_age; });
  int expect = 6;
  for (const auto& b : sorted) {
    const std::string where = "task band " + std::to_string(b.min_age) + "-" + std::to_string(b.max_age);
    if (b.min_age != expect || b.max_age < b.min_age)
      throw ConfigError(where + ": bands must partition ages 6-17 without gaps or overlap");
    expect = b.max_age + 1;
    if (b.tiers.empty()) throw ConfigError(where + ": no tiers");
    for (const auto& tier : b.tiers) {
      if (tier.operators.empty()) throw ConfigError(where + ": tier without operators");
      for (const auto& r : tier.operators) {
        if (r.lhs.lo > r.lhs.hi || r.rhs.lo > r.rhs.hi) throw ConfigError(where + ": empty operand range");
        if (r.op == Operator::Divide && r.rhs.contains(0)) throw ConfigError(where + ": divisor range contains 0");
      }
    }
  }
  if (expect != 18) throw ConfigError("task bands must partition ages 6-17");
}

namespace {

Interval interval_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("task bands: interval must be [lo, hi]");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

}  // namespace

std::vector<AgeBand> age_bands_from_json(const nlohmann::json& j) {
  std::vector<AgeBand> bands;
  try {
    for (const auto& jb : j) {
      AgeBand b;
      b.min_age = jb.at("min_age").get<int>();
      b.max_age = jb.at("max_age").get<int>();
      for (const auto& jt : jb.at("tiers")) {
        Tier tier;
        for (const auto& jo : jt) {
          auto op = parse_operator(jo.at("op").get<std::string>());
          if (!op) throw ConfigError("task bands: unknown operator");
          tier.operators.push_back({*op, interval_from_json(jo.at("lhs")), interval_from_json(jo.at("rhs"))});
        }
        b.tiers.push_back(std::move(tier));
      }
      bands.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("task bands: ") + e.what());
  }
  validate_bands(bands);
  return bands;
}

nlohmann::json to_json(const std::vector<AgeBand>& bands) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : bands) {
    nlohmann::json tiers = nlohmann::json::array();
    for (const auto& tier : b.tiers) {
      nlohmann::json ops = nlohmann::json::array();
      for (const auto& r : tier.operators) {
        ops.push_back({{"op", symbol(r.op)}, {"lhs", {r.lhs.lo, r.lhs.hi}}, {"rhs", {r.rhs.lo, r.rhs.hi}}});
      }
      tiers.push_back(ops);
    }
    out.push_back({{"min_age", b.min_age}, {"max_age", b.max_age}, {"tiers", tiers}});
  }
  return out;
}

const AgeBand& band_for_age(const std::vector<AgeBand>& bands, int age) {
  for (const auto& b : bands) {
    if (b.covers(age)) return b;
  }
  throw ConfigError("no task band covers age " + std::to_string(age));
}

std::string_view to_string(AnswerOutcome o) { return o == AnswerOutcome::Correct ? "Correct" : "Incorrect"; }
std::string_view to_string(SoundCue s) { return s == SoundCue::Positive ? "Positive" : "Negative"; }

AnswerResult check_answer(const TaskItem& task, std::int64_t submitted) {
  if (submitted == task.answer) return {AnswerOutcome::Correct, SoundCue::Positive};
  return {AnswerOutcome::Incorrect, SoundCue::Negative};
}

std::int64_t parse_answer(std::string_view text) {
  auto is_blank = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_blank(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_blank(text.back())) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw InputRejected("answer '" + std::string(text) + "' is not an integer");
  }
  return value;
}

AnswerResult check_answer(const TaskItem& task, std::string_view submitted) {
  return check_answer(task, parse_answer(submitted));
}

GeneratorState adapt_tier(GeneratorState state, const AnswerResult& result, int tier_count) {
  if (result.correct()) {
    ++state.streak_correct;
    state.streak_wrong = 0;
    if (state.streak_correct >= kPromoteAfterCorrect) {
      state.current_tier = std::min(state.current_tier + 1, tier_count);
      state.streak_correct = 0;
    }
  } else {
    ++state.streak_wrong;
    state.streak_correct = 0;
    if (state.streak_wrong >= kDemoteAfterWrong) {
      state.current_tier = std::max(state.current_tier - 1, 1);
      state.streak_wrong = 0;
    }
  }
  return state;
}

TaskGenerator::TaskGenerator(AgeBand band, RandomStream stream, GeneratorState state)
    : band_(std::move(band)), stream_(std::move(stream)), state_(state) {
  if (band_.tiers.empty()) throw ConfigError("task band has no tiers");
  state_.current_tier = std::clamp(state_.current_tier, 1, band_.tier_count());
}

TaskItem TaskGenerator::next_task() {
  const Tier& tier = band_.tier(state_.current_tier);
  const auto& r = tier.operators[static_cast<std::size_t>(
      stream_.uniform_int(0, static_cast<std::int64_t>(tier.operators.size()) - 1))];

  TaskItem task;
  task.id = state_.next_id++;
  task.op = r.op;
  task.difficulty_tier = state_.current_tier;
  const std::int64_t a = stream_.uniform_int(r.lhs.lo, r.lhs.hi);
  const std::int64_t b = stream_.uniform_int(r.rhs.lo, r.rhs.hi);
  switch (r.op) {
    case Operator::Add:
    case Operator::Multiply:
      task.lhs = a;
      task.rhs = b;
      break;
    case Operator::Subtract:
      task.lhs = std::max(a, b);
      task.rhs = std::min(a, b);
      break;
    case Operator::Divide:
      task.lhs = a * b;
      task.rhs = b;
      break;
  }
  task.answer = *evaluate(task.lhs, task.op, task.rhs);
  return task;
}

void TaskGenerator::adapt(const AnswerResult& result) {
  state_ = adapt_tier(state_, result, band_.tier_count());
}

TaskSession::TaskSession(TaskGenerator generator)
    : generator_(std::move(generator)), active_(generator_.next_task()) {}

AnswerResult TaskSession::submit(std::string_view text) {
  const auto result = check_answer(active_, text);
  generator_.adapt(result);
  if (result.correct()) active_ = generator_.next_task();
  return result;
}

}  // namespace focusloop
