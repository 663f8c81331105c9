#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "focusloop/rng.hpp"

namespace focusloop {

enum class Operator { Add, Subtract, Multiply, Divide };

std::string_view symbol(Operator op);
std::optional<Operator> parse_operator(std::string_view s);

struct TaskItem {
  std::uint64_t id = 0;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  Operator op = Operator::Add;
  std::int64_t answer = 0;
  int difficulty_tier = 1;

  std::string text() const;  // e.g. "13 + 6"
  friend bool operator==(const TaskItem&, const TaskItem&) = default;
};

nlohmann::json to_json(const TaskItem& t);
TaskItem task_from_json(const nlohmann::json& j);

// Independent evaluation of lhs <op> rhs; nullopt for division by zero or a
// non-zero remainder.
std::optional<std::int64_t> evaluate(std::int64_t lhs, Operator op, std::int64_t rhs);

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Operand ranges for one operator. For Divide, `lhs` is the quotient range and
// `rhs` the divisor range; the dividend is quotient * divisor so the division
// is always exact. For Subtract the larger draw becomes the minuend.
struct OperatorRange {
  Operator op = Operator::Add;
  Interval lhs;
  Interval rhs;
};

struct Tier {
  std::vector<OperatorRange> operators;
};

struct AgeBand {
  int min_age = 0;
  int max_age = 0;
  std::vector<Tier> tiers;  // tier 1 is tiers[0]

  int tier_count() const { return static_cast<int>(tiers.size()); }
  const Tier& tier(int t) const { return tiers.at(static_cast<std::size_t>(t - 1)); }
  bool covers(int age) const { return age >= min_age && age <= max_age; }
};

// Age 6-8, 9-11 and 12-17 bands, three tiers each.
std::vector<AgeBand> default_age_bands();
// Throws ConfigError unless the bands partition 6..17 with non-empty ranges,
// at least one tier, and divisors that exclude zero.
void validate_bands(const std::vector<AgeBand>& bands);
std::vector<AgeBand> age_bands_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<AgeBand>& bands);
const AgeBand& band_for_age(const std::vector<AgeBand>& bands, int age);

enum class AnswerOutcome { Correct, Incorrect };
enum class SoundCue { Positive, Negative };

struct AnswerResult {
  AnswerOutcome outcome = AnswerOutcome::Incorrect;
  SoundCue sound = SoundCue::Negative;
  bool correct() const { return outcome == AnswerOutcome::Correct; }
};

std::string_view to_string(AnswerOutcome o);
std::string_view to_string(SoundCue s);

AnswerResult check_answer(const TaskItem& task, std::int64_t submitted);
// Parses a typed answer (optional sign, digits, surrounding blanks). Throws
// InputRejected for anything that is not an integer.
AnswerResult check_answer(const TaskItem& task, std::string_view submitted);
std::int64_t parse_answer(std::string_view text);

struct GeneratorState {
  std::uint64_t next_id = 1;
  int streak_correct = 0;
  int streak_wrong = 0;
  int current_tier = 1;
};

inline constexpr int kPromoteAfterCorrect = 5;
inline constexpr int kDemoteAfterWrong = 3;

GeneratorState adapt_tier(GeneratorState state, const AnswerResult& result, int tier_count);

class TaskGenerator {
 public:
  TaskGenerator(AgeBand band, RandomStream stream, GeneratorState state = {});

  TaskItem next_task();
  void adapt(const AnswerResult& result);

  const GeneratorState& state() const { return state_; }
  const AgeBand& band() const { return band_; }

 private:
  AgeBand band_;
  RandomStream stream_;
  GeneratorState state_;
};

// Keeps one task active until it is answered correctly.
class TaskSession {
 public:
  explicit TaskSession(TaskGenerator generator);

  const TaskItem& active() const { return active_; }
  // Throws InputRejected for a non-integer answer; nothing changes then.
  AnswerResult submit(std::string_view text);
  const TaskGenerator& generator() const { return generator_; }

 private:
  TaskGenerator generator_;
  TaskItem active_;
};

}  // namespace focusloop
