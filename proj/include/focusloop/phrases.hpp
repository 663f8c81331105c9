#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "focusloop/rng.hpp"

namespace focusloop {

enum class FeedbackClass {
  PraiseImmediateStart,
  Praise,
  ShortPraise,
  PraiseAfterReattention,
  Criticize,
  CriticizeAgain,
};

inline constexpr std::array<FeedbackClass, 6> kAllFeedbackClasses{
    FeedbackClass::PraiseImmediateStart, FeedbackClass::Praise,
    FeedbackClass::ShortPraise,          FeedbackClass::PraiseAfterReattention,
    FeedbackClass::Criticize,            FeedbackClass::CriticizeAgain,
};

std::string_view to_string(FeedbackClass c);
std::optional<FeedbackClass> parse_feedback_class(std::string_view s);
bool is_praise(FeedbackClass c);

// Utterance templates, keyed by feedback class plus the scripted agent lines.
// "<NAME>" in a template is replaced by the child's name.
struct PhraseBook {
  std::map<FeedbackClass, std::vector<std::string>> feedback;
  std::vector<std::string> distraction;
  std::vector<std::string> intro;
  std::vector<std::string> goodbye;

  static PhraseBook defaults();
};

// Overlays every section present in `j` onto `base`. Throws ConfigError on an
// unknown class name or a non-string template.
PhraseBook phrase_book_from_json(const nlohmann::json& j, PhraseBook base = PhraseBook::defaults());
nlohmann::json to_json(const PhraseBook& book);

std::string substitute_name(std::string_view tmpl, std::string_view child_name);

// Draws templates uniformly from a named random stream. Consecutive picks for
// the same class never repeat a template when the class has more than one.
class PhraseSelector {
 public:
  PhraseSelector(PhraseBook book, RandomStream stream);

  // Throws ConfigError when the inventory for `c` is empty.
  std::string select(FeedbackClass c, std::string_view child_name);
  std::string select_distraction();

  const PhraseBook& book() const { return book_; }

 private:
  std::size_t pick(std::size_t size, std::optional<std::size_t>& last);

  PhraseBook book_;
  RandomStream stream_;
  std::map<FeedbackClass, std::size_t> last_feedback_;
  std::optional<std::size_t> last_distraction_;
};

}  // namespace focusloop
