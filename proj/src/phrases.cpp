#include "focusloop/phrases.hpp"

#include "focusloop/errors.hpp"

namespace focusloop {

std::string_view to_string(FeedbackClass c) {
  switch (c) {
    case FeedbackClass::PraiseImmediateStart: return "PraiseImmediateStart";
    case FeedbackClass::Praise: return "Praise";
    case FeedbackClass::ShortPraise: return "ShortPraise";
    case FeedbackClass::PraiseAfterReattention: return "PraiseAfterReattention";
    case FeedbackClass::Criticize: return "Criticize";
    case FeedbackClass::CriticizeAgain: return "CriticizeAgain";
  }
  return "?";
}

std::optional<FeedbackClass> parse_feedback_class(std::string_view s) {
  for (auto c : kAllFeedbackClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

bool is_praise(FeedbackClass c) {
  return c != FeedbackClass::Criticize && c != FeedbackClass::CriticizeAgain;
}

PhraseBook PhraseBook::defaults() {
  PhraseBook b;
  b.feedback[FeedbackClass::PraiseImmediateStart] = {
      "Great, you started right away! Here is a point for you.",
      "What a quick start, <NAME>! That earns you a point.",
  };
  b.feedback[FeedbackClass::Praise] = {
      "Good work. You earned one more point.",
      "You are working really well. Here is another point.",
      "Nice concentration! One more point for you.",
  };
  b.feedback[FeedbackClass::ShortPraise] = {
      "Stay with it, <NAME>!",
      "Well done, <NAME>!",
      "Great focus, <NAME>!",
  };
  b.feedback[FeedbackClass::PraiseAfterReattention] = {
      "Nice, you are back on your tasks!",
      "Welcome back to your tasks! That's a point for you.",
  };
  b.feedback[FeedbackClass::Criticize] = {
      "Your eyes left the tasks. Please look back at them!",
      "You looked away from your tasks. Try to focus again!",
  };
  b.feedback[FeedbackClass::CriticizeAgain] = {
      "Hmm, your mind is still somewhere else.",
      "You are still not looking at your tasks.",
  };
  b.distraction = {
      "psst, what is behind you?",
      "hey, did you hear that?",
      "what is that over there?",
  };
  b.intro = {
      "Hello <NAME>! I am your learning buddy.",
      "On the left you will see math tasks. Type your answer and press enter.",
      "When you keep looking at your tasks you earn points. If you look away, you lose a point.",
  };
  b.goodbye = {"That's it for today, <NAME>. Goodbye!"};
  return b;
}

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw ConfigError(std::string(what) + ": non-string template");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

PhraseBook phrase_book_from_json(const nlohmann::json& j, PhraseBook base) {
  if (!j.is_object()) throw ConfigError("phrases: expected an object");
  if (auto it = j.find("feedback"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("phrases.feedback: expected an object");
    for (const auto& [name, list] : it->items()) {
      auto cls = parse_feedback_class(name);
      if (!cls) throw ConfigError("phrases.feedback: unknown feedback class '" + name + "'");
      base.feedback[*cls] = string_list(list, "phrases.feedback." + name);
    }
  }
  if (auto it = j.find("distraction"); it != j.end()) base.distraction = string_list(*it, "phrases.distraction");
  if (auto it = j.find("intro"); it != j.end()) base.intro = string_list(*it, "phrases.intro");
  if (auto it = j.find("goodbye"); it != j.end()) base.goodbye = string_list(*it, "phrases.goodbye");
  return base;
}

nlohmann::json to_json(const PhraseBook& book) {
  nlohmann::json fb = nlohmann::json::object();
  for (const auto& [cls, list] : book.feedback) fb[std::string(to_string(cls))] = list;
  return {{"feedback", fb},
          {"distraction", book.distraction},
          {"intro", book.intro},
          {"goodbye", book.goodbye}};
}

std::string substitute_name(std::string_view tmpl, std::string_view child_name) {
  static constexpr std::string_view kToken = "<NAME>";
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto hit = tmpl.find(kToken, pos);
    if (hit == std::string_view::npos) break;
    out.append(tmpl.substr(pos, hit - pos));
    out.append(child_name);
    pos = hit + kToken.size();
  }
  out.append(tmpl.substr(pos));
  return out;
}

PhraseSelector::PhraseSelector(PhraseBook book, RandomStream stream)
    : book_(std::move(book)), stream_(std::move(stream)) {}

std::size_t PhraseSelector::pick(std::size_t size, std::optional<std::size_t>& last) {
  std::size_t idx;
  if (size == 1) {
    idx = 0;
  } else if (last) {
    // Uniform over the size-1 templates other than the previous one.
    idx = static_cast<std::size_t>(stream_.uniform_int(0, static_cast<std::int64_t>(size) - 2));
    if (idx >= *last) ++idx;
  } else {
    idx = static_cast<std::size_t>(stream_.uniform_int(0, static_cast<std::int64_t>(size) - 1));
  }
  last = idx;
  return idx;
}

std::string PhraseSelector::select(FeedbackClass c, std::string_view child_name) {
  auto it = book_.feedback.find(c);
  if (it == book_.feedback.end() || it->second.empty()) {
    throw ConfigError("empty phrase inventory for " + std::string(to_string(c)));
  }
  std::optional<std::size_t> last;
  if (auto l = last_feedback_.find(c); l != last_feedback_.end()) last = l->second;
  const auto idx = pick(it->second.size(), last);
  last_feedback_[c] = idx;
  return substitute_name(it->second[idx], child_name);
}

std::string PhraseSelector::select_distraction() {
  if (book_.distraction.empty()) throw ConfigError("empty distraction phrase inventory");
  return book_.distraction[pick(book_.distraction.size(), last_distraction_)];
}

}  // namespace focusloop
