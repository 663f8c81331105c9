#include "focusloop/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "focusloop/csv.hpp"
#include "focusloop/errors.hpp"

namespace focusloop {

namespace {

Millis parse_time(const std::string& s) {
  Millis v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) throw InputRejected("bad timestamp '" + s + "'");
  return v;
}

double parse_angle(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputRejected("bad angle '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InputRejected("bad angle '" + s + "'");
  return v;
}

bool parse_flag(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw InputRejected("bad face_present flag '" + s + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ExternalInput> parse_trace(std::istream& in) {
  std::vector<ExternalInput> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#' || trimmed.rfind("t_ms", 0) == 0) continue;
    try {
      const auto f = csv::split_line(trimmed);
      const Millis t = parse_time(f.at(0));
      if (f.size() == 4) {
        GazeSample s{t, parse_flag(f[1]), parse_angle(f[2]), parse_angle(f[3])};
        if (!is_valid(s)) throw InputRejected("gaze angles must lie within [-90, 90]");
        out.emplace_back(s);
      } else if (f.size() == 2 && f[1] == "keypress") {
        out.emplace_back(KeypressInput{t});
      } else if (f.size() == 2 && parse_attention_state(f[1])) {
        out.emplace_back(AttentionEvent{t, *parse_attention_state(f[1]), t});
      } else if (f.size() == 3 && f[1] == "answer") {
        out.emplace_back(AnswerInput{t, f[2]});
      } else {
        throw InputRejected("unrecognized record");
      }
    } catch (const InputRejected& e) {
      throw InputRejected("trace line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw InputRejected("trace line " + std::to_string(lineno) + ": missing fields");
    }
  }
  return out;
}

std::vector<ExternalInput> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputRejected("cannot open trace " + path.string());
  return parse_trace(in);
}

std::string format_trace_line(const ExternalInput& in) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        const std::string t = std::to_string(v.t);
        if constexpr (std::is_same_v<T, GazeSample>) {
          return t + "," + (v.face_present ? "1" : "0") + "," + format_double(v.gaze_yaw) + "," +
                 format_double(v.gaze_pitch);
        } else if constexpr (std::is_same_v<T, AttentionEvent>) {
          return t + "," + (v.state == AttentionState::Attentive ? "attentive" : "inattentive");
        } else if constexpr (std::is_same_v<T, KeypressInput>) {
          return t + ",keypress";
        } else {
          return t + ",answer," + v.text;
        }
      },
      in);
}

std::string format_trace(const std::vector<ExternalInput>& inputs) {
  std::string out = "# t_ms,...\n";
  for (const auto& in : inputs) out += format_trace_line(in) + "\n";
  return out;
}

std::vector<ExternalInput> markov_trace(const SessionScript& script, const MarkovTraceParams& params,
                                        RandomStream& rng) {
  enum class Gaze { On, Off, NoFace };
  std::vector<ExternalInput> out;
  Gaze state = Gaze::On;
  const double p_answer =
      params.answers_per_minute * static_cast<double>(params.sample_period_ms) / 60000.0;
  for (Millis t = 0; t < script.end(); t += params.sample_period_ms) {
    switch (state) {
      case Gaze::On:
        if (rng.bernoulli(params.p_leave_on)) state = rng.bernoulli(params.p_noface) ? Gaze::NoFace : Gaze::Off;
        break;
      case Gaze::Off:
        if (rng.bernoulli(params.p_leave_off)) state = Gaze::On;
        break;
      case Gaze::NoFace:
        if (rng.bernoulli(params.p_leave_noface)) state = Gaze::On;
        break;
    }
    // Jitter keeps the samples inside the chosen region of the default screen.
    const double yaw_jitter = rng.uniform01() * 10.0 - 5.0;
    const double pitch_jitter = rng.uniform01() * 6.0 - 3.0;
    switch (state) {
      case Gaze::On:
        out.emplace_back(GazeSample{t, true, yaw_jitter, pitch_jitter});
        break;
      case Gaze::Off:
        out.emplace_back(GazeSample{t, true, 45.0 + yaw_jitter, pitch_jitter});
        break;
      case Gaze::NoFace:
        out.emplace_back(GazeSample{t, false, 0.0, 0.0});
        break;
    }
    const Phase* p = script.phase_at(t);
    if (p && p->kind == PhaseKind::Trial && rng.bernoulli(p_answer)) {
      out.emplace_back(AnswerInput{t, rng.bernoulli(params.p_answer_correct) ? "@correct" : "@wrong"});
    }
  }
  return out;
}

}  // namespace focusloop
