#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "focusloop/session.hpp"

namespace focusloop {

// Scripted input traces, one comma-separated record per line:
//
//   t_ms,face_present,yaw_deg,pitch_deg   gaze sample (face_present 0/1/true/false)
//   t_ms,attentive | t_ms,inattentive     pre-debounced attention event
//   t_ms,keypress
//   t_ms,answer,<text>                    typed answer ("@correct"/"@wrong" allowed)
//
// Blank lines, lines starting with '#' and a header line starting with "t_ms"
// are skipped. Throws InputRejected naming the offending line.
std::vector<ExternalInput> parse_trace(std::istream& in);
std::vector<ExternalInput> load_trace(const std::filesystem::path& path);

std::string format_trace_line(const ExternalInput& in);
std::string format_trace(const std::vector<ExternalInput>& inputs);

// Synthetic gaze for simulations: a three-state Markov chain (on screen, off
// screen, no face) sampled at a fixed period, plus random answers during the
// trials of the given script.
struct MarkovTraceParams {
  Millis sample_period_ms = 100;
  double p_leave_on = 0.01;      // per sample
  double p_leave_off = 0.05;
  double p_leave_noface = 0.1;
  double p_noface = 0.2;         // share of departures from on-screen that lose the face
  double answers_per_minute = 4.0;
  double p_answer_correct = 0.7;
};

std::vector<ExternalInput> markov_trace(const SessionScript& script, const MarkovTraceParams& params,
                                        RandomStream& rng);

}  // namespace focusloop
