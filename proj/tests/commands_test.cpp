#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "focusloop/commands.hpp"
#include "focusloop/event_log.hpp"
#include "focusloop/session.hpp"

using namespace focusloop;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& p, const std::string& content) {
  std::ofstream(p) << content;
  return p;
}

fs::path write_config(const fs::path& dir) {
  SessionConfig c;
  c.child_name = "Mia";
  c.child_id = "c9";
  c.degree_of_distraction = 2;
  c.seed = 11;
  c.trial_duration_ms = 150000;
  return write_file(dir / "config.json", to_json(c).dump(2));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json last_json_line(const std::string& out) {
  std::istringstream in(out);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty() && line.front() == '{') last = line;
  return nlohmann::json::parse(last);
}

}  // namespace

TEST_CASE("simulate, replay and tamper detection from the command layer") {
  TempDir dir("focusloop_cmd_test");
  const auto config = write_config(dir.path);
  const auto trace = dir.path / "trace.csv";
  std::ostringstream err;
  REQUIRE(cmd_synth_trace(config, trace, 5, std::nullopt, err) == kExitOk);

  std::ostringstream out1, out2;
  const auto a = cmd_simulate({config, trace, dir.path / "a", std::nullopt}, {}, out1, err);
  const auto b = cmd_simulate({config, trace, dir.path / "b", std::nullopt}, {}, out2, err);
  REQUIRE(a.exit_code == kExitOk);
  REQUIRE(b.exit_code == kExitOk);
  CHECK(a.log_path == dir.path / "a" / "c9" / "1-11.log");
  CHECK(slurp(a.log_path) == slurp(b.log_path));
  CHECK(fs::exists(a.report_json));
  CHECK(fs::exists(a.report_text));
  CHECK(out1.str().find("final points:") != std::string::npos);
  CHECK(last_json_line(out1.str())["exit"] == 0);

  std::ostringstream rout;
  CHECK(cmd_replay(a.log_path, {}, rout, err) == kExitOk);

  // Edit one Feedback phrase.
  auto log = read_log(a.log_path);
  EventLog edited;
  bool done = false;
  std::uint64_t seq = 0;
  for (auto r : log.records()) {
    if (!done && r.kind == RecordKind::Feedback) {
      r.payload["phrase"] = "edited";
      seq = r.seq;
      done = true;
    }
    edited.append(r);
  }
  REQUIRE(done);
  write_log(edited, dir.path / "edited.log");
  std::ostringstream eout;
  CHECK(cmd_replay(dir.path / "edited.log", {}, eout, err) == kExitMismatch);
  CHECK(last_json_line(eout.str())["first_divergent_seq"] == seq);

  EventLog truncated;
  for (std::size_t i = 0; i + 3 < log.size(); ++i) truncated.append(log.records()[i]);
  write_log(truncated, dir.path / "truncated.log");
  std::ostringstream tout;
  CHECK(cmd_replay(dir.path / "truncated.log", {}, tout, err) == kExitInputError);

  std::ostringstream sout;
  const auto overridden = cmd_simulate({config, trace, dir.path / "c", 99}, {true}, sout, err);
  CHECK(overridden.log_path.filename() == "1-99.log");
  CHECK(sout.str().find("final points") == std::string::npos);
}

TEST_CASE("simulate input errors exit 2") {
  TempDir dir("focusloop_cmd_err");
  const auto config = write_config(dir.path);
  std::ostringstream out, err;
  CHECK(cmd_simulate({config, dir.path / "missing.csv", dir.path, std::nullopt}, {}, out, err).exit_code ==
        kExitInputError);
  const auto bad_trace = write_file(dir.path / "bad.csv", "100,keypress\n200,wiggle\n");
  CHECK(cmd_simulate({config, bad_trace, dir.path, std::nullopt}, {}, out, err).exit_code == kExitInputError);
  CHECK(err.str().find("line 2") != std::string::npos);
  auto j = to_json(SessionConfig{});
  j["age"] = 30;
  const auto bad_config = write_file(dir.path / "bad.json", j.dump());
  std::ostringstream vout;
  CHECK(cmd_simulate({bad_config, bad_trace, dir.path, std::nullopt}, {}, vout, err).exit_code == kExitInputError);
  bool names_age = false;
  const auto verdict = last_json_line(vout.str());
  for (const auto& f : verdict["fields"]) names_age |= f["field"] == "age";
  CHECK(names_age);
  std::ostringstream rout;
  CHECK(cmd_replay(dir.path / "nope.log", {}, rout, err) == kExitInputError);
}

TEST_CASE("score subcommands") {
  TempDir dir("focusloop_cmd_score");
  std::ostringstream err;

  ScoreOptions sus;
  sus.kind = ScoreKind::Sus;
  sus.csv_path = write_file(dir.path / "sus.csv", "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n4,2,4,1,5,2,5,1,4,2\n");
  std::ostringstream out;
  REQUIRE(cmd_score(sus, {}, out, err) == kExitOk);
  CHECK(out.str().find("SUS 85 (Good)") != std::string::npos);
  CHECK(last_json_line(out.str())["mean"] == 85.0);

  ScoreOptions chi;
  chi.kind = ScoreKind::ChiSquare;
  chi.table = true;
  chi.csv_path = write_file(dir.path / "table.csv", "group,yes,no\na,10,10\nb,10,10\n");
  std::ostringstream cout_;
  REQUIRE(cmd_score(chi, {}, cout_, err) == kExitOk);
  CHECK(last_json_line(cout_.str())["chi2"] == 0.0);

  ScoreOptions raw;
  raw.kind = ScoreKind::ChiSquare;
  raw.csv_path = write_file(dir.path / "raw.csv", "sex,answer\nf,yes\nf,yes\nm,no\nm,no\nf,no\nm,yes\n");
  std::ostringstream rout;
  REQUIRE(cmd_score(raw, {}, rout, err) == kExitOk);
  CHECK(last_json_line(rout.str())["df"] == 1);

  ScoreOptions alpha;
  alpha.kind = ScoreKind::Alpha;
  alpha.csv_path = write_file(dir.path / "alpha.csv", "i1,i2\n1,1\n3,3\n4,4\n");
  std::ostringstream aout;
  REQUIRE(cmd_score(alpha, {}, aout, err) == kExitOk);
  CHECK(last_json_line(aout.str())["alpha"].get<double>() == doctest::Approx(1.0));

  ScoreOptions likert = alpha;
  likert.kind = ScoreKind::Likert;
  likert.scale_path = write_file(dir.path / "scale.json", R"({"name":"trust","min":1,"max":5,"reverse":[2]})");
  std::ostringstream lout;
  REQUIRE(cmd_score(likert, {}, lout, err) == kExitOk);
  CHECK(last_json_line(lout.str())["scale"] == "trust");
  CHECK(last_json_line(lout.str())["mean"].get<double>() == doctest::Approx(3.0));

  ScoreOptions wrong = sus;
  wrong.csv_path = write_file(dir.path / "short.csv", "a,b\n1,2\n");
  std::ostringstream wout;
  CHECK(cmd_score(wrong, {}, wout, err) == kExitInputError);
  ScoreOptions range = sus;
  range.csv_path = write_file(dir.path / "range.csv", "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n4,2,4,1,5,2,9,1,4,2\n");
  CHECK(cmd_score(range, {}, wout, err) == kExitInputError);
  CHECK(err.str().find("row1.item7") != std::string::npos);
}
