#include "focusloop/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "focusloop/csv.hpp"
#include "focusloop/errors.hpp"
#include "focusloop/event_log.hpp"
#include "focusloop/replay.hpp"
#include "focusloop/report.hpp"
#include "focusloop/session.hpp"
#include "focusloop/stats.hpp"
#include "focusloop/trace.hpp"

namespace focusloop {

namespace {

using nlohmann::json;

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void emit_json(std::ostream& out, json j) { out << j.dump() << "\n"; }

// Runs body and maps every input-side failure to exit code 2 with a
// diagnostic on err and a JSON line on out.
template <typename F>
int guarded(const char* command, std::ostream& out, std::ostream& err, F&& body) {
  auto fail = [&](const std::string& msg, json fields = nullptr) {
    err << command << ": " << msg << "\n";
    json j = {{"command", command}, {"exit", kExitInputError}, {"error", msg}};
    if (!fields.is_null()) j["fields"] = std::move(fields);
    emit_json(out, std::move(j));
    return kExitInputError;
  };
  try {
    return body();
  } catch (const ValidationError& e) {
    json fields = json::array();
    for (const auto& f : e.errors()) {
      err << command << ": " << f.field << ": " << f.message << "\n";
      fields.push_back({{"field", f.field}, {"message", f.message}});
    }
    return fail("validation failed", std::move(fields));
  } catch (const InputRejected& e) {
    return fail(e.what());
  } catch (const ConfigError& e) {
    return fail(e.what());
  } catch (const CorruptLog& e) {
    return fail(std::string("corrupt log: ") + e.what());
  } catch (const InvalidLog& e) {
    return fail(std::string("invalid log: ") + e.what());
  } catch (const UndefinedStatistic& e) {
    return fail(std::string("undefined: ") + e.what());
  } catch (const json::exception& e) {
    return fail(std::string("malformed JSON: ") + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(e.what());
  }
}

double parse_number(const std::string& s, std::size_t row, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw InputRejected("row " + std::to_string(row) + ", column '" + column + "': '" + s + "' is not a number");
  }
  return v;
}

long parse_count(const std::string& s, std::size_t row, const std::string& column) {
  const double v = parse_number(s, row, column);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw InputRejected("row " + std::to_string(row) + ", column '" + column + "': counts must be integers");
  return static_cast<long>(v);
}

std::vector<std::vector<double>> numeric_rows(const csv::Table& t) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < t.header.size(); ++c) row.push_back(parse_number(t.rows[r][c], r + 1, t.header[c]));
    rows.push_back(std::move(row));
  }
  return rows;
}

stats::LikertScale likert_from(const ScoreOptions& opt, const csv::Table& t) {
  stats::LikertScale s;
  s.name = opt.csv_path.stem().string();
  s.min_value = opt.min_value;
  s.max_value = opt.max_value;
  std::vector<int> reverse = opt.reverse_items;
  if (opt.scale_path) {
    std::ifstream in(*opt.scale_path);
    if (!in) throw InputRejected("cannot open scale file " + opt.scale_path->string());
    const json j = json::parse(in);
    s.name = j.value("name", s.name);
    s.min_value = j.value("min", s.min_value);
    s.max_value = j.value("max", s.max_value);
    if (j.contains("reverse")) reverse = j.at("reverse").get<std::vector<int>>();
  }
  if (s.min_value >= s.max_value) throw ValidationError(FieldErrors{{"min", "must be below max"}});
  s.items = numeric_rows(t);
  if (!reverse.empty()) {
    s.reverse_coded.assign(t.header.size(), false);
    for (int i : reverse) {
      if (i < 1 || i > static_cast<int>(t.header.size()))
        throw ValidationError(FieldErrors{{"reverse", "item " + std::to_string(i) + " does not exist"}});
      s.reverse_coded[static_cast<std::size_t>(i - 1)] = true;
    }
  }
  return s;
}

int score_sus(const csv::Table& t, const OutputOptions& o, std::ostream& out) {
  if (t.header.size() != 10) throw InputRejected("SUS input needs exactly 10 item columns");
  if (t.rows.empty()) throw InputRejected("SUS input has no responses");
  json scores = json::array(), bands = json::array();
  double sum = 0.0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<int> items;
    for (std::size_t c = 0; c < 10; ++c) items.push_back(static_cast<int>(parse_count(t.rows[r][c], r + 1, t.header[c])));
    double score = 0.0;
    try {
      score = stats::sus_score(items);
    } catch (const ValidationError& e) {
      FieldErrors prefixed;
      for (const auto& f : e.errors()) prefixed.push_back({"row" + std::to_string(r + 1) + "." + f.field, f.message});
      throw ValidationError(prefixed);
    }
    const auto band = stats::sus_band(score);
    if (!o.quiet) out << "respondent " << r + 1 << ": SUS " << fmt(score) << " (" << stats::to_string(band) << ")\n";
    scores.push_back(score);
    bands.push_back(stats::to_string(band));
    sum += score;
  }
  const double mean = sum / static_cast<double>(t.rows.size());
  const auto mean_band = stats::sus_band(mean);
  if (!o.quiet) out << "mean SUS " << fmt(mean) << " (" << stats::to_string(mean_band) << "), n=" << t.rows.size() << "\n";
  emit_json(out, {{"command", "score"},
                  {"exit", kExitOk},
                  {"kind", "sus"},
                  {"scores", scores},
                  {"bands", bands},
                  {"mean", mean},
                  {"mean_band", stats::to_string(mean_band)},
                  {"n", t.rows.size()}});
  return kExitOk;
}

int score_alpha(const ScoreOptions& opt, const csv::Table& t, const OutputOptions& o, std::ostream& out) {
  const auto scale = likert_from(opt, t);
  const double alpha = stats::cronbach_alpha(scale);
  if (!o.quiet)
    out << "Cronbach's alpha (" << scale.name << ", k=" << scale.item_count() << ", n=" << scale.respondents()
        << "): " << fmt(alpha) << "\n";
  emit_json(out, {{"command", "score"},
                  {"exit", kExitOk},
                  {"kind", "alpha"},
                  {"scale", scale.name},
                  {"alpha", alpha},
                  {"k", scale.item_count()},
                  {"n", scale.respondents()}});
  return kExitOk;
}

int score_likert(const ScoreOptions& opt, const csv::Table& t, const OutputOptions& o, std::ostream& out) {
  const auto scale = likert_from(opt, t);
  const auto d = stats::likert_descriptives(scale);
  json alpha = nullptr;
  try {
    alpha = stats::cronbach_alpha(scale);
  } catch (const UndefinedStatistic&) {
  } catch (const ValidationError&) {
  }
  if (!o.quiet) {
    out << scale.name << ": n=" << d.n << ", mean " << fmt(d.mean) << ", SD "
        << (d.sd ? fmt(*d.sd) : std::string("undefined")) << ", alpha "
        << (alpha.is_null() ? std::string("undefined") : fmt(alpha.get<double>())) << "\n";
  }
  emit_json(out, {{"command", "score"},
                  {"exit", kExitOk},
                  {"kind", "likert"},
                  {"scale", scale.name},
                  {"n", d.n},
                  {"mean", d.mean},
                  {"sd", d.sd ? json(*d.sd) : json(nullptr)},
                  {"alpha", alpha}});
  return kExitOk;
}

stats::ContingencyTable table_from(const ScoreOptions& opt, const csv::Table& t) {
  stats::ContingencyTable table;
  if (opt.table) {
    if (t.header.size() < 3) throw InputRejected("contingency table needs a label column and at least 2 count columns");
    table.col_labels.assign(t.header.begin() + 1, t.header.end());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      table.row_labels.push_back(t.rows[r][0]);
      std::vector<long> counts;
      for (std::size_t c = 1; c < t.header.size(); ++c) counts.push_back(parse_count(t.rows[r][c], r + 1, t.header[c]));
      table.counts.push_back(std::move(counts));
    }
    return table;
  }
  std::size_t a = 0, b = 1;
  if (!opt.columns.empty()) {
    if (opt.columns.size() != 2) throw InputRejected("--columns needs exactly two names");
    auto index_of = [&](const std::string& name) {
      for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
      throw InputRejected("no column named '" + name + "'");
    };
    a = index_of(opt.columns[0]);
    b = index_of(opt.columns[1]);
  } else if (t.header.size() < 2) {
    throw InputRejected("chi-square input needs two categorical columns");
  }
  std::vector<std::string> xs, ys;
  for (const auto& row : t.rows) {
    xs.push_back(row[a]);
    ys.push_back(row[b]);
  }
  return stats::cross_tabulate(xs, ys);
}

int score_chisq(const ScoreOptions& opt, const csv::Table& t, const OutputOptions& o, std::ostream& out) {
  const auto table = table_from(opt, t);
  const auto r = stats::chi_square(table);
  if (!o.quiet) {
    out << "chi2(" << r.df << ", N=" << r.n << ") = " << fmt(r.chi2, 6) << ", p = " << fmt(r.p_value, 4)
        << ", Cramer's V = " << fmt(r.cramers_v, 4) << "\n";
    if (r.low_expected_count) out << "note: some expected counts are below 5\n";
  }
  emit_json(out, {{"command", "score"},
                  {"exit", kExitOk},
                  {"kind", "chisq"},
                  {"chi2", r.chi2},
                  {"df", r.df},
                  {"p", r.p_value},
                  {"cramers_v", r.cramers_v},
                  {"n", r.n},
                  {"low_expected_count", r.low_expected_count},
                  {"rows", table.row_labels},
                  {"cols", table.col_labels},
                  {"counts", table.counts}});
  return kExitOk;
}

}  // namespace

SimulateOutcome cmd_simulate(const SimulateOptions& opt, const OutputOptions& out_opt, std::ostream& out,
                             std::ostream& err) {
  SimulateOutcome outcome;
  outcome.exit_code = guarded("simulate", out, err, [&] {
    SessionConfig config = load_config(opt.config_path.string());
    if (opt.seed_override) config.seed = *opt.seed_override;
    auto inputs = load_trace(opt.trace_path);
    const EventLog log = run_session(config, std::move(inputs));

    outcome.log_path = log_path(opt.out_dir, config.child_id, config.session_id, config.seed);
    std::filesystem::create_directories(outcome.log_path.parent_path());
    write_log(log, outcome.log_path);

    const auto report = build_report(log);
    json line = {{"command", "simulate"},
                 {"exit", kExitOk},
                 {"log", outcome.log_path.string()},
                 {"final_points", report.final_points},
                 {"attention_ratio", report.attention_ratio}};
    if (config.report_enabled) {
      outcome.report_json = outcome.log_path;
      outcome.report_json.replace_extension(".report.json");
      outcome.report_text = outcome.log_path;
      outcome.report_text.replace_extension(".report.txt");
      std::ofstream(outcome.report_json) << to_json(report).dump(2) << "\n";
      std::ofstream(outcome.report_text) << to_text(report);
      line["report"] = outcome.report_json.string();
    }
    if (!out_opt.quiet) {
      out << "log written to " << outcome.log_path.string() << "\n";
      out << "final points: " << report.final_points << "\n";
      out << "attention ratio: " << fmt(report.attention_ratio) << "\n";
    }
    emit_json(out, std::move(line));
    return kExitOk;
  });
  return outcome;
}

int cmd_replay(const std::filesystem::path& path, const OutputOptions& out_opt, std::ostream& out, std::ostream& err) {
  return guarded("replay", out, err, [&] {
    if (!std::filesystem::exists(path)) throw InputRejected("no such log: " + path.string());
    const auto log = read_log(path);
    const auto res = replay_verify(log);
    if (res.match) {
      if (!out_opt.quiet) out << "replay matches: " << log.size() << " records\n";
      emit_json(out, {{"command", "replay"}, {"exit", kExitOk}, {"match", true}, {"records", log.size()}});
      return kExitOk;
    }
    err << "replay mismatch at seq " << *res.first_divergent_seq << "\n" << res.detail << "\n";
    emit_json(out, {{"command", "replay"},
                    {"exit", kExitMismatch},
                    {"match", false},
                    {"first_divergent_seq", *res.first_divergent_seq}});
    return kExitMismatch;
  });
}

int cmd_score(const ScoreOptions& opt, const OutputOptions& out_opt, std::ostream& out, std::ostream& err) {
  return guarded("score", out, err, [&] {
    const auto table = csv::read_file(opt.csv_path.string());
    switch (opt.kind) {
      case ScoreKind::Sus: return score_sus(table, out_opt, out);
      case ScoreKind::Alpha: return score_alpha(opt, table, out_opt, out);
      case ScoreKind::Likert: return score_likert(opt, table, out_opt, out);
      case ScoreKind::ChiSquare: return score_chisq(opt, table, out_opt, out);
    }
    return kExitInputError;
  });
}

int cmd_synth_trace(const std::filesystem::path& config_path, const std::filesystem::path& trace_path,
                    std::uint64_t trace_seed, std::optional<std::uint64_t> seed_override, std::ostream& err) {
  std::ostringstream sink;
  return guarded("synth-trace", sink, err, [&] {
    SessionConfig config = load_config(config_path.string());
    if (seed_override) config.seed = *seed_override;
    RandomStream rng(trace_seed, "trace");
    const auto trace = markov_trace(plan_session(config), {}, rng);
    if (trace_path.has_parent_path()) std::filesystem::create_directories(trace_path.parent_path());
    std::ofstream f(trace_path);
    if (!f) throw InputRejected("cannot write " + trace_path.string());
    f << format_trace(trace);
    return kExitOk;
  });
}

}  // namespace focusloop
