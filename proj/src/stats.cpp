#include "focusloop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "focusloop/errors.hpp"

namespace focusloop::stats {

double sus_score(const SusResponse& resp) {
  std::vector<FieldError> errs;
  int sum = 0;
  for (std::size_t i = 0; i < resp.items.size(); ++i) {
    const int v = resp.items[i];
    if (v < 1 || v > 5) {
      errs.push_back({"item" + std::to_string(i + 1), "must be between 1 and 5"});
      continue;
    }
    // Item i is 0-based here, so even indices are the odd-numbered items.
    sum += (i % 2 == 0) ? (v - 1) : (5 - v);
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return 2.5 * sum;
}

double sus_score(const std::vector<int>& items) {
  if (items.size() != 10) throw ValidationError(FieldErrors{{"items", "SUS needs exactly 10 items"}});
  SusResponse r;
  std::copy(items.begin(), items.end(), r.items.begin());
  return sus_score(r);
}

std::string_view to_string(SusBand b) {
  switch (b) {
    case SusBand::WorstImaginable: return "WorstImaginable";
    case SusBand::Poor: return "Poor";
    case SusBand::OK: return "OK";
    case SusBand::Good: return "Good";
    case SusBand::Excellent: return "Excellent";
    case SusBand::BestImaginable: return "BestImaginable";
  }
  return "?";
}

SusBand sus_band(double score, const SusBandEdges& e) {
  if (score >= e.best) return SusBand::BestImaginable;
  if (score >= e.excellent) return SusBand::Excellent;
  if (score >= e.good) return SusBand::Good;
  if (score >= e.ok) return SusBand::OK;
  if (score >= e.poor) return SusBand::Poor;
  return SusBand::WorstImaginable;
}

LikertScale recoded(const LikertScale& scale) {
  const std::size_t k = scale.item_count();
  if (!scale.reverse_coded.empty() && scale.reverse_coded.size() != k) {
    throw ValidationError(FieldErrors{{"reverse_coded", "needs one flag per item"}});
  }
  LikertScale out = scale;
  for (std::size_t r = 0; r < out.items.size(); ++r) {
    auto& row = out.items[r];
    if (row.size() != k) throw ValidationError(FieldErrors{{"items", "row " + std::to_string(r + 1) + " has a different item count"}});
    for (std::size_t i = 0; i < k; ++i) {
      double& v = row[i];
      if (!std::isfinite(v) || v < scale.min_value || v > scale.max_value) {
        throw ValidationError(FieldErrors{{"items", "value out of range in row " + std::to_string(r + 1) + ", item " +
                                             std::to_string(i + 1)}});
      }
      if (!scale.reverse_coded.empty() && scale.reverse_coded[i]) v = scale.min_value + scale.max_value - v;
    }
  }
  out.reverse_coded.assign(k, false);
  return out;
}

double sample_variance(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / (n - 1.0);
}

double cronbach_alpha(const LikertScale& scale) {
  const std::size_t k = scale.item_count();
  if (k < 2) throw ValidationError(FieldErrors{{"items", "Cronbach's alpha needs at least 2 items"}});
  if (scale.respondents() < 2) throw ValidationError(FieldErrors{{"items", "Cronbach's alpha needs at least 2 respondents"}});
  const LikertScale s = recoded(scale);

  double item_var_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> column;
    for (const auto& row : s.items) column.push_back(row[i]);
    item_var_sum += sample_variance(column);
  }
  std::vector<double> totals;
  for (const auto& row : s.items) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  const double total_var = sample_variance(totals);
  if (total_var == 0.0) throw UndefinedStatistic("Cronbach's alpha undefined: total score variance is zero");
  const double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - item_var_sum / total_var);
}

Descriptives likert_descriptives(const LikertScale& scale) {
  if (scale.respondents() == 0 || scale.item_count() == 0) {
    throw ValidationError(FieldErrors{{"items", "scale has no responses"}});
  }
  const LikertScale s = recoded(scale);
  std::vector<double> scores;
  for (const auto& row : s.items) {
    scores.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
  }
  Descriptives d;
  d.n = scores.size();
  d.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(d.n);
  if (d.n >= 2) d.sd = std::sqrt(sample_variance(scores));
  return d;
}

ChiSquareResult chi_square(const ContingencyTable& table) {
  const auto& obs = table.counts;
  const std::size_t r = obs.size();
  const std::size_t c = r ? obs.front().size() : 0;
  if (r < 2 || c < 2) throw ValidationError(FieldErrors{{"counts", "table must be at least 2x2"}});

  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    if (obs[i].size() != c) throw ValidationError(FieldErrors{{"counts", "ragged table"}});
    for (std::size_t j = 0; j < c; ++j) {
      if (obs[i][j] < 0) throw ValidationError(FieldErrors{{"counts", "negative count"}});
      row_sum[i] += static_cast<double>(obs[i][j]);
      col_sum[j] += static_cast<double>(obs[i][j]);
      n += static_cast<double>(obs[i][j]);
    }
  }
  std::vector<FieldError> errs;
  for (std::size_t i = 0; i < r; ++i)
    if (row_sum[i] == 0.0) errs.push_back({"row " + std::to_string(i + 1), "zero marginal"});
  for (std::size_t j = 0; j < c; ++j)
    if (col_sum[j] == 0.0) errs.push_back({"column " + std::to_string(j + 1), "zero marginal"});
  if (!errs.empty()) throw ValidationError(std::move(errs));

  ChiSquareResult res;
  res.n = static_cast<long>(n);
  res.df = static_cast<int>((r - 1) * (c - 1));
  res.expected.assign(r, std::vector<double>(c, 0.0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row_sum[i] * col_sum[j] / n;
      res.expected[i][j] = e;
      if (e < 5.0) res.low_expected_count = true;
      const double d = static_cast<double>(obs[i][j]) - e;
      res.chi2 += d * d / e;
    }
  }
  res.p_value = chi_square_sf(res.chi2, res.df);
  const double m = static_cast<double>(std::min(r, c) - 1);
  res.cramers_v = std::min(1.0, std::sqrt(res.chi2 / (n * m)));
  return res;
}

ContingencyTable cross_tabulate(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) throw ValidationError(FieldErrors{{"columns", "columns differ in length"}});
  std::set<std::string> ra(a.begin(), a.end()), cb(b.begin(), b.end());
  ContingencyTable t;
  t.row_labels.assign(ra.begin(), ra.end());
  t.col_labels.assign(cb.begin(), cb.end());
  std::map<std::string, std::size_t> ri, ci;
  for (std::size_t i = 0; i < t.row_labels.size(); ++i) ri[t.row_labels[i]] = i;
  for (std::size_t j = 0; j < t.col_labels.size(); ++j) ci[t.col_labels[j]] = j;
  t.counts.assign(t.row_labels.size(), std::vector<long>(t.col_labels.size(), 0));
  for (std::size_t k = 0; k < a.size(); ++k) ++t.counts[ri[a[k]]][ci[b[k]]];
  return t;
}

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;

double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("regularized gamma needs a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("regularized gamma needs a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chi_square_sf(double chi2, int df) {
  if (df < 1) throw std::domain_error("chi-square needs df >= 1");
  if (chi2 <= 0.0) return 1.0;
  return std::clamp(regularized_gamma_q(0.5 * df, 0.5 * chi2), 0.0, 1.0);
}

}  // namespace focusloop::stats
