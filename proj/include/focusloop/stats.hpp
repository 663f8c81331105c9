#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace focusloop::stats {

// ---------------------------------------------------------------------------
// System Usability Scale
//
// Ten items answered on 1..5. Odd items are positively worded, even items
// negatively; the score is 2.5 * (sum(odd - 1) + sum(5 - even)) in [0, 100].
// ---------------------------------------------------------------------------

struct SusResponse {
  std::array<int, 10> items{};
};

// Throws ValidationError if any item lies outside 1..5.
double sus_score(const SusResponse& resp);
double sus_score(const std::vector<int>& items);

enum class SusBand { WorstImaginable, Poor, OK, Good, Excellent, BestImaginable };

std::string_view to_string(SusBand b);

// Lower edges of Poor, OK, Good, Excellent and BestImaginable.
struct SusBandEdges {
  double poor = 25.0;
  double ok = 50.9;
  double good = 71.0;
  double excellent = 85.5;
  double best = 90.9;
};

SusBand sus_band(double score, const SusBandEdges& edges = {});

// ---------------------------------------------------------------------------
// Likert scales
// ---------------------------------------------------------------------------

struct LikertScale {
  std::string name;
  int min_value = 1;
  int max_value = 7;
  std::vector<std::vector<double>> items;  // respondents x k
  std::vector<bool> reverse_coded;         // per item; empty means none

  std::size_t respondents() const { return items.size(); }
  std::size_t item_count() const { return items.empty() ? 0 : items.front().size(); }
};

// Returns a copy with reverse-coded items mapped v -> min + max - v. Throws
// ValidationError on ragged rows or out-of-range values.
LikertScale recoded(const LikertScale& scale);

// alpha = k/(k-1) * (1 - sum of item variances / variance of row totals),
// sample variances (n-1). Throws ValidationError for k < 2 or fewer than two
// respondents, UndefinedStatistic when the total variance is zero.
double cronbach_alpha(const LikertScale& scale);

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // undefined for a single respondent
};

// Respondent score = mean of the recoded items; returns mean and sample SD of
// those scores. Throws ValidationError for an empty scale.
Descriptives likert_descriptives(const LikertScale& scale);

double sample_variance(const std::vector<double>& xs);

// ---------------------------------------------------------------------------
// Chi-square test of association
// ---------------------------------------------------------------------------

struct ContingencyTable {
  std::vector<std::vector<long>> counts;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

struct ChiSquareResult {
  double chi2 = 0.0;
  int df = 0;
  double p_value = 1.0;
  double cramers_v = 0.0;
  long n = 0;
  bool low_expected_count = false;  // some expected cell < 5
  std::vector<std::vector<double>> expected;
};

// Throws ValidationError for tables smaller than 2x2, negative counts, ragged
// rows, or a zero row/column marginal.
ChiSquareResult chi_square(const ContingencyTable& table);

// Cross-tabulates two categorical columns into a table, labels sorted.
ContingencyTable cross_tabulate(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Regularized gamma functions P(a, x) and Q(a, x) = 1 - P(a, x), evaluated by
// series for x < a + 1 and by continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Upper tail probability of the chi-square distribution.
double chi_square_sf(double chi2, int df);

}  // namespace focusloop::stats
