#pragma once

// Paired two-sample tests on (a, b) pairs; differences are a - b and the
// one-sided alternatives are stated for a relative to b.

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace pda {

enum class TestMethod { WilcoxonSignedRank, PairedT };
enum class Alternative { TwoSided, Greater, Less };

std::string_view to_string(TestMethod m);
std::string_view to_string(Alternative a);
/// Accepts "two_sided"/"two-sided", "greater", "less". Throws ConfigError.
Alternative alternative_from_string(std::string_view s);

struct TestResult {
  TestMethod method = TestMethod::WilcoxonSignedRank;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Alternative alternative = Alternative::TwoSided;
  bool exact = false;
};

using Pairs = std::vector<std::pair<double, double>>;

/// Largest n for which the signed-rank null distribution is enumerated.
inline constexpr std::size_t kWilcoxonExactMaxN = 20;

/// Signed-rank test. Zero differences are dropped, tied magnitudes get
/// midranks, and the statistic is the positive rank sum W+. With at most
/// kWilcoxonExactMaxN nonzero differences every sign assignment is
/// enumerated; larger samples use the tie-corrected normal approximation
/// with continuity correction (or force it with `force_normal`).
/// Throws DegenerateInputError when every difference is zero.
TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                Alternative alternative, bool force_normal = false);

/// Student t on the differences with n - 1 degrees of freedom.
/// Throws ContractViolation for n < 2 and DegenerateInputError for
/// constant differences.
TestResult paired_t_test(std::span<const std::pair<double, double>> pairs,
                         Alternative alternative);

/// Upper tail P(T > t) of Student's t via the regularized incomplete beta.
double student_t_sf(double t, double dof);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

}  // namespace pda
