#include "pda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "pda/errors.hpp"

namespace pda {

std::string_view to_string(TestMethod m) {
  return m == TestMethod::WilcoxonSignedRank ? "WILCOXON_SIGNED_RANK" : "PAIRED_T";
}

std::string_view to_string(Alternative a) {
  switch (a) {
    case Alternative::TwoSided: return "TWO_SIDED";
    case Alternative::Greater: return "GREATER";
    case Alternative::Less: return "LESS";
  }
  return "?";
}

Alternative alternative_from_string(std::string_view s) {
  if (s == "two_sided" || s == "two-sided" || s == "TWO_SIDED") return Alternative::TwoSided;
  if (s == "greater" || s == "GREATER") return Alternative::Greater;
  if (s == "less" || s == "LESS") return Alternative::Less;
  throw ConfigError("unknown alternative '" + std::string(s) + "'");
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> differences(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& [a, b] : pairs) d.push_back(a - b);
  return d;
}

/// Midranks of |d|, doubled so they are integers.
std::vector<std::int64_t> doubled_midranks(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });
  std::vector<std::int64_t> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    // Positions i..j (0-based) share rank ((i+1)+(j+1))/2; doubled: i+j+2.
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = static_cast<std::int64_t>(i + j + 2);
    i = j + 1;
  }
  return ranks;
}

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                Alternative alternative, bool force_normal) {
  std::vector<double> d;
  for (double x : differences(pairs))
    if (x != 0.0) d.push_back(x);
  if (d.empty()) throw DegenerateInputError("wilcoxon: all differences are zero");

  const std::size_t n = d.size();
  const auto ranks2 = doubled_midranks(d);
  std::int64_t w2 = 0;  // doubled W+
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) w2 += ranks2[i];
  const std::int64_t total2 = std::accumulate(ranks2.begin(), ranks2.end(), std::int64_t{0});
  // Under the null, E[2W+] = total2 / 2; compare 4W+ against total2 to stay integral.
  const std::int64_t centred_obs = 2 * w2 - total2;

  TestResult r;
  r.method = TestMethod::WilcoxonSignedRank;
  r.statistic = static_cast<double>(w2) / 2.0;
  r.n = n;
  r.alternative = alternative;

  if (n <= kWilcoxonExactMaxN && !force_normal) {
    r.exact = true;
    // Walk all 2^n sign assignments in Gray-code order, updating W+ by one
    // rank per step.
    const std::uint64_t count = std::uint64_t{1} << n;
    std::uint64_t hits = 0;
    std::uint64_t gray = 0;
    std::int64_t s2 = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
      if (k > 0) {
        const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
        gray ^= std::uint64_t{1} << bit;
        s2 += (gray >> bit & 1) ? ranks2[bit] : -ranks2[bit];
      }
      const std::int64_t centred = 2 * s2 - total2;
      bool extreme = false;
      switch (alternative) {
        case Alternative::Greater: extreme = s2 >= w2; break;
        case Alternative::Less: extreme = s2 <= w2; break;
        case Alternative::TwoSided: extreme = std::llabs(centred) >= std::llabs(centred_obs); break;
      }
      hits += extreme ? 1 : 0;
    }
    r.p_value = clamp_p(static_cast<double>(hits) / static_cast<double>(count));
    return r;
  }

  const double nn = static_cast<double>(n);
  const double mean_w = nn * (nn + 1.0) / 4.0;
  double tie_term = 0.0;
  {
    std::vector<std::int64_t> sorted = ranks2;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  const double var_w = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  const double sd_w = std::sqrt(var_w);
  const double w = r.statistic;
  switch (alternative) {
    case Alternative::Greater: r.p_value = 1.0 - normal_cdf((w - mean_w - 0.5) / sd_w); break;
    case Alternative::Less: r.p_value = normal_cdf((w - mean_w + 0.5) / sd_w); break;
    case Alternative::TwoSided: {
      const double z = (std::abs(w - mean_w) - 0.5) / sd_w;
      r.p_value = 2.0 * (1.0 - normal_cdf(z));
      break;
    }
  }
  r.p_value = clamp_p(r.p_value);
  r.exact = false;
  return r;
}

double student_t_sf(double t, double dof) {
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * boost::math::ibeta(dof / 2.0, 0.5, x);
  return t >= 0 ? tail : 1.0 - tail;
}

TestResult paired_t_test(std::span<const std::pair<double, double>> pairs,
                         Alternative alternative) {
  if (pairs.size() < 2) throw ContractViolation("paired t-test needs at least two pairs");
  const auto d = differences(pairs);
  const double sd = sample_sd(d);
  if (!(sd > 0.0)) throw DegenerateInputError("paired t-test: differences have zero variance");

  const double n = static_cast<double>(d.size());
  const double t = mean(d) / (sd / std::sqrt(n));
  const double dof = n - 1.0;

  TestResult r;
  r.method = TestMethod::PairedT;
  r.statistic = t;
  r.n = d.size();
  r.alternative = alternative;
  r.exact = false;
  switch (alternative) {
    case Alternative::Greater: r.p_value = student_t_sf(t, dof); break;
    case Alternative::Less: r.p_value = student_t_sf(-t, dof); break;
    case Alternative::TwoSided: r.p_value = 2.0 * student_t_sf(std::abs(t), dof); break;
  }
  r.p_value = clamp_p(r.p_value);
  return r;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace pda
