#pragma once

// Body-segment health metrics: momentum accumulation from motions,
// balancedness of left/right segment use, and the balancedness fitness
// that ranks candidate motions by how much they would close the gaps.

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pda {

/// Segment order used by every 4-vector in this module.
enum class Segment : std::size_t { RightArm = 0, LeftArm = 1, RightLeg = 2, LeftLeg = 3 };

using SegmentVector = std::array<double, 4>;

/// Accumulated momentum am_s of the four segments since the round began.
struct SegmentMomenta {
  double right_arm = 0.0;
  double left_arm = 0.0;
  double right_leg = 0.0;
  double left_leg = 0.0;

  SegmentVector as_vector() const { return {right_arm, left_arm, right_leg, left_leg}; }
  static SegmentMomenta from_vector(const SegmentVector& v) { return {v[0], v[1], v[2], v[3]}; }

  bool operator==(const SegmentMomenta&) const = default;
};

/// Motion to per-segment momentum increments mm_s(x).
class M2MmTable {
 public:
  struct Row {
    SegmentVector increments{};
    std::string note;  // free-text provenance column, may be empty
  };

  M2MmTable() = default;

  /// Inserts or replaces a row; increments must be finite and nonnegative.
  void set(std::string motion, SegmentVector increments, std::string note = {});

  bool contains(std::string_view motion) const;
  /// Throws LookupError for unknown motions.
  const SegmentVector& increments(std::string_view motion) const;
  const Row& row(std::string_view motion) const;

  std::vector<std::string> motions() const;
  std::size_t size() const { return rows_.size(); }

  /// CSV with header `motion,right_arm,left_arm,right_leg,left_leg[,note]`.
  /// Lines starting with '#' and blank lines are skipped.
  static M2MmTable parse_csv(std::istream& in, std::string_view source = "<stream>");
  static M2MmTable load_csv(const std::filesystem::path& path);

 private:
  std::map<std::string, Row, std::less<>> rows_;
};

struct HealthSnapshot {
  SegmentVector em{};
  SegmentVector gap{};
  double bal = 1.0;
};

struct MotionFitness {
  double dec = 0.0;
  double f_bal = 0.0;
};

/// dec and normalized F_Bal for a candidate motion set, in the given order.
struct FitnessTable {
  std::vector<std::string> motions;
  std::vector<MotionFitness> values;
  double dec_min = 0.0;
  double dec_max = 0.0;

  /// Throws LookupError when the motion was not part of the evaluated set.
  const MotionFitness& at(std::string_view motion) const;
};

SegmentMomenta accumulate(const SegmentMomenta& momenta, std::string_view motion,
                          const M2MmTable& table);

/// em: each segment of a left/right pair expects the larger of the pair.
SegmentVector expected_momenta(const SegmentMomenta& momenta);

/// gap_s = em_s - am_s.
SegmentVector gaps(const SegmentMomenta& momenta);

/// Bal = 1 - 2 * sum(gap) / sum(em); 1 when nothing has moved yet.
double balancedness(const SegmentMomenta& momenta);

HealthSnapshot snapshot(const SegmentMomenta& momenta);

/// Predicted decrease of the total gap if `motion` were performed, with the
/// current expected momenta held fixed.
double dec(const SegmentMomenta& momenta, std::string_view motion, const M2MmTable& table);

/// Min-max normalization of dec over `motions`. All motions share 0.5 when
/// their dec values coincide. Throws ContractViolation on an empty set.
FitnessTable fbal(const SegmentMomenta& momenta, std::span<const std::string> motions,
                  const M2MmTable& table);

/// The normalization step alone, exposed for callers holding raw dec values.
std::vector<double> normalize_fitness(std::span<const double> dec_values);

}  // namespace pda
