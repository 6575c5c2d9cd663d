#include "pda/health.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pda/errors.hpp"

namespace pda {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double sum(const SegmentVector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

void M2MmTable::set(std::string motion, SegmentVector increments, std::string note) {
  for (double v : increments) {
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError("M2Mm row '" + motion + "' has a negative or non-finite increment");
  }
  rows_[std::move(motion)] = Row{increments, std::move(note)};
}

bool M2MmTable::contains(std::string_view motion) const { return rows_.find(motion) != rows_.end(); }

const M2MmTable::Row& M2MmTable::row(std::string_view motion) const {
  const auto it = rows_.find(motion);
  if (it == rows_.end()) throw LookupError("unknown motion '" + std::string(motion) + "'");
  return it->second;
}

const SegmentVector& M2MmTable::increments(std::string_view motion) const {
  return row(motion).increments;
}

std::vector<std::string> M2MmTable::motions() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& [name, row] : rows_) out.push_back(name);
  return out;
}

M2MmTable M2MmTable::parse_csv(std::istream& in, std::string_view source) {
  const std::string where(source);
  M2MmTable table;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_csv_line(t);
    if (!header_seen) {
      if (fields.size() < 5 || fields[0] != "motion" || fields[1] != "right_arm" ||
          fields[2] != "left_arm" || fields[3] != "right_leg" || fields[4] != "left_leg")
        throw ConfigError(where + ": expected header motion,right_arm,left_arm,right_leg,left_leg");
      header_seen = true;
      continue;
    }
    if (fields.size() < 5)
      throw ConfigError(where + ":" + std::to_string(line_no) + ": expected at least 5 fields");
    SegmentVector inc{};
    for (std::size_t i = 0; i < 4; ++i) {
      try {
        std::size_t used = 0;
        inc[i] = std::stod(fields[i + 1], &used);
        if (used != fields[i + 1].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError(where + ":" + std::to_string(line_no) + ": bad number '" +
                          fields[i + 1] + "'");
      }
    }
    if (table.contains(fields[0]))
      throw ConfigError(where + ":" + std::to_string(line_no) + ": duplicate motion '" +
                        fields[0] + "'");
    table.set(fields[0], inc, fields.size() > 5 ? fields[5] : std::string{});
  }
  if (!header_seen) throw ConfigError(where + ": empty M2Mm table");
  return table;
}

M2MmTable M2MmTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open M2Mm table " + path.string());
  return parse_csv(in, path.string());
}

const MotionFitness& FitnessTable::at(std::string_view motion) const {
  for (std::size_t i = 0; i < motions.size(); ++i)
    if (motions[i] == motion) return values[i];
  throw LookupError("motion '" + std::string(motion) + "' not in fitness table");
}

SegmentMomenta accumulate(const SegmentMomenta& momenta, std::string_view motion,
                          const M2MmTable& table) {
  const auto& mm = table.increments(motion);
  return {momenta.right_arm + mm[0], momenta.left_arm + mm[1], momenta.right_leg + mm[2],
          momenta.left_leg + mm[3]};
}

SegmentVector expected_momenta(const SegmentMomenta& m) {
  const double arm = std::max(m.right_arm, m.left_arm);
  const double leg = std::max(m.right_leg, m.left_leg);
  return {arm, arm, leg, leg};
}

SegmentVector gaps(const SegmentMomenta& momenta) {
  const auto em = expected_momenta(momenta);
  const auto am = momenta.as_vector();
  SegmentVector gap{};
  for (std::size_t s = 0; s < 4; ++s) gap[s] = em[s] - am[s];
  return gap;
}

double balancedness(const SegmentMomenta& momenta) { return snapshot(momenta).bal; }

HealthSnapshot snapshot(const SegmentMomenta& momenta) {
  HealthSnapshot h;
  h.em = expected_momenta(momenta);
  h.gap = gaps(momenta);
  const double em_total = sum(h.em);
  h.bal = em_total > 0.0 ? 1.0 - 2.0 * sum(h.gap) / em_total : 1.0;
  // Rounding can nudge a mathematically bounded value past the ends.
  h.bal = std::clamp(h.bal, 0.0, 1.0);
  return h;
}

double dec(const SegmentMomenta& momenta, std::string_view motion, const M2MmTable& table) {
  const auto& mm = table.increments(motion);
  const auto gap = gaps(momenta);
  double before = 0.0;
  double after = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    before += gap[s];
    after += std::abs(gap[s] - mm[s]);
  }
  return before - after;
}

std::vector<double> normalize_fitness(std::span<const double> dec_values) {
  if (dec_values.empty()) throw ContractViolation("fbal: empty motion set");
  const auto [lo, hi] = std::minmax_element(dec_values.begin(), dec_values.end());
  const double dec_min = *lo;
  const double dec_max = *hi;
  std::vector<double> out;
  out.reserve(dec_values.size());
  for (double d : dec_values)
    out.push_back(dec_max > dec_min ? (d - dec_min) / (dec_max - dec_min) : 0.5);
  return out;
}

FitnessTable fbal(const SegmentMomenta& momenta, std::span<const std::string> motions,
                  const M2MmTable& table) {
  if (motions.empty()) throw ContractViolation("fbal: empty motion set");
  FitnessTable out;
  out.motions.assign(motions.begin(), motions.end());
  std::vector<double> decs;
  decs.reserve(motions.size());
  for (const auto& m : motions) decs.push_back(dec(momenta, m, table));
  const auto normalized = normalize_fitness(decs);
  out.dec_min = *std::min_element(decs.begin(), decs.end());
  out.dec_max = *std::max_element(decs.begin(), decs.end());
  for (std::size_t i = 0; i < decs.size(); ++i) out.values.push_back({decs[i], normalized[i]});
  return out;
}

}  // namespace pda
