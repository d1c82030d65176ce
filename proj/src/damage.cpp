#include "subvarx/damage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "subvarx/detail/digest.hpp"
#include "subvarx/errors.hpp"

namespace subvarx {

namespace {

constexpr double baseline_floor = 1e-12;
constexpr double threshold_floor = 1e-6;
constexpr int min_calibration_runs = 10;

double tracked_value(const VarxModel &model, const ElementId &element) {
  if (element.block == CoefBlock::b1)
    return model.b1(element.row - 1, element.col - 1);
  const double raw = model.a1(element.row - 1, element.col - 1);
  return element.row == element.col ? 2.0 - raw : raw;
}

} // namespace

std::string element_name(const ElementId &element) {
  const char *block = element.block == CoefBlock::a1 ? "A1" : "B1";
  return std::string(block) + "(" + std::to_string(element.row) + "," + std::to_string(element.col) + ")";
}

ElementId parse_element_name(const std::string &name) {
  ElementId element;
  int row = 0;
  int col = 0;
  char block = 0;
  if (std::sscanf(name.c_str(), "%c1(%d,%d)", &block, &row, &col) != 3 || (block != 'A' && block != 'B') ||
      row < 1 || col < 1)
    throw InvalidSpec("malformed element name '" + name + "', expected e.g. A1(1,2)");
  element.block = block == 'A' ? CoefBlock::a1 : CoefBlock::b1;
  element.row = row;
  element.col = col;
  return element;
}

TrackedElements TrackedElements::for_dimension(int q) {
  if (q < 1)
    throw DimensionMismatch("model dimension must be >= 1, got " + std::to_string(q));
  TrackedElements out;
  for (int r = 1; r <= q; ++r) {
    if (r > 1)
      out.a1_elements.push_back({CoefBlock::a1, r, r - 1});
    out.a1_elements.push_back({CoefBlock::a1, r, r});
    if (r < q)
      out.a1_elements.push_back({CoefBlock::a1, r, r + 1});
  }
  out.b1_elements.push_back({CoefBlock::b1, 1, 1});
  out.b1_elements.push_back({CoefBlock::b1, q, 2});
  return out;
}

std::vector<ElementId> TrackedElements::all() const {
  std::vector<ElementId> out = a1_elements;
  out.insert(out.end(), b1_elements.begin(), b1_elements.end());
  return out;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
  case Verdict::healthy:
    return "healthy";
  case Verdict::damaged:
    return "damaged";
  case Verdict::inconclusive:
    return "inconclusive";
  }
  throw InvalidSpec("unknown verdict value");
}

Verdict verdict_from_string(const std::string &text) {
  if (text == "healthy")
    return Verdict::healthy;
  if (text == "damaged")
    return Verdict::damaged;
  if (text == "inconclusive")
    return Verdict::inconclusive;
  throw InvalidSpec("unknown verdict '" + text + "'");
}

std::map<ElementId, double> stiffness_transform(const VarxModel &model) {
  std::map<ElementId, double> out;
  for (const ElementId &element : TrackedElements::for_dimension(model.dimension()).all())
    out[element] = tracked_value(model, element);
  return out;
}

DamageIndicators damage_indicators(const VarxModel &current, const VarxModel &baseline) {
  if (current.dimension() != baseline.dimension())
    throw DimensionMismatch("current model has dimension " + std::to_string(current.dimension()) +
                            ", baseline has " + std::to_string(baseline.dimension()));
  if (current.ts != baseline.ts)
    throw DimensionMismatch("current model has ts " + std::to_string(current.ts) + ", baseline has " +
                            std::to_string(baseline.ts));

  DamageIndicators out;
  out.baseline_id = model_digest(baseline);
  out.endogenous_labels = baseline.endogenous_labels;
  for (const ElementId &element : TrackedElements::for_dimension(baseline.dimension()).all()) {
    const double ref = tracked_value(baseline, element);
    if (std::abs(ref) < baseline_floor)
      throw BaselineDegenerate("baseline " + element_name(element) + " is " + std::to_string(ref) +
                               ", too close to zero to normalize against");
    out.values[element] = std::abs(tracked_value(current, element) - ref) / std::abs(ref);
  }
  return out;
}

double calibrate_threshold(const std::vector<DamageIndicators> &healthy_runs) {
  if (static_cast<int>(healthy_runs.size()) < min_calibration_runs)
    throw TooFewRuns("threshold calibration needs at least " + std::to_string(min_calibration_runs) +
                     " healthy runs, got " + std::to_string(healthy_runs.size()));
  double sum = 0.0;
  long count = 0;
  for (const auto &run : healthy_runs)
    for (const auto &[element, di] : run.values) {
      sum += di;
      ++count;
    }
  const double mean = sum / static_cast<double>(count);
  double var = 0.0;
  for (const auto &run : healthy_runs)
    for (const auto &[element, di] : run.values)
      var += (di - mean) * (di - mean);
  var /= static_cast<double>(count);
  return std::max(mean + 5.0 * std::sqrt(var), threshold_floor);
}

DamageReport localize(const DamageIndicators &indicators, double threshold, int q) {
  DamageReport report;
  report.indicators = indicators;
  report.threshold = threshold;

  std::set<ElementId> exceeding;
  for (const ElementId &element : TrackedElements::for_dimension(q).a1_elements)
    if (indicators.values.at(element) > threshold)
      exceeding.insert(element);

  if (exceeding.empty()) {
    report.verdict = Verdict::healthy;
    return report;
  }

  const auto &labels = indicators.endogenous_labels;
  auto matches = [&](std::initializer_list<ElementId> pattern) {
    return exceeding == std::set<ElementId>(pattern);
  };

  // Single-spring adjacency patterns. With q = 1 the two boundary patterns
  // coincide, so no unique spring exists and the verdict stays inconclusive.
  if (q >= 2 && matches({{CoefBlock::a1, 1, 1}})) {
    report.verdict = Verdict::damaged;
    report.localized_spring = labels.at(0);
    return report;
  }
  if (q >= 2 && matches({{CoefBlock::a1, q, q}})) {
    report.verdict = Verdict::damaged;
    report.localized_spring = labels.at(q - 1) + 1;
    return report;
  }
  for (int s = 2; s <= q; ++s) {
    if (matches({{CoefBlock::a1, s - 1, s - 1},
                 {CoefBlock::a1, s - 1, s},
                 {CoefBlock::a1, s, s - 1},
                 {CoefBlock::a1, s, s}})) {
      report.verdict = Verdict::damaged;
      report.localized_spring = labels.at(s - 1);
      return report;
    }
  }
  report.verdict = Verdict::inconclusive;
  return report;
}

double estimate_severity(const VarxModel &current, const VarxModel &baseline, int spring) {
  const int q = baseline.dimension();
  const auto &labels = baseline.endogenous_labels;
  auto ratio = [&](ElementId element) {
    const double ref = tracked_value(baseline, element);
    if (std::abs(ref) < baseline_floor)
      throw BaselineDegenerate("baseline " + element_name(element) + " too close to zero");
    return tracked_value(current, element) / ref;
  };

  if (spring == labels.at(0))
    return 1.0 - ratio({CoefBlock::b1, 1, 1});
  if (spring == labels.at(q - 1) + 1)
    return 1.0 - ratio({CoefBlock::b1, q, 2});
  for (int s = 2; s <= q; ++s)
    if (spring == labels.at(s - 1))
      return 1.0 - 0.5 * (ratio({CoefBlock::a1, s - 1, s}) + ratio({CoefBlock::a1, s, s - 1}));
  throw NotLocalized("spring " + std::to_string(spring) + " is not resolvable from this substructure's elements");
}

std::string model_digest(const VarxModel &model) {
  std::string bytes;
  bytes.reserve(64 + 18 * static_cast<std::size_t>(model.a1.size() + model.a2.size() + model.b1.size()));
  detail::append_hashed(bytes, model.ts);
  for (const auto *matrix : {&model.a1, &model.a2, &model.b1})
    for (int r = 0; r < matrix->rows(); ++r)
      for (int c = 0; c < matrix->cols(); ++c)
        detail::append_hashed(bytes, (*matrix)(r, c));
  for (int label : model.endogenous_labels)
    bytes += std::to_string(label) + ",";
  bytes += ";";
  for (int label : model.exogenous_labels)
    bytes += std::to_string(label) + ",";
  return detail::fnv1a_hex(bytes);
}

} // namespace subvarx
