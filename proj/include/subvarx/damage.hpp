#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subvarx/varx_model.hpp"

namespace subvarx {

enum class CoefBlock { a1, b1 };

/// One tracked coefficient position, 1-based within its block.
struct ElementId {
  CoefBlock block = CoefBlock::a1;
  int row = 0;
  int col = 0;

  auto operator<=>(const ElementId &) const = default;
};

/// "A1(1,2)", "B1(1,1)", ...
std::string element_name(const ElementId &element);
ElementId parse_element_name(const std::string &name);

/// The coefficient positions whose value depends on substructure stiffness:
/// every tridiagonal A1 position plus the two boundary B1 entries.
struct TrackedElements {
  std::vector<ElementId> a1_elements;
  std::vector<ElementId> b1_elements;

  static TrackedElements for_dimension(int q);
  std::vector<ElementId> all() const;
};

/// Per-element relative deviation from a healthy baseline.
struct DamageIndicators {
  std::map<ElementId, double> values;
  std::string baseline_id;
  std::vector<int> endogenous_labels; // carried along so springs can be named
};

enum class Verdict { healthy, damaged, inconclusive };

std::string to_string(Verdict verdict);
Verdict verdict_from_string(const std::string &text);

struct DamageReport {
  Verdict verdict = Verdict::healthy;
  std::optional<int> localized_spring;      // global spring index, damaged only
  std::optional<double> severity_estimate;  // fraction in [0, 1), damaged only
  DamageIndicators indicators;
  double threshold = 0.0;
};

/// Strips the constant from the diagonal so every tracked quantity is
/// proportional to stiffness over mass: theta(r,r) = 2 - a1(r,r), off-diagonal
/// and B1 entries pass through unchanged.
std::map<ElementId, double> stiffness_transform(const VarxModel &model);

/// DI(e) = |theta_current(e) - theta_baseline(e)| / |theta_baseline(e)|.
/// Throws BaselineDegenerate when a baseline theta is within 1e-12 of zero.
DamageIndicators damage_indicators(const VarxModel &current, const VarxModel &baseline);

/// Detection threshold from a pooled healthy-state DI population:
/// mean + 5 stddev, floored at 1e-6. Needs at least 10 runs.
double calibrate_threshold(const std::vector<DamageIndicators> &healthy_runs);

/// Matches the set of A1 elements exceeding the threshold against the
/// single-spring adjacency patterns. An empty set is healthy; an exact
/// pattern match localizes the spring; anything else is inconclusive.
/// Severity is left unset; see estimate_severity.
DamageReport localize(const DamageIndicators &indicators, double threshold, int q);

/// Fractional stiffness loss of the localized spring, from the element(s)
/// directly proportional to it: the B1 entry for a boundary spring, the mean
/// over the two driven off-diagonals for an interior spring.
double estimate_severity(const VarxModel &current, const VarxModel &baseline, int spring);

/// Stable content digest used as baseline identifier ("fnv1a:<16 hex>").
std::string model_digest(const VarxModel &model);

} // namespace subvarx
