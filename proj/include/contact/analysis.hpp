#pragma once

// Symmetries and dissipated quantities of contact Hamiltonian systems.
//
// A function F is conserved when X_H(F) = 0 and dissipated when
// X_H(F) = −(∂H/∂s)·F. For an infinitesimal dynamical symmetry Y
// ([Y, X_H] = 0), F = −i(Y)η is dissipated; quotients of dissipated
// quantities are conserved, and i(X)η is dissipated exactly when
// i([X, X_H])η = 0. All residuals below are evaluated pointwise with exact
// derivatives, never by differencing trajectory samples.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contact/calculus.hpp"
#include "contact/core.hpp"
#include "contact/integrate.hpp"

namespace contact {

inline constexpr double kPointwiseTolerance = 1e-8;
inline constexpr double kTrajectoryTolerance = 1e-6;
/// "Neither" requires both residuals above this multiple of the tolerance.
inline constexpr double kNeitherFactor = 1e3;

enum class CheckKind { ContactSymmetry, DynamicalSymmetry, Conserved, Dissipated, BracketCharacterization };
std::string to_string(CheckKind kind);

struct CheckReport {
  std::string subject;
  CheckKind kind = CheckKind::Conserved;
  std::size_t samples = 0;
  std::size_t failed_samples = 0;  // samples where evaluation raised an error
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> errors;  // first few per-sample error messages
};

/// Deterministic uniform samples from [−box, box]^(2n+1).
struct SampleOptions {
  std::size_t count = 100;
  std::uint64_t seed = 42;
  double box = 2.0;
  /// Momenta with |p| below this are redrawn (use when dividing by momenta).
  double min_abs_momentum = 0.0;
};
std::vector<State> sample_states(const Chart& chart, const SampleOptions& opts = {});

enum class SymmetryClass { Contact, Dynamical, Neither };
std::string to_string(SymmetryClass c);

struct SymmetryReport {
  CheckReport contact;    // max(‖L_Y η‖∞, |L_Y H|)
  CheckReport dynamical;  // ‖[Y, X_H]‖∞
  double max_abs_lie_h = 0.0;
  double max_abs_lie_eta = 0.0;
  SymmetryClass classification = SymmetryClass::Neither;
};

/// Throws std::logic_error if the contact check passes while the dynamical
/// check fails, since every contact symmetry is a dynamical symmetry.
SymmetryReport classify_symmetry(const SystemSpec& sys, const VectorFieldSpec& y, std::span<const State> samples,
                                 double tol = kPointwiseTolerance);

/// F = −i(Y)η.
ScalarFieldSpec noether_quantity(const VectorFieldSpec& y);

enum class QuantityClass { Conserved, Dissipated, Both, Neither, Inconclusive };
std::string to_string(QuantityClass c);
/// Whether an observed class satisfies an expectation of conserved/dissipated/neither.
bool satisfies(QuantityClass observed, QuantityClass expected);

struct QuantityReport {
  CheckReport conserved;   // |X_H(F)|
  CheckReport dissipated;  // |X_H(F) + (∂H/∂s) F|
  QuantityClass classification = QuantityClass::Inconclusive;
};

struct QuantityResiduals {
  double conserved = 0.0;
  double dissipated = 0.0;
};
QuantityResiduals quantity_residuals(const SystemSpec& sys, const ScalarFieldSpec& f, const State& x);

QuantityReport check_quantity(const SystemSpec& sys, const ScalarFieldSpec& f, std::span<const State> states,
                              double tol = kPointwiseTolerance);
QuantityReport check_quantity(const SystemSpec& sys, const ScalarFieldSpec& f, const Trajectory& traj,
                              double tol = kPointwiseTolerance);

ScalarFieldSpec quotient_quantity(const ScalarFieldSpec& numerator, const ScalarFieldSpec& denominator);
/// F_diss · G_cons.
ScalarFieldSpec product_quantity(const ScalarFieldSpec& dissipated, const ScalarFieldSpec& conserved);
/// −i(Y)η / H; meaningful where H ≠ 0.
ScalarFieldSpec conserved_from_symmetry(const SystemSpec& sys, const VectorFieldSpec& y);

/// Y_F = −F·R, so that −i(Y_F)η = F.
VectorFieldSpec reeb_lift(const SystemSpec& sys, const ScalarFieldSpec& f);

/// i([X, X_H])η at x.
double characterization_residual(const SystemSpec& sys, const VectorFieldSpec& x_field, const State& x);
CheckReport check_characterization(const SystemSpec& sys, const VectorFieldSpec& x_field,
                                   std::span<const State> samples, double tol = kPointwiseTolerance);

/// A chart self-map Φ given componentwise in flat (q, p, s) order.
class PointMap {
 public:
  PointMap(std::string name, ChartPtr chart, std::vector<Expression> components);
  /// Components keyed by direction name; unlisted directions map to themselves.
  static PointMap parse(std::string name, const SystemSpec& sys, const std::map<std::string, std::string>& components);
  static PointMap identity(const SystemSpec& sys);

  const std::string& name() const noexcept { return name_; }
  const ChartPtr& chart() const noexcept { return chart_; }
  const std::vector<Expression>& components() const noexcept { return components_; }
  State apply(const SystemSpec& sys, const State& x) const;

 private:
  std::string name_;
  ChartPtr chart_;
  std::vector<Expression> components_;
};

/// Φ*F = F ∘ Φ, by symbolic composition.
ScalarFieldSpec pullback_quantity(const PointMap& map, const ScalarFieldSpec& f);

/// Compares Φ*η with η and H∘Φ with H at each sample.
CheckReport check_contact_symmetry_map(const SystemSpec& sys, const PointMap& map, std::span<const State> samples,
                                       double tol = kPointwiseTolerance);

}  // namespace contact
