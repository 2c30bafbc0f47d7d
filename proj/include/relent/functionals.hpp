#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "relent/entropy.hpp"
#include "relent/grid_field.hpp"

namespace relent {

/// Outcome of an inequality lhs <= rhs. `holds` iff slack >= -tolerance.
struct InequalityVerdict {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs / lhs; +inf when only lhs vanishes, 1 when both do.
  double ratio = 1.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool holds = true;
  /// The bound could not be formed (e.g. a vanishing L^p norm in the
  /// generalized inequality). lhs is then reported as 0.
  bool degenerate = false;
};

/// Default tolerance 1e-10 (1 + |rhs|).
InequalityVerdict make_verdict(std::string check, double lhs, double rhs,
                               double relative_tolerance = 1e-10);

/// F[v|u] = dx sum_i h(v_i|u_i).
double rel_entropy_functional(const EntropySpec& spec, const DiscreteField& v,
                              const DiscreteField& u);

/// H(v|u) = dx sum_i v_i ln(v_i/u_i) with 0 ln 0 = 0. Returns +inf when v is
/// positive on a cell where u vanishes.
double kl_divergence(const DiscreteField& v, const DiscreteField& u);

struct DensityOptions {
  double mass_tolerance = 1e-8;
  /// Rescale to unit mass instead of rejecting.
  bool renormalize = false;
};

/// ||v - u||_1^2 <= 2 H(v|u) for probability densities.
InequalityVerdict ckp_check(const DiscreteField& v, const DiscreteField& u,
                            const DensityOptions& options = {});

/// A / 2^{2/p} min(||v||_p^{p-2}, ||u||_p^{p-2}) ||u - v||_p^2 <= F[v|u].
/// Requires f(1) = f'(1) = 0, which among the catalog entropies only the
/// normalized x log x satisfies; custom entropies are checked numerically.
InequalityVerdict generalized_ckp_check(const EntropySpec& spec,
                                        const DiscreteField& v,
                                        const DiscreteField& u, double p,
                                        double A);

/// c ||v - u||_2^2 <= F[v|u].
InequalityVerdict uniform_convexity_bound_check(const EntropySpec& spec, double c,
                                                const DiscreteField& v,
                                                const DiscreteField& u);

struct PowerIdentity {
  /// int |v|^p - int |u|^p
  double lhs = 0.0;
  /// int p|u|^{p-2}u.(v - u) + int h(v|u), h = |.|^p
  double rhs = 0.0;
};

PowerIdentity power_identity(double p, const DiscreteField& v,
                             const DiscreteField& u);

/// Header `check,lhs,rhs,slack,holds`.
void write_verdict_csv(std::ostream& out, std::span<const InequalityVerdict> rows);

}  // namespace relent
