#include "relent/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "relent/table.hpp"

namespace relent {

namespace {

void require_nonnegative(const DiscreteField& f, const char* what) {
  auto v = f.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0) {
      throw DomainError(std::string(what) + " has a negative value",
                        k / f.components());
    }
  }
}

void require_scalar(const DiscreteField& f, const char* what) {
  if (!f.is_scalar()) {
    throw DomainError(std::string(what) + " must be a scalar field");
  }
}

DiscreteField checked_density(const DiscreteField& f, const char* what,
                              const DensityOptions& opt) {
  require_scalar(f, what);
  require_nonnegative(f, what);
  const double mass = integrate_scalar(f);
  if (std::fabs(mass - 1.0) <= opt.mass_tolerance) return f;
  if (opt.renormalize && mass > 0.0) return (1.0 / mass) * f;
  throw ValidationError(std::string(what) + " has mass " + format_number(mass) +
                        ", expected 1 within " + format_number(opt.mass_tolerance));
}

}  // namespace

InequalityVerdict make_verdict(std::string check, double lhs, double rhs,
                               double relative_tolerance) {
  InequalityVerdict v;
  v.check = std::move(check);
  v.lhs = lhs;
  v.rhs = rhs;
  v.slack = rhs - lhs;
  v.tolerance = relative_tolerance * (1.0 + std::fabs(rhs));
  v.holds = v.slack >= -v.tolerance;
  if (lhs == 0.0) {
    v.ratio = rhs == 0.0 ? 1.0 : std::copysign(std::numeric_limits<double>::infinity(), rhs);
  } else {
    v.ratio = rhs / lhs;
  }
  return v;
}

double rel_entropy_functional(const EntropySpec& spec, const DiscreteField& v,
                              const DiscreteField& u) {
  require_same_layout(v, u);
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      s.add(bregman(spec, v[i], u[i]));
    } catch (const DomainError& e) {
      throw DomainError(e.what(), i);
    }
  }
  return v.grid().dx() * s.value();
}

double kl_divergence(const DiscreteField& v, const DiscreteField& u) {
  require_same_layout(v, u);
  require_scalar(v, "KL density");
  require_nonnegative(v, "KL first argument");
  require_nonnegative(u, "KL second argument");
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.scalar(i);
    const double y = u.scalar(i);
    if (x == 0.0) continue;
    if (y == 0.0) return std::numeric_limits<double>::infinity();
    s.add(x * std::log(x / y));
  }
  return v.grid().dx() * s.value();
}

InequalityVerdict ckp_check(const DiscreteField& v, const DiscreteField& u,
                            const DensityOptions& options) {
  require_same_layout(v, u);
  const auto vv = checked_density(v, "first density", options);
  const auto uu = checked_density(u, "second density", options);
  const double l1 = lp_distance(vv, uu, 1.0);
  return make_verdict("ckp", l1 * l1, 2.0 * kl_divergence(vv, uu));
}

InequalityVerdict generalized_ckp_check(const EntropySpec& spec,
                                        const DiscreteField& v,
                                        const DiscreteField& u, double p,
                                        double A) {
  require_same_layout(v, u);
  if (!(A > 0.0)) throw ValidationError("generalized CKP needs A > 0");
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("generalized CKP needs p in [1, 2]");
  require_scalar(v, "generalized CKP field");
  require_nonnegative(v, "generalized CKP first argument");
  require_nonnegative(u, "generalized CKP second argument");

  if (spec.is<NormalizedXLogXEntropy>()) {
    // f(1) = f'(1) = 0 by construction.
  } else if (spec.is<CustomEntropy>()) {
    if (std::fabs(eval_h(spec, 1.0)) > 1e-12 || std::fabs(eval_grad(spec, 1.0)) > 1e-12) {
      throw ValidationError("generalized CKP needs f(1) = f'(1) = 0");
    }
  } else {
    throw ValidationError(spec.name() + " does not satisfy f(1) = f'(1) = 0");
  }

  const double rhs = rel_entropy_functional(spec, v, u);
  const double nv = lp_norm(v, p);
  const double nu = lp_norm(u, p);
  if (std::min(nv, nu) == 0.0 && p < 2.0) {
    InequalityVerdict out = make_verdict("generalized_ckp", 0.0, rhs);
    out.degenerate = true;
    return out;
  }
  const double weight = std::min(std::pow(nv, p - 2.0), std::pow(nu, p - 2.0));
  const double dist = lp_distance(u, v, p);
  const double lhs = A / std::pow(2.0, 2.0 / p) * weight * dist * dist;
  return make_verdict("generalized_ckp", lhs, rhs);
}

InequalityVerdict uniform_convexity_bound_check(const EntropySpec& spec, double c,
                                                const DiscreteField& v,
                                                const DiscreteField& u) {
  const double d = lp_norm_pow(v - u, 2.0);
  return make_verdict("uniform_convexity", c * d, rel_entropy_functional(spec, v, u));
}

PowerIdentity power_identity(double p, const DiscreteField& v,
                             const DiscreteField& u) {
  require_same_layout(v, u);
  const auto h = EntropySpec::power(p);
  PowerIdentity out;
  out.lhs = lp_norm_pow(v, p) - lp_norm_pow(u, p);

  CompensatedSum linear;
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto ui = u[i];
    auto vi = v[i];
    const double r = magnitude(ui);
    if (r == 0.0) continue;  // p|u|^{p-2}u extends continuously by 0
    const double scale = p * std::pow(r, p - 2.0);
    for (std::size_t k = 0; k < ui.size(); ++k) linear.add(scale * ui[k] * (vi[k] - ui[k]));
  }
  out.rhs = u.grid().dx() * linear.value() + rel_entropy_functional(h, v, u);
  return out;
}

void write_verdict_csv(std::ostream& out, std::span<const InequalityVerdict> rows) {
  Table t({"check", "lhs", "rhs", "slack", "holds"});
  for (const auto& r : rows) t.add_row({r.check, r.lhs, r.rhs, r.slack, r.holds});
  t.write(out);
}

}  // namespace relent
