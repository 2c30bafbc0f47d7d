#include "relent/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "relent/grid_field.hpp"

namespace relent {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double require_scalar_nonnegative(std::span<const double> lambda,
                                  const char* who) {
  if (lambda.size() != 1) {
    throw DomainError(std::string(who) + " is defined for scalar arguments only");
  }
  if (!(lambda[0] >= 0.0)) {
    throw DomainError(std::string(who) + " rejects negative argument " +
                      std::to_string(lambda[0]));
  }
  return lambda[0];
}

double dot_difference(std::span<const double> g, std::span<const double> v,
                      std::span<const double> u) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * (v[k] - u[k]);
  return s;
}

void require_same_size(std::span<const double> v, std::span<const double> u) {
  if (v.size() != u.size()) {
    throw DomainError("relative entropy arguments have different dimensions");
  }
}

double generic_bregman(const EntropySpec& spec, std::span<const double> v,
                       std::span<const double> u) {
  const auto g = eval_grad(spec, u);
  return eval_h(spec, v) - eval_h(spec, u) - dot_difference(g, v, u);
}

}  // namespace

EntropySpec EntropySpec::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("power entropy requires finite p > 1");
  }
  return EntropySpec(PowerEntropy{p});
}

EntropySpec EntropySpec::custom(CustomEntropy c) {
  if (!c.value || !c.gradient) {
    throw std::invalid_argument("custom entropy needs value and gradient evaluators");
  }
  return EntropySpec(std::move(c));
}

std::string EntropySpec::name() const {
  return std::visit(
      overloaded{
          [](const PowerEntropy& e) { return "power(" + std::to_string(e.p) + ")"; },
          [](const QuadraticEntropy&) { return std::string("quadratic"); },
          [](const XLogXEntropy&) { return std::string("xlogx"); },
          [](const NormalizedXLogXEntropy&) { return std::string("normalized_xlogx"); },
          [](const CustomEntropy& e) { return e.name; },
      },
      v_);
}

bool EntropySpec::log_type() const noexcept {
  return is<XLogXEntropy>() || is<NormalizedXLogXEntropy>();
}

double EntropySpec::growth_exponent() const noexcept {
  return std::visit(overloaded{
                        [](const PowerEntropy& e) { return e.p; },
                        [](const QuadraticEntropy&) { return 2.0; },
                        [](const XLogXEntropy&) { return 1.0; },
                        [](const NormalizedXLogXEntropy&) { return 1.0; },
                        [](const CustomEntropy& e) { return e.growth_p; },
                    },
                    v_);
}

EntropySpec entropy_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "must be an object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError(key + ".family", "missing or not a string");
  }
  const std::string family = j["family"].get<std::string>();
  if (family == "power") {
    if (!j.contains("p") || !j["p"].is_number()) {
      throw ConfigError(key + ".p", "power entropy needs a numeric exponent");
    }
    const double p = j["p"].get<double>();
    if (!(p > 1.0)) throw ConfigError(key + ".p", "must be > 1");
    return EntropySpec::power(p);
  }
  if (family == "quadratic") return EntropySpec::quadratic();
  if (family == "xlogx") return EntropySpec::xlogx();
  if (family == "normalized_xlogx") return EntropySpec::normalized_xlogx();
  throw ConfigError(key + ".family", "unknown entropy family '" + family + "'");
}

nlohmann::json entropy_to_json(const EntropySpec& spec) {
  return std::visit(
      overloaded{
          [](const PowerEntropy& e) {
            return nlohmann::json{{"family", "power"}, {"p", e.p}};
          },
          [](const QuadraticEntropy&) { return nlohmann::json{{"family", "quadratic"}}; },
          [](const XLogXEntropy&) { return nlohmann::json{{"family", "xlogx"}}; },
          [](const NormalizedXLogXEntropy&) {
            return nlohmann::json{{"family", "normalized_xlogx"}};
          },
          [](const CustomEntropy& e) {
            return nlohmann::json{{"family", "custom"}, {"name", e.name}};
          },
      },
      spec.variant());
}

double eval_h(const EntropySpec& spec, std::span<const double> lambda) {
  return std::visit(
      overloaded{
          [&](const PowerEntropy& e) { return std::pow(magnitude(lambda), e.p); },
          [&](const QuadraticEntropy&) {
            double s = 0.0;
            for (double x : lambda) s += x * x;
            return s;
          },
          [&](const XLogXEntropy&) {
            const double x = require_scalar_nonnegative(lambda, "xlogx entropy");
            return x == 0.0 ? kInvE : kInvE + x * std::log(x);
          },
          [&](const NormalizedXLogXEntropy&) {
            const double x = require_scalar_nonnegative(lambda, "normalized xlogx entropy");
            return x == 0.0 ? 1.0 : x * std::log(x) - x + 1.0;
          },
          [&](const CustomEntropy& e) { return e.value(lambda); },
      },
      spec.variant());
}

double eval_h(const EntropySpec& spec, double lambda) {
  return eval_h(spec, std::span<const double>(&lambda, 1));
}

std::vector<double> eval_grad(const EntropySpec& spec,
                              std::span<const double> lambda) {
  return std::visit(
      overloaded{
          [&](const PowerEntropy& e) {
            std::vector<double> g(lambda.size(), 0.0);
            const double r = magnitude(lambda);
            if (r == 0.0) return g;
            const double scale = e.p * std::pow(r, e.p - 2.0);
            for (std::size_t k = 0; k < g.size(); ++k) g[k] = scale * lambda[k];
            return g;
          },
          [&](const QuadraticEntropy&) {
            std::vector<double> g(lambda.begin(), lambda.end());
            for (double& x : g) x *= 2.0;
            return g;
          },
          [&](const XLogXEntropy&) {
            const double x = require_scalar_nonnegative(lambda, "xlogx entropy");
            if (x == 0.0) throw DomainError("xlogx gradient is unbounded at 0");
            return std::vector<double>{std::log(x) + 1.0};
          },
          [&](const NormalizedXLogXEntropy&) {
            const double x = require_scalar_nonnegative(lambda, "normalized xlogx entropy");
            if (x == 0.0) throw DomainError("normalized xlogx gradient is unbounded at 0");
            return std::vector<double>{std::log(x)};
          },
          [&](const CustomEntropy& e) {
            auto g = e.gradient(lambda);
            if (g.size() != lambda.size()) {
              throw DomainError("custom gradient returned wrong dimension");
            }
            return g;
          },
      },
      spec.variant());
}

double eval_grad(const EntropySpec& spec, double lambda) {
  return eval_grad(spec, std::span<const double>(&lambda, 1))[0];
}

double second_derivative(const EntropySpec& spec, double s) {
  return std::visit(
      overloaded{
          [&](const PowerEntropy& e) {
            if (s == 0.0) {
              if (e.p == 2.0) return 2.0;
              if (e.p > 2.0) return 0.0;
              throw DomainError("power second derivative is unbounded at 0");
            }
            return e.p * (e.p - 1.0) * std::pow(std::fabs(s), e.p - 2.0);
          },
          [&](const QuadraticEntropy&) { return 2.0; },
          [&](const XLogXEntropy&) {
            if (!(s > 0.0)) throw DomainError("xlogx second derivative needs s > 0");
            return 1.0 / s;
          },
          [&](const NormalizedXLogXEntropy&) {
            if (!(s > 0.0)) {
              throw DomainError("normalized xlogx second derivative needs s > 0");
            }
            return 1.0 / s;
          },
          [&](const CustomEntropy& e) {
            if (!e.second_derivative) {
              throw DomainError("custom entropy has no second derivative");
            }
            return e.second_derivative(s);
          },
      },
      spec.variant());
}

namespace {

// (1 + t) ln(1 + t) - t. Near t = 0 the direct form cancels, so sum the
// series t^2/2 - t^3/6 + ... = sum_k (-t)^k / (k (k - 1)) instead.
double xlogx_remainder(double t) {
  if (std::fabs(t) >= 0.25) return (1.0 + t) * std::log1p(t) - t;
  std::array<double, 64> terms;
  std::size_t count = 0;
  for (double pw = t * t; count < terms.size() && std::fabs(pw) > 1e-18 * t * t; pw *= -t) {
    const double k = static_cast<double>(count + 2);
    terms[count++] = pw / (k * (k - 1.0));
  }
  double s = 0.0;
  while (count > 0) s += terms[--count];
  return s;
}

}  // namespace

double bregman(const EntropySpec& spec, std::span<const double> v,
               std::span<const double> u) {
  require_same_size(v, u);
  if (spec.is<QuadraticEntropy>()) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double d = v[k] - u[k];
      s += d * d;
    }
    return s;
  }
  if (spec.log_type()) {
    const double x = require_scalar_nonnegative(v, spec.name().c_str());
    const double y = require_scalar_nonnegative(u, spec.name().c_str());
    if (y == 0.0) {
      if (x == 0.0) return 0.0;
      throw DomainError(spec.name() + " relative entropy needs u > 0");
    }
    if (x == 0.0) return y;
    return y * xlogx_remainder((x - y) / y);
  }
  return generic_bregman(spec, v, u);
}

double bregman(const EntropySpec& spec, double v, double u) {
  return bregman(spec, std::span<const double>(&v, 1),
                 std::span<const double>(&u, 1));
}

double bregman_sym(const EntropySpec& spec, std::span<const double> v,
                   std::span<const double> u) {
  require_same_size(v, u);
  const auto gu = eval_grad(spec, u);
  const auto gv = eval_grad(spec, v);
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += (gu[k] - gv[k]) * (u[k] - v[k]);
  return s;
}

double bregman_sym(const EntropySpec& spec, double v, double u) {
  return bregman_sym(spec, std::span<const double>(&v, 1),
                     std::span<const double>(&u, 1));
}

TruncatedEntropy::TruncatedEntropy(EntropySpec spec, double level)
    : spec_(std::move(spec)), level_(level) {
  if (!(level > 0.0)) throw std::invalid_argument("truncation level must be positive");
}

double TruncatedEntropy::operator()(std::span<const double> lambda) const {
  return std::min(eval_h(spec_, lambda), level_);
}

double TruncatedEntropy::operator()(double lambda) const {
  return (*this)(std::span<const double>(&lambda, 1));
}

TruncatedEntropy truncate_hR(const EntropySpec& spec, double level) {
  return TruncatedEntropy(spec, level);
}

AEstimate compute_A(const EntropySpec& spec, double p, double s_min,
                    double s_max, std::size_t samples) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("compute_A needs p in [1, 2]");
  if (!(s_min > 0.0 && s_min < s_max)) {
    throw std::invalid_argument("compute_A needs 0 < s_min < s_max");
  }
  if (samples < 2) throw std::invalid_argument("compute_A needs at least two samples");

  const double ratio = std::log(s_max / s_min);
  std::vector<double> vals(samples);
  std::vector<double> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
    const double s = k + 1 == samples ? s_max : s_min * std::exp(t * ratio);
    pts[k] = s;
    vals[k] = std::pow(s, 2.0 - p) * second_derivative(spec, s);
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const std::size_t k = static_cast<std::size_t>(it - vals.begin());

  AEstimate est;
  est.value = *it;
  est.s_min = s_min;
  est.s_max = s_max;
  est.samples = samples;
  est.argmin = pts[k];
  constexpr double kFlat = 1e-9;
  if (k == 0) {
    est.edge_limited = vals[0] < vals[1] * (1.0 - kFlat);
  } else if (k + 1 == samples) {
    est.edge_limited = vals[k] < vals[k - 1] * (1.0 - kFlat);
  }
  est.positive = est.value > 0.0 && !est.edge_limited;
  if (!(est.value > 0.0)) {
    est.note = "A not positive on probed range";
  } else if (est.edge_limited) {
    est.note = "A not positive on probed range: infimum still decreasing at s = " +
               std::to_string(est.argmin);
  }
  return est;
}

const char* to_string(GrowthViolation::Kind kind) {
  switch (kind) {
    case GrowthViolation::Kind::lower:
      return "lower";
    case GrowthViolation::Kind::upper:
      return "upper";
    case GrowthViolation::Kind::superlinear:
      return "superlinear";
  }
  return "unknown";
}

GrowthReport validate_growth(const EntropySpec& spec, double p, double c,
                             const GrowthProbe& probe) {
  if (!(c > 0.0)) throw std::invalid_argument("growth constant c must be positive");
  if (!(probe.lambda_min < probe.lambda_max) || probe.samples < 2) {
    throw std::invalid_argument("growth probe needs lambda_min < lambda_max and two samples");
  }
  GrowthReport r;
  r.p = p;
  r.c = c;
  r.lambda_min = probe.lambda_min;
  r.lambda_max = probe.lambda_max;

  const std::size_t n = probe.samples;
  std::vector<double> lam(n);
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    lam[k] = k + 1 == n ? probe.lambda_max
                        : probe.lambda_min + t * (probe.lambda_max - probe.lambda_min);
    h[k] = eval_h(spec, lam[k]);
    const double power = std::pow(std::fabs(lam[k]), p);
    const double slack = 1e-12 * (1.0 + std::fabs(h[k]));
    if (power / c - c > h[k] + slack) {
      r.lower_ok = false;
      r.violations.push_back({lam[k], h[k], GrowthViolation::Kind::lower});
    }
    if (h[k] > c * power + c + slack) {
      r.upper_ok = false;
      r.violations.push_back({lam[k], h[k], GrowthViolation::Kind::upper});
    }
  }

  // Superlinearity: h(l)/l strictly increasing over the top decile of the
  // positive samples, and above the threshold at the right end.
  std::vector<std::size_t> positive;
  for (std::size_t k = 0; k < n; ++k) {
    if (lam[k] > 0.0) positive.push_back(k);
  }
  if (positive.size() < 2) {
    r.superlinear_ok = false;
    r.violations.push_back({lam.back(), h.back(), GrowthViolation::Kind::superlinear});
    return r;
  }
  const std::size_t decile = std::max<std::size_t>(2, positive.size() / 10);
  const std::size_t first = positive.size() - decile;
  for (std::size_t j = first + 1; j < positive.size(); ++j) {
    const std::size_t a = positive[j - 1];
    const std::size_t b = positive[j];
    if (!(h[b] / lam[b] > h[a] / lam[a])) {
      r.superlinear_ok = false;
      r.violations.push_back({lam[b], h[b], GrowthViolation::Kind::superlinear});
    }
  }
  const std::size_t last = positive.back();
  if (!(h[last] / lam[last] > probe.superlinear_threshold)) {
    r.superlinear_ok = false;
    r.violations.push_back({lam[last], h[last], GrowthViolation::Kind::superlinear});
  }
  return r;
}

}  // namespace relent
