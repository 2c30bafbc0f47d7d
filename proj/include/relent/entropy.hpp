#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relent/error.hpp"

namespace relent {

/// h(l) = |l|^p on R^n, p > 1.
struct PowerEntropy {
  double p = 2.0;
};

/// h(l) = |l|^2 on R^n.
struct QuadraticEntropy {};

/// h(l) = 1/e + l ln l on [0, inf), h(0) = 1/e. Scalar only.
struct XLogXEntropy {};

/// f(s) = s ln s - s + 1 on [0, inf), f(0) = 1. Scalar only.
struct NormalizedXLogXEntropy {};

/// User-supplied entropy. The second derivative is only consulted for
/// scalar arguments (compute_A, validate_growth). `growth_p` and `growth_c`
/// are the declared growth constants.
struct CustomEntropy {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  std::function<double(double)> second_derivative;
  double growth_p = 2.0;
  double growth_c = 1.0;
  std::string name = "custom";
};

class EntropySpec {
 public:
  using Variant = std::variant<PowerEntropy, QuadraticEntropy, XLogXEntropy,
                               NormalizedXLogXEntropy, CustomEntropy>;

  static EntropySpec power(double p);
  static EntropySpec quadratic() { return EntropySpec(QuadraticEntropy{}); }
  static EntropySpec xlogx() { return EntropySpec(XLogXEntropy{}); }
  static EntropySpec normalized_xlogx() {
    return EntropySpec(NormalizedXLogXEntropy{});
  }
  static EntropySpec custom(CustomEntropy c);

  const Variant& variant() const noexcept { return v_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(v_);
  }

  std::string name() const;
  /// Log-type entropies accept a single nonnegative component only.
  bool log_type() const noexcept;
  /// Growth exponent p (Power p, Quadratic 2, log-type 1, Custom declared).
  double growth_exponent() const noexcept;

 private:
  explicit EntropySpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// {"family": "power"|"quadratic"|"xlogx"|"normalized_xlogx", "p": ...}
EntropySpec entropy_from_json(const nlohmann::json& j,
                              const std::string& key = "entropy");
nlohmann::json entropy_to_json(const EntropySpec& spec);

double eval_h(const EntropySpec& spec, std::span<const double> lambda);
double eval_h(const EntropySpec& spec, double lambda);

std::vector<double> eval_grad(const EntropySpec& spec,
                              std::span<const double> lambda);
double eval_grad(const EntropySpec& spec, double lambda);

/// Scalar second derivative h''(s).
double second_derivative(const EntropySpec& spec, double s);

/// Relative entropy h(v|u) = h(v) - h(u) - grad h(u).(v - u).
/// Quadratic and XLogX use their closed forms |v-u|^2 and
/// v ln(v/u) - (v - u).
double bregman(const EntropySpec& spec, std::span<const double> v,
               std::span<const double> u);
double bregman(const EntropySpec& spec, double v, double u);

/// (grad h(u) - grad h(v)).(u - v).
double bregman_sym(const EntropySpec& spec, std::span<const double> v,
                   std::span<const double> u);
double bregman_sym(const EntropySpec& spec, double v, double u);

/// min(h, R).
class TruncatedEntropy {
 public:
  TruncatedEntropy(EntropySpec spec, double level);

  double level() const noexcept { return level_; }
  double operator()(std::span<const double> lambda) const;
  double operator()(double lambda) const;

 private:
  EntropySpec spec_;
  double level_;
};

TruncatedEntropy truncate_hR(const EntropySpec& spec, double level);

/// Sampled estimate of inf_s s^{2-p} f''(s) over a log-spaced probe.
struct AEstimate {
  double value = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t samples = 0;
  double argmin = 0.0;
  /// The minimum sits at a probe endpoint and is still falling there, so
  /// the true infimum may be smaller outside the probe.
  bool edge_limited = false;
  bool positive = false;
  std::string note;
};

AEstimate compute_A(const EntropySpec& spec, double p, double s_min,
                    double s_max, std::size_t samples = 2001);

struct GrowthProbe {
  double lambda_min = 0.0;
  double lambda_max = 10.0;
  std::size_t samples = 1001;
  /// h(lambda_max)/lambda_max must exceed this for superlinearity.
  double superlinear_threshold = 1.0;
};

struct GrowthViolation {
  enum class Kind { lower, upper, superlinear };
  double lambda = 0.0;
  double h = 0.0;
  Kind kind = Kind::lower;
};

struct GrowthReport {
  double p = 0.0;
  double c = 0.0;
  bool lower_ok = true;
  bool upper_ok = true;
  bool superlinear_ok = true;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<GrowthViolation> violations;

  bool bounds_ok() const noexcept { return lower_ok && upper_ok; }
};

/// Audits (1/c)|l|^p - c <= h(l) <= c|l|^p + c at sampled scalar l, and
/// superlinear growth of h(l)/l over the top decile of the probe.
GrowthReport validate_growth(const EntropySpec& spec, double p, double c,
                             const GrowthProbe& probe);

const char* to_string(GrowthViolation::Kind kind);

}  // namespace relent
