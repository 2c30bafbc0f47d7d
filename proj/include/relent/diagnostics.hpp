#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "relent/entropy.hpp"
#include "relent/grid_field.hpp"
#include "relent/sequences.hpp"

namespace relent {

// All "sup over n" quantities below range over the finite sample only, and
// every result records the sample's index range.

struct TailProfile {
  double p = 1.0;
  std::vector<double> thresholds;
  std::vector<std::size_t> indices;
  /// tails[k][j] = int_{|u_{n_k}| >= M_j} |u_{n_k}|^p dx
  std::vector<std::vector<double>> tails;
  /// envelope[j] = max_k tails[k][j]
  std::vector<double> envelope;
};

/// Powers of two 2^k_min, ..., 2^k_max.
std::vector<double> geometric_thresholds(int k_min, int k_max);

double p_tail(const DiscreteField& field, double p, double threshold);

TailProfile tail_profile(const SequenceSample& sample, double p,
                         std::span<const double> thresholds);

/// Header `M,n,tail`.
void write_tail_csv(std::ostream& out, const TailProfile& profile);

struct IntegrabilityResult {
  bool verdict = false;
  /// Smallest M <= m_max with envelope(M) < epsilon^p.
  std::optional<double> threshold;
  double envelope_at_threshold = 0.0;
  double epsilon = 0.0;
  double p = 1.0;
  double m_max = 0.0;
  std::size_t n_first = 0;
  std::size_t n_last = 0;
};

/// Searches the exact step function M -> sup_n int_{|u_n| >= M} |u_n|^p,
/// whose breakpoints are the observed magnitudes.
IntegrabilityResult uniform_p_integrability(const SequenceSample& sample, double p,
                                            double epsilon, double m_max);

/// meas{|u_n - u| > epsilon} per term.
std::vector<double> convergence_in_measure(const SequenceSample& sample,
                                           const DiscreteField& u, double epsilon);

/// Desk-scale proxy for "tends to zero": the last value is below
/// `tolerance` and the series does not increase over its last half.
bool vanishes(std::span<const double> series, double tolerance);

/// Heuristic for divergence along a geometric schedule: the series increases
/// over its last half and the increments there do not shrink by more than
/// half.
bool grows_without_bound(std::span<const double> series);

struct VitaliOptions {
  /// epsilon of the uniform p-integrability test.
  double epsilon = 0.25;
  /// Threshold budget; when absent, m_scale (1 + sup|u|).
  std::optional<double> m_max;
  double m_scale = 2.0;
  /// Deviation level for convergence in measure.
  double measure_epsilon = 0.1;
  double vanish_tolerance = 1e-3;
};

struct VitaliVerdict {
  double p = 1.0;
  std::vector<std::size_t> indices;
  IntegrabilityResult integrability;
  bool uniformly_p_integrable = false;
  std::vector<double> measure_deviation;
  bool converges_in_measure = false;
  /// Both predicates hold.
  bool lp_convergent = false;
  std::vector<double> lp_distances;
  /// Direct decay of ||u_n - u||_p.
  bool lp_decay = false;
  /// lp_convergent == lp_decay.
  bool consistent = false;
};

VitaliVerdict vitali_verdict(const SequenceSample& sample, const DiscreteField& u,
                             double p, const VitaliOptions& options = {});

nlohmann::json vitali_to_json(const VitaliVerdict& v);

struct DlvpLevel {
  double epsilon = 0.0;
  /// M_eps with C / M_eps < eps.
  double slope = 0.0;
  /// h(l) >= slope * l for every l >= lambda.
  double lambda = 0.0;
  /// sup_n int_{|u_n| >= lambda} |u_n| dx
  double observed_tail = 0.0;
  /// C / slope
  double bound = 0.0;
  bool certified = false;
};

struct DlvpResult {
  std::vector<std::size_t> indices;
  std::vector<double> entropies;
  double sup_entropy = 0.0;
  bool superlinear_certified = false;
  bool unbounded_trend = false;
  bool applicable = false;
  /// Uniform (1-)integrability certified on the sample.
  bool implied_uniform_integrability = false;
  std::vector<DlvpLevel> levels;
  std::string note;
};

struct DlvpOptions {
  std::vector<double> epsilons{0.5, 0.1, 0.01};
};

/// De La Vallee-Poussin certificate: a superlinear h with bounded
/// sup_n int h(u_n) = C gives int_{u_n >= Lambda_eps} u_n <= C / M_eps < eps.
DlvpResult dlvp_probe(const SequenceSample& sample, const EntropySpec& h,
                      const DlvpOptions& options = {});

nlohmann::json dlvp_to_json(const DlvpResult& r);

/// Cut-off phi_M: 1 on |l| <= M, linear down to 0 on (M, M + 1].
double cutoff_weight(double m, double magnitude);

/// 4c int h(u)(1 - phi_M(u)) dx, the limit-side bound on the p-tails of a
/// sequence converging in relative entropy.
double limit_tail_bound(const EntropySpec& h, const DiscreteField& u, double c,
                        double m);

}  // namespace relent
