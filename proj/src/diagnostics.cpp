#include "relent/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "relent/table.hpp"

namespace relent {

namespace {

void require_common_grid(const SequenceSample& sample) {
  if (sample.size() == 0) throw std::invalid_argument("empty sample");
  for (const auto& t : sample.terms) {
    if (!t.same_layout(sample.terms.front())) {
      throw GridMismatch("sample terms live on different grids");
    }
  }
}

// Sorted magnitudes of one term with suffix sums of |u|^p dx.
struct SortedTail {
  std::vector<double> mags;
  std::vector<double> suffix;  // suffix[k] = dx sum_{j >= k} mags[j]^p

  SortedTail(const DiscreteField& f, double p) {
    mags.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) mags.push_back(magnitude(f[i]));
    std::sort(mags.begin(), mags.end());
    suffix.assign(mags.size() + 1, 0.0);
    CompensatedSum s;
    const double dx = f.grid().dx();
    for (std::size_t k = mags.size(); k-- > 0;) {
      s.add(std::pow(mags[k], p));
      suffix[k] = dx * s.value();
    }
  }

  double tail(double m) const {
    const auto it = std::lower_bound(mags.begin(), mags.end(), m);
    return suffix[static_cast<std::size_t>(it - mags.begin())];
  }
};

}  // namespace

std::vector<double> geometric_thresholds(int k_min, int k_max) {
  if (k_min > k_max) throw std::invalid_argument("empty threshold range");
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

double p_tail(const DiscreteField& field, double p, double threshold) {
  CompensatedSum s;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double m = magnitude(field[i]);
    if (m >= threshold) s.add(std::pow(m, p));
  }
  return field.grid().dx() * s.value();
}

TailProfile tail_profile(const SequenceSample& sample, double p,
                         std::span<const double> thresholds) {
  require_common_grid(sample);
  if (!(p >= 1.0)) throw std::invalid_argument("tail profile needs p >= 1");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("thresholds must be sorted ascending");
  }
  TailProfile prof;
  prof.p = p;
  prof.thresholds.assign(thresholds.begin(), thresholds.end());
  prof.indices = sample.indices;
  prof.envelope.assign(thresholds.size(), 0.0);
  for (const auto& term : sample.terms) {
    const SortedTail st(term, p);
    std::vector<double> row;
    row.reserve(thresholds.size());
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      row.push_back(st.tail(thresholds[j]));
      prof.envelope[j] = std::max(prof.envelope[j], row.back());
    }
    prof.tails.push_back(std::move(row));
  }
  return prof;
}

void write_tail_csv(std::ostream& out, const TailProfile& profile) {
  Table t({"M", "n", "tail"});
  for (std::size_t j = 0; j < profile.thresholds.size(); ++j) {
    for (std::size_t k = 0; k < profile.indices.size(); ++k) {
      t.add_row({profile.thresholds[j], static_cast<std::int64_t>(profile.indices[k]),
                 profile.tails[k][j]});
    }
  }
  t.write(out);
}

IntegrabilityResult uniform_p_integrability(const SequenceSample& sample, double p,
                                            double epsilon, double m_max) {
  require_common_grid(sample);
  if (!(p >= 1.0)) throw std::invalid_argument("uniform integrability needs p >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  IntegrabilityResult r;
  r.epsilon = epsilon;
  r.p = p;
  r.m_max = m_max;
  r.n_first = sample.indices.front();
  r.n_last = sample.indices.back();

  std::vector<SortedTail> tails;
  std::vector<double> candidates;
  for (const auto& term : sample.terms) {
    tails.emplace_back(term, p);
    for (double m : tails.back().mags) {
      if (m > 0.0) candidates.push_back(m);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  // Just above the largest magnitude every tail is empty.
  candidates.push_back(candidates.empty()
                           ? std::numeric_limits<double>::min()
                           : std::nextafter(candidates.back(),
                                            std::numeric_limits<double>::infinity()));

  auto envelope = [&](double m) {
    double e = 0.0;
    for (const auto& t : tails) e = std::max(e, t.tail(m));
    return e;
  };
  const double budget = std::pow(epsilon, p);
  // The envelope is nonincreasing in M, so the first admissible candidate
  // is found by bisection.
  const auto it = std::partition_point(candidates.begin(), candidates.end(),
                                       [&](double m) { return !(envelope(m) < budget); });
  if (it != candidates.end() && *it <= m_max) {
    r.verdict = true;
    r.threshold = *it;
    r.envelope_at_threshold = envelope(*it);
  }
  return r;
}

std::vector<double> convergence_in_measure(const SequenceSample& sample,
                                           const DiscreteField& u, double epsilon) {
  require_common_grid(sample);
  require_same_layout(sample.terms.front(), u);
  std::vector<double> out;
  const double dx = u.grid().dx();
  for (const auto& term : sample.terms) {
    std::size_t count = 0;
    std::vector<double> diff(u.components());
    for (std::size_t i = 0; i < u.size(); ++i) {
      auto a = term[i];
      auto b = u[i];
      for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = a[c] - b[c];
      if (magnitude(diff) > epsilon) ++count;
    }
    out.push_back(dx * static_cast<double>(count));
  }
  return out;
}

bool vanishes(std::span<const double> series, double tolerance) {
  if (series.empty()) return false;
  if (!(series.back() < tolerance)) return false;
  for (std::size_t k = series.size() / 2 + 1; k < series.size(); ++k) {
    if (series[k] > series[k - 1]) return false;
  }
  return true;
}

bool grows_without_bound(std::span<const double> series) {
  if (series.size() < 3) return false;
  const std::size_t start = series.size() / 2;
  std::vector<double> inc;
  for (std::size_t k = std::max<std::size_t>(start, 1); k < series.size(); ++k) {
    inc.push_back(series[k] - series[k - 1]);
  }
  for (double d : inc) {
    if (!(d > 0.0)) return false;
  }
  return inc.back() >= 0.5 * inc.front();
}

VitaliVerdict vitali_verdict(const SequenceSample& sample, const DiscreteField& u,
                             double p, const VitaliOptions& options) {
  require_common_grid(sample);
  VitaliVerdict v;
  v.p = p;
  v.indices = sample.indices;
  const double m_max = options.m_max.value_or(options.m_scale * (1.0 + max_magnitude(u)));
  v.integrability = uniform_p_integrability(sample, p, options.epsilon, m_max);
  v.uniformly_p_integrable = v.integrability.verdict;
  v.measure_deviation = convergence_in_measure(sample, u, options.measure_epsilon);
  v.converges_in_measure = vanishes(v.measure_deviation, options.vanish_tolerance);
  v.lp_convergent = v.uniformly_p_integrable && v.converges_in_measure;
  for (const auto& term : sample.terms) v.lp_distances.push_back(lp_distance(term, u, p));
  v.lp_decay = vanishes(v.lp_distances, options.vanish_tolerance);
  v.consistent = v.lp_convergent == v.lp_decay;
  return v;
}

nlohmann::json vitali_to_json(const VitaliVerdict& v) {
  nlohmann::json upi{{"verdict", v.integrability.verdict},
                     {"epsilon", v.integrability.epsilon},
                     {"m_max", v.integrability.m_max},
                     {"n_first", v.integrability.n_first},
                     {"n_last", v.integrability.n_last}};
  if (v.integrability.threshold) {
    upi["M_found"] = *v.integrability.threshold;
    upi["envelope_at_M"] = v.integrability.envelope_at_threshold;
  } else {
    upi["M_found"] = nullptr;
  }
  return {{"p", v.p},
          {"n", v.indices},
          {"uniformly_p_integrable", v.uniformly_p_integrable},
          {"uniform_integrability_witness", upi},
          {"converges_in_measure", v.converges_in_measure},
          {"measure_deviation", v.measure_deviation},
          {"lp_convergent", v.lp_convergent},
          {"lp_distances", v.lp_distances},
          {"lp_decay", v.lp_decay},
          {"consistent", v.consistent}};
}

namespace {

// Largest root of the convex map g(l) = h(l) - slope l, or 0 when g >= 0
// on [0, inf). Returns nullopt when no nonnegative right tail is found.
std::optional<double> superlinear_crossing(const EntropySpec& h, double slope) {
  auto g = [&](double l) { return eval_h(h, l) - slope * l; };
  double hi = 1.0;
  int guard = 0;
  while (!(g(hi) >= 0.0 && g(hi * (1.0 + 1e-6)) >= g(hi))) {
    hi *= 2.0;
    if (++guard > 1000 || !std::isfinite(hi)) return std::nullopt;
  }
  // Golden-section search for the minimiser of g on [0, hi].
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-14 * hi; ++it) {
    if (g(c) < g(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - kInvPhi * (b - a);
    d = a + kInvPhi * (b - a);
  }
  double lo = 0.5 * (a + b);
  if (std::min({g(lo), g(0.0)}) >= 0.0) return 0.0;
  if (g(0.0) < g(lo)) lo = 0.0;
  double up = hi;
  for (int it = 0; it < 200 && up - lo > 1e-15 * up; ++it) {
    const double mid = 0.5 * (lo + up);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return up;
}

}  // namespace

DlvpResult dlvp_probe(const SequenceSample& sample, const EntropySpec& h,
                      const DlvpOptions& options) {
  require_common_grid(sample);
  DlvpResult r;
  r.indices = sample.indices;
  double observed_max = 0.0;
  for (const auto& term : sample.terms) {
    CompensatedSum s;
    for (std::size_t i = 0; i < term.size(); ++i) s.add(eval_h(h, term[i]));
    r.entropies.push_back(term.grid().dx() * s.value());
    observed_max = std::max(observed_max, max_magnitude(term));
  }
  r.sup_entropy = *std::max_element(r.entropies.begin(), r.entropies.end());
  r.unbounded_trend = grows_without_bound(r.entropies);

  GrowthProbe probe;
  probe.lambda_min = 0.0;
  probe.lambda_max = std::max(16.0, 4.0 * observed_max);
  probe.samples = 4001;
  r.superlinear_certified = validate_growth(h, 1.0, 1.0, probe).superlinear_ok;
  if (!r.superlinear_certified) {
    r.note = "inapplicable: superlinear growth of h not certified on [0, " +
             format_number(probe.lambda_max) + "]";
    return r;
  }
  if (r.unbounded_trend) {
    r.note = "inapplicable: int h(u_n) keeps growing along the sample";
    return r;
  }
  if (r.sup_entropy < 0.0) {
    r.note = "inapplicable: negative entropy integral";
    return r;
  }
  r.applicable = true;
  r.implied_uniform_integrability = true;
  for (double eps : options.epsilons) {
    DlvpLevel lv;
    lv.epsilon = eps;
    lv.slope = r.sup_entropy > 0.0 ? 2.0 * r.sup_entropy / eps : 1.0 / eps;
    const auto lambda = superlinear_crossing(h, lv.slope);
    if (!lambda) {
      r.note = "no crossing h(l) >= M l found for eps = " + format_number(eps);
      r.implied_uniform_integrability = false;
      r.levels.push_back(lv);
      continue;
    }
    lv.lambda = *lambda;
    lv.bound = r.sup_entropy / lv.slope;
    for (const auto& term : sample.terms) {
      lv.observed_tail = std::max(lv.observed_tail, p_tail(term, 1.0, lv.lambda));
    }
    lv.certified = lv.bound < eps && lv.observed_tail <= lv.bound * (1.0 + 1e-12);
    r.implied_uniform_integrability = r.implied_uniform_integrability && lv.certified;
    r.levels.push_back(lv);
  }
  return r;
}

nlohmann::json dlvp_to_json(const DlvpResult& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : r.levels) {
    levels.push_back({{"epsilon", lv.epsilon},
                      {"M", lv.slope},
                      {"Lambda", lv.lambda},
                      {"observed_tail", lv.observed_tail},
                      {"bound", lv.bound},
                      {"certified", lv.certified}});
  }
  return {{"n", r.indices},
          {"entropies", r.entropies},
          {"sup_entropy", r.sup_entropy},
          {"superlinear_certified", r.superlinear_certified},
          {"unbounded_trend", r.unbounded_trend},
          {"applicable", r.applicable},
          {"implied_uniform_integrability", r.implied_uniform_integrability},
          {"levels", levels},
          {"note", r.note}};
}

double cutoff_weight(double m, double magnitude) {
  if (magnitude <= m) return 1.0;
  if (magnitude <= m + 1.0) return m - magnitude + 1.0;
  return 0.0;
}

double limit_tail_bound(const EntropySpec& h, const DiscreteField& u, double c,
                        double m) {
  CompensatedSum s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = 1.0 - cutoff_weight(m, magnitude(u[i]));
    if (w != 0.0) s.add(eval_h(h, u[i]) * w);
  }
  return 4.0 * c * u.grid().dx() * s.value();
}

}  // namespace relent
