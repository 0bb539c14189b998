#include "qlattice/amenability.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>

#include "qlattice/runtime.hpp"

namespace qlat {

namespace {

using big_int = boost::multiprecision::cpp_int;

// Walk counts on the Cayley tree of a free group: the 2r-regular tree seen
// from the base point is a birth-death chain in the distance coordinate
// (one step back, 2r - 1 steps further out).
std::vector<count_t> free_group_walk_counts(int rank, int k_max) {
  std::vector<count_t> out(static_cast<std::size_t>(k_max) + 1, 0);
  std::vector<count_t> w(static_cast<std::size_t>(k_max) + 1, 0);
  w[0] = 1;
  out[0] = 1;
  count_t deg = 2 * static_cast<count_t>(rank);
  for (int k = 1; k <= k_max; ++k) {
    std::vector<count_t> next(w.size(), 0);
    for (int d = 0; d <= k_max; ++d) {
      if (w[static_cast<std::size_t>(d)] == 0) continue;
      count_t c = w[static_cast<std::size_t>(d)];
      if (d == 0) {
        next[1] += c * deg;
      } else {
        next[static_cast<std::size_t>(d - 1)] += c;
        if (d + 1 <= k_max) next[static_cast<std::size_t>(d + 1)] += c * (deg - 1);
      }
    }
    w.swap(next);
    out[static_cast<std::size_t>(k)] = w[0];
  }
  return out;
}

std::vector<count_t> group_walk_counts(const GroupSpec& g,
                                       const std::vector<GroupSpec::El>& gens,
                                       int k_max) {
  std::vector<GroupSpec::El> steps;
  for (const auto& e : gens) steps.push_back(e);
  for (const auto& e : gens) steps.push_back(g.inv(e));
  GroupSpec::El id = g.identity();
  std::map<GroupSpec::El, count_t> state;
  state[id] = 1;
  std::vector<count_t> out;
  out.push_back(1);
  constexpr std::size_t kStateCap = 8'000'000;
  for (int k = 1; k <= k_max; ++k) {
    std::map<GroupSpec::El, count_t> next;
    for (const auto& [el, c] : state)
      for (const auto& s : steps) next[g.mul(el, s)] += c;
    if (next.size() > kStateCap)
      throw compute_error(
          "walk state space exceeded 8e6 group elements; reduce k_max");
    state.swap(next);
    auto it = state.find(id);
    out.push_back(it == state.end() ? 0 : it->second);
  }
  return out;
}

// Fit log s_k = log C + (stride k) log rho - gamma log k over the trailing
// points and report rho; ties the estimate to the random-walk local limit
// shape C rho^{stride k} k^{-gamma}.
double fit_growth_rate(const std::vector<double>& s, int stride) {
  std::vector<int> ks;
  for (int k = 1; k < static_cast<int>(s.size()); ++k)
    if (s[static_cast<std::size_t>(k)] > 0) ks.push_back(k);
  if (ks.size() > 4) ks.erase(ks.begin(), ks.end() - 4);
  if (ks.size() < 3) return 0.0;
  Eigen::MatrixXd a(static_cast<Index>(ks.size()), 3);
  Eigen::VectorXd y(static_cast<Index>(ks.size()));
  for (std::size_t r = 0; r < ks.size(); ++r) {
    double k = ks[r];
    a(static_cast<Index>(r), 0) = 1.0;
    a(static_cast<Index>(r), 1) = stride * k;
    a(static_cast<Index>(r), 2) = -std::log(k);
    y(static_cast<Index>(r)) = std::log(s[static_cast<std::size_t>(ks[r])]);
  }
  Eigen::VectorXd beta =
      a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  double rho = std::exp(beta(1));
  return std::isfinite(rho) ? rho : 0.0;
}

// s_k are the integer moment numerators at even levels (k = 0..K); the
// lower bounds are s_k^{1/(stride k)} and the denominators 2^{stride k}
// rescale them uniformly, so growth estimation happens on the rescaled
// doubles handed in through `values`.
SpectralEstimate estimate_from_sequence(const std::vector<double>& values,
                                        std::vector<count_t> numerators,
                                        int stride, int k_max_used) {
  SpectralEstimate est;
  est.k_max = k_max_used;
  est.moment_numerators = std::move(numerators);
  int usable = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    double v = values[static_cast<std::size_t>(k)];
    if (v <= 0) break;
    est.lower_bounds.push_back(std::pow(v, 1.0 / (stride * k)));
    usable = k;
  }
  for (int k = 1; k < usable; ++k)
    est.ratio_estimates.push_back(std::pow(
        values[static_cast<std::size_t>(k + 1)] / values[static_cast<std::size_t>(k)],
        1.0 / stride));
  double rho = fit_growth_rate(values, stride);
  if (rho > 0) {
    est.extrapolated = rho;
  } else {
    est.extrapolated = est.lower_bounds.empty() ? 0.0 : est.lower_bounds.back();
    est.verdict = Verdict::inconclusive;
  }
  est.monotone_exact = roots_monotone_exact(est.moment_numerators);
  return est;
}

Verdict decide(const SpectralEstimate& est, double ceiling, double margin) {
  if (est.lower_bounds.size() < 3) return Verdict::inconclusive;
  if (est.extrapolated >= ceiling * (1.0 - margin)) return Verdict::amenable;
  double tail = std::abs(est.lower_bounds.back() -
                         est.lower_bounds[est.lower_bounds.size() - 2]);
  bool converged = tail < margin * ceiling;
  if (est.extrapolated <= ceiling * (1.0 - 3.0 * margin) && converged)
    return Verdict::non_amenable;
  return Verdict::inconclusive;
}

int exactness_cap(const Backend& b) {
  // (2n)^k bounds every walk numerator; keep it below 2^52 so the
  // double-precision character route rounds exactly as well.
  double per_step = std::log2(2.0 * std::max(1, b.n));
  return std::max(2, static_cast<int>(std::floor(52.0 / per_step)));
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::amenable: return "amenable";
    case Verdict::non_amenable: return "non_amenable";
    default: return "inconclusive";
  }
}

bool roots_monotone_exact(const std::vector<count_t>& s) {
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    if (s[k] < 0 || s[k + 1] < 0) return false;
    big_int lhs = boost::multiprecision::pow(big_int(s[k]),
                                             static_cast<unsigned>(k + 1));
    big_int rhs = boost::multiprecision::pow(big_int(s[k + 1]),
                                             static_cast<unsigned>(k));
    if (lhs > rhs) return false;
  }
  return true;
}

std::vector<count_t> rechi_numerators(const Backend& b, int k_max) {
  if (k_max < 0) throw config_error("k_max must be nonnegative");
  if (k_max > exactness_cap(b))
    throw config_error("k_max too large for exact 64-bit walk counts");
  switch (b.type) {
    case Backend::Type::dual_group: {
      if (b.group.kind == GroupSpec::Kind::free) {
        bool standard = static_cast<int>(b.generators.size()) == b.group.rank;
        if (standard)
          for (int i = 0; i < b.group.rank && standard; ++i)
            standard = b.generators[static_cast<std::size_t>(i)] ==
                       GroupSpec::El{i + 1};
        if (standard) return free_group_walk_counts(b.group.rank, k_max);
      }
      return group_walk_counts(b.group, b.generators, k_max);
    }
    case Backend::Type::finite_group: {
      std::size_t order = b.mult_table.size();
      std::vector<double> two_re_chi(order);
      for (std::size_t g = 0; g < order; ++g)
        two_re_chi[g] = 2.0 * b.rep[g].trace().real();
      std::vector<count_t> out;
      for (int k = 0; k <= k_max; ++k) {
        double sum = 0.0;
        for (std::size_t g = 0; g < order; ++g)
          sum += std::pow(two_re_chi[g], k);
        double value = sum / static_cast<double>(order);
        double rounded = std::round(value);
        if (std::abs(value - rounded) > 1e-6)
          throw compute_error("walk count is not close to an integer");
        out.push_back(static_cast<count_t>(rounded));
      }
      return out;
    }
    case Backend::Type::span_q:
    default: {
      std::vector<count_t> out(static_cast<std::size_t>(k_max) + 1, 0);
      out[0] = 1;
      for (int k = 1; k <= k_max; ++k) {
        std::vector<Word> words = all_words(k);
        std::vector<count_t> vals(words.size(), 0);
        parallel_for(words.size(),
                     [&](std::size_t i) { vals[i] = moment(b, words[i]); });
        count_t total = 0;
        for (count_t v : vals) total += v;
        out[static_cast<std::size_t>(k)] = total;
      }
      return out;
    }
  }
}

std::vector<double> rechi_moments(const Backend& b, int k_max) {
  std::vector<count_t> nums = rechi_numerators(b, k_max);
  std::vector<double> out(nums.size());
  for (std::size_t k = 0; k < nums.size(); ++k)
    out[k] = std::ldexp(static_cast<double>(nums[k]), -static_cast<int>(k));
  return out;
}

SpectralEstimate spectral_radius_estimate(const std::vector<double>& m, int k_max) {
  if (k_max >= static_cast<int>(m.size()))
    throw config_error("moment sequence shorter than k_max");
  std::vector<double> evens;
  for (int k = 0; 2 * k <= k_max; ++k) evens.push_back(m[static_cast<std::size_t>(2 * k)]);
  SpectralEstimate est = estimate_from_sequence(evens, {}, 2, k_max);
  est.monotone_exact = false;  // no integer numerators supplied
  return est;
}

SpectralEstimate kesten_test(const Backend& b, int k_max, double margin) {
  if (margin <= 0 || margin >= 0.5) throw config_error("margin must lie in (0, 0.5)");
  int cap = b.type == Backend::Type::span_q ? 10 : 24;
  cap = std::min(cap, exactness_cap(b));
  int used = std::min(k_max, cap);
  std::vector<count_t> nums = rechi_numerators(b, used);
  std::vector<double> evens;
  std::vector<count_t> even_nums;
  for (int k = 0; 2 * k <= used; ++k) {
    even_nums.push_back(nums[static_cast<std::size_t>(2 * k)]);
    evens.push_back(std::ldexp(static_cast<double>(nums[static_cast<std::size_t>(2 * k)]),
                               -2 * k));
  }
  SpectralEstimate est = estimate_from_sequence(evens, std::move(even_nums), 2, used);
  est.margin = margin;
  est.ceiling = static_cast<double>(b.n);
  est.verdict = decide(est, est.ceiling, margin);
  return est;
}

LatticeAmenability lattice_amenability_test(const Backend& b, int k_max,
                                            double margin) {
  if (margin <= 0 || margin >= 0.5) throw config_error("margin must lie in (0, 0.5)");
  int cap = b.type == Backend::Type::span_q ? 8 : 12;
  int used = std::min(k_max, cap);

  std::vector<count_t> mus(static_cast<std::size_t>(used) + 1, 0);
  std::vector<double> values(static_cast<std::size_t>(used) + 1, 0.0);
  for (int k = 0; k <= used; ++k) {
    std::string w;
    for (int t = 0; t < k; ++t) w += "ab";
    mus[static_cast<std::size_t>(k)] = moment(b, Word(w));
    values[static_cast<std::size_t>(k)] =
        static_cast<double>(mus[static_cast<std::size_t>(k)]);
  }

  LatticeAmenability out;
  out.estimate = estimate_from_sequence(values, std::move(mus), 1, used);
  out.estimate.margin = margin;

  DualityMaps dm = b.duality();
  double d2 = dm.d * dm.d;
  out.estimate.ceiling = d2;
  out.index = d2;
  double root = std::sqrt(d2);
  out.index_is_square = std::abs(root - std::round(root)) <= 1e-6;
  Mat diff = b.qdata.q - Mat::Identity(b.n, b.n);
  out.trace_flag = diff.cwiseAbs().maxCoeff() <= 1e-9;

  if (!out.trace_flag) {
    out.estimate.verdict = Verdict::non_amenable;
  } else {
    out.estimate.verdict = decide(out.estimate, d2, margin);
  }
  return out;
}

}  // namespace qlat
