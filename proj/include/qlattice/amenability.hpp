#pragma once

// Kesten-type amenability estimation from character moment sequences.
//
// The even moments m_2k of Re(chi(v)) are 2^{-2k} * sum over all words w of
// length 2k of moment(w); their 2k-th roots form a nondecreasing sequence of
// lower bounds for the top of the spectrum, which reaches the dimension n
// exactly in the amenable case.  The lattice variant applies the same
// machinery to the positive character chi(v (x) v-hat) via the moments
// moment((alpha beta)^k), whose growth rate is the squared norm of the
// principal graph; the amenable-lattice verdict additionally requires the
// canonical trace to be a trace (Q = id).

#include <string>
#include <vector>

#include "qlattice/backend.hpp"

namespace qlat {

enum class Verdict { amenable, non_amenable, inconclusive };

std::string verdict_name(Verdict v);

struct SpectralEstimate {
  std::vector<double> lower_bounds;    // l_k = s_k^{1/(stride k)}, k = 1..K
  std::vector<double> ratio_estimates; // r_k = (s_{k+1}/s_k)^{1/stride}
  double extrapolated = 0.0;
  int k_max = 0;                       // k_max actually used after clamping
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;
  double ceiling = 0.0;                // n for Kesten, d^2 for the lattice test
  // integer moment numerators s_k (k = 0..K) backing the lower bounds; for
  // Kesten s_k = N_{2k} with m_{2k} = N_{2k} / 2^{2k}, for the lattice test
  // s_k = moment((alpha beta)^k).  Denominators cancel in monotonicity
  // comparisons, so these support exact checks.
  std::vector<count_t> moment_numerators;
  bool monotone_exact = false;
};

struct LatticeAmenability {
  SpectralEstimate estimate;
  bool trace_flag = false;   // Q = id within tolerance
  double index = 0.0;        // lambda^{-1} = d^2
  bool index_is_square = false;
};

// N_k = sum over all words w of length k of moment(b, w), the number of
// closed walks of length k on the doubled generating set.  Exact integers.
//   dual free group:  birth-death walk count on the Cayley tree (exact)
//   dual other:       one group-element walk DP recording N_k at every level
//   finite group:     (1/|G|) sum_g (2 Re chi(g))^k, rounded integer
//   span_q:           per-word Gram-rank sums
std::vector<count_t> rechi_numerators(const Backend& b, int k_max);

// m_k = N_k / 2^k as doubles.
std::vector<double> rechi_moments(const Backend& b, int k_max);

// Estimate the top of the support of a moment sequence m_0..m_{k_max} of a
// probability measure, using the even entries: l_k = m_{2k}^{1/2k}, ratio
// estimates sqrt(m_{2k+2}/m_{2k}), and a log-linear fit of the model
// m_{2k} ~ C rho^{2k} k^{-gamma} over the last min(4, available) points.
// Fewer than 3 even moments with k >= 1 leaves the verdict inconclusive.
SpectralEstimate spectral_radius_estimate(const std::vector<double>& m, int k_max);

// Kesten criterion for the backend's discrete dual: amenable iff the norm of
// Re chi(v) reaches n.  Verdict policy: amenable if extrapolated >=
// n (1 - margin); non_amenable if extrapolated <= n (1 - 3 margin) and the
// lower bounds have visibly converged (|l_K - l_{K-1}| < margin n); else
// inconclusive.
SpectralEstimate kesten_test(const Backend& b, int k_max, double margin = 0.02);

// Lattice amenability: growth of moment((alpha beta)^k) estimates the
// squared principal-graph norm; amenable lattice iff the estimate reaches
// d^2 = lambda^{-1} and Q = id.  A failing trace flag is decisive.
LatticeAmenability lattice_amenability_test(const Backend& b, int k_max,
                                            double margin = 0.02);

// Exact check that l_k = s_k^{1/(stride k)} is nondecreasing: compares
// s_k^{k+1} <= s_{k+1}^k in integer arithmetic (s indexed from k = 0; the
// k = 0 entry is ignored).
bool roots_monotone_exact(const std::vector<count_t>& s);

}  // namespace qlat
