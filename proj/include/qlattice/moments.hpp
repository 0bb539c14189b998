#pragma once

// Character moment tables, noncrossing partitions, free cumulants, and the
// free-product ("tilde") moment transform: the moments of z * chi(u) where z
// is a Haar unitary free from everything else.

#include <map>
#include <vector>

#include "qlattice/backend.hpp"

namespace qlat {

struct MomentTable {
  int max_len = 0;
  std::map<Word, count_t> entries;
  // Throws config_error when a required entry is missing.
  count_t at(const Word& w) const;
};

// moment(b, w) for every word up to max_len (parallel over words).
MomentTable moments_from_backend(const Backend& b, int max_len);

struct NCPartition {
  std::vector<std::vector<int>> blocks;  // each block sorted, blocks by minimum
};

// All noncrossing partitions of {0, ..., k-1}.  Guarded to k <= 14.
const std::vector<NCPartition>& nc_partitions(int k);

// Free cumulants of the pair (x, x^*) indexed by star-patterns ('a' = x,
// 'b' = x^*), via the Moebius recursion kappa(w) = m(w) - sum over proper
// noncrossing partitions of the block-product of shorter cumulants.
struct CumulantTable {
  int max_len = 0;
  std::map<Word, count_t> kappa;
  count_t at(const Word& w) const;
};
CumulantTable moment_to_cumulant(const MomentTable& m);

// Free cumulant of a Haar unitary z for a star-pattern ('a' = z, 'b' = z^*):
// nonzero exactly on alternating even patterns, with value
// (-1)^(m-1) Catalan(m-1) for length 2m.
count_t haar_cumulant(const Word& pattern);
// Reconstructs Haar moments from haar_cumulant over all patterns up to
// max_k and compares with tau(z^j) = [j == 0]; throws compute_error on any
// mismatch.  Runs lazily once per process from tilde_moments.
void validate_haar_cumulants(int max_k = 8);

// Tilde transform: entry(w) = tau((z chi)^{eps_1} ... ) where alpha expands
// to z x and beta to x^* z^*; evaluated by summing over noncrossing
// partitions of the 2k expanded slots whose blocks stay inside one alphabet.
// Exact integer arithmetic; words up to length 7 (nc_partitions guard).
MomentTable tilde_moments(const MomentTable& m);

// Independent oracle: word counts over the companion backend (Z * Gamma with
// gradings z g_i) of a dual-group backend.
MomentTable word_oracle_tilde(const Backend& b, int max_len);

}  // namespace qlat
