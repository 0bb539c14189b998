#pragma once

// The Popa system of a backend: cells A_{ij} = End(H^{(x)[i,j]}) for
// 0 <= i <= j <= bound, Jones projections e_k on legs [k-2, k], the canonical
// trace, and tau-preserving conditional expectations between nested cells.
// verify_axioms exercises the commuting-square, Jones, Markov and commutation
// axioms numerically on seeded random elements; bratteli extracts simple
// summands, inclusion multiplicity matrices and trace weights.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qlattice/backend.hpp"

namespace qlat {

using CellKey = std::pair<int, int>;

struct LatticeCell {
  Word word;                    // interval(i,j)
  OperatorSpan span;            // HS-orthonormal basis of the cell algebra
  Mat rho;                      // trace density: tau(x) = Tr(rho x)
  std::vector<Mat> rho_basis;   // basis[s] * rho, for tau inner products
  Eigen::LDLT<Mat> tau_gram;    // factor of G_{st} = tau(b_s^* b_t)
};

struct PopaLattice {
  Backend backend;
  DualityMaps dual;
  double lambda = 0.0;
  int bound = 0;
  double tol = 1e-9;
  std::map<CellKey, LatticeCell> cells;
  std::map<int, TensorMap> jones;  // e_k for 2 <= k <= bound

  const LatticeCell& cell(int i, int j) const;
};

// Largest sanctioned bound for the backend's leg dimension: 5 for n <= 2,
// 4 for n = 3, 3 beyond.
int default_bound(const Backend& b);

// Build all cells up to the bound.  bound above default_bound(b) is refused.
PopaLattice build_lattice(const Backend& b, int bound, double tol = 1e-9);

// lambda^{-1} = d^2.
double lattice_index(const PopaLattice& L);

// Pad x in A_{ij} with identity legs into A_{kl}, k <= i <= j <= l.
Mat embed_cell(const PopaLattice& L, int i, int j, int k, int l, const Mat& x);

// Jones projection e_k embedded into A_{lo,hi} (lo <= k-2, k <= hi).
Mat jones_in_cell(const PopaLattice& L, int k, int lo, int hi);

// tau-preserving conditional expectation A_{ij} -> A_{kl} for
// i <= k <= l <= j: rectangle contraction onto End(H^{(x)[k,l]}) followed by
// tau-orthogonal projection onto the cell span.  If in_span_residual is
// given, it receives the relative distance of the contraction from the cell
// span (zero when the expectation of a lattice element is itself a lattice
// element, which is what the axioms assert).
Mat cell_expectation(const PopaLattice& L, int i, int j, int k, int l,
                     const Mat& x, double* in_span_residual = nullptr);

struct AxiomReport {
  struct Entry {
    std::string family;
    std::string detail;
    double residual = 0.0;
  };
  std::vector<Entry> entries;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  bool pass(double threshold) const { return max_residual < threshold; }
  double family_max(const std::string& family) const;
};

// Families checked: commuting_square, jones_reduction, markov, commutation,
// temperley_lieb, expectation_in_cell, jones_membership, inclusion,
// trace_compat, trace_gram.  Requires bound >= 3.
AxiomReport verify_axioms(const PopaLattice& L, std::uint64_t seed = 12345);

// Span equality of A_{i,j} and A_{i+2,j+2} (same leg word).  Requires
// bound >= 4 so at least one nontrivial pair exists.
AxiomReport shift_check(const PopaLattice& L);

struct CellSummands {
  CellKey key;
  std::vector<int> dims;              // d_k, matrix sizes of the summands
  std::vector<int> mults;             // m_k, ambient multiplicities
  std::vector<double> weights;        // t_k = tau(minimal projection)
  std::vector<Mat> central_projections;
  std::vector<Mat> minimal_projections;
};

struct InclusionEdge {
  CellKey from, to;
  // mult[k][l] = multiplicity of `from`-summand l inside `to`-summand k
  std::vector<std::vector<int>> mult;
};

struct BratteliData {
  std::map<CellKey, CellSummands> summands;
  std::vector<InclusionEdge> inclusions;  // horizontal (i,j+1) and vertical (i-1,j)
  std::uint64_t seed = 0;
};

// Center-based decomposition of every cell.  Throws compute_error when the
// spectral clustering of the random central element is ambiguous (cluster
// separators not clearly above the intra-cluster spread), naming the cell.
BratteliData bratteli(const PopaLattice& L, std::uint64_t seed = 777);

// DOT rendering: one cluster per cell, vertices labeled with summand
// dimension and trace weight, edges labeled with multiplicities.
std::string bratteli_dot(const BratteliData& data);

}  // namespace qlat
