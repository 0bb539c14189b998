#pragma once

// Duality pairing data for a fundamental corepresentation with positive
// intertwiner matrix Q: cup/cap maps, Jones projections, quantum dimension,
// conditional expectations and the canonical trace on leg-interval algebras.
//
// Conventions: i_alpha = xi(Q) : C -> H (x) Hbar (word "ab"),
//              i_beta = xi((Q^-1)^t) : C -> Hbar (x) H (word "ba"),
//              p_alpha = i_beta^*, p_beta = i_alpha^*,
//              d = Tr(Q^2) = Tr(Q^-2), lambda = d^-2.

#include <utility>
#include <vector>

#include "qlattice/tensorops.hpp"

namespace qlat {

enum class Parity { even, odd };

struct QData {
  int n = 0;
  Mat q;  // Hermitian positive definite, balanced: Tr(q^2) == Tr(q^-2)
};

// Validates Hermitian positive-definiteness, rejects eigenvalue spread beyond
// 1e6, and rescales so that Tr(Q^2) = Tr(Q^-2).
QData make_qdata(const Mat& q_raw, double tol = 1e-9);

// Q from a unitary-implementing matrix F: positive square root of F^* F,
// transposed, then balanced as above.
QData q_from_F(const Mat& F, double tol = 1e-9);

struct DualityMaps {
  QData q;
  Mat q_inv;
  double d = 0;       // quantum dimension
  double lambda = 0;  // d^-2
  TensorMap i_alpha, i_beta, p_alpha, p_beta;
};

DualityMaps make_duality(const Mat& q_raw, double tol = 1e-9);
DualityMaps make_duality(const QData& q);

inline double quantum_dimension(const DualityMaps& dm) { return dm.d; }

// Rank-one Jones projection acting on two adjacent legs:
// even -> d^-1 i_alpha p_beta on H (x) Hbar ("ab"),
// odd  -> d^-1 i_beta p_alpha on Hbar (x) H ("ba").
TensorMap jones_projection(const DualityMaps& dm, Parity parity);
// Parity of the Jones projection e_j (legs j-1, j): even j -> even.
inline Parity jones_parity(int j) { return j % 2 == 0 ? Parity::even : Parity::odd; }

// Iterated cup i_w : C -> H^{(x) w hat(w)} and cap p_w = (i_{hat(w)})^* :
// H^{(x) hat(w) w} -> C, built one letter at a time.
TensorMap word_cup(const DualityMaps& dm, const Word& w);
TensorMap word_cap(const DualityMaps& dm, const Word& w);

// Conditional expectation onto the middle block: for x acting on r + a + w
// (an alternating composite), returns
//   d(r)^-1 d(w)^-1 (p_r (x) id (x) p_{hat(w)}) (id (x) x (x) id) (i_{hat(r)} (x) id (x) i_w)
// acting on H^{(x) a}.
TensorMap conditional_expectation(const DualityMaps& dm, const Word& r, const Word& a,
                                  const Word& w, const TensorMap& x);

// Canonical (Markov) trace on End(H^{(x) w}), w alternating; normalized so
// tau(id) = 1.
Cplx canonical_trace(const DualityMaps& dm, const TensorMap& x);
// Density matrix rho_w with tau(x) = Tr(rho_w x): tensor product over legs of
// Q^2/d on alpha legs and (Q^t)^-2/d on beta legs.
Mat trace_density(const DualityMaps& dm, const Word& w);

struct DualityReport {
  std::vector<std::pair<std::string, double>> checks;  // (name, residual)
  double max_residual = 0;
  bool pass(double threshold) const { return max_residual < threshold; }
};

// Snake identities, pairing normalizations p_beta i_alpha = p_alpha i_beta = d,
// cup nesting consistency for all splits of words up to max_len, Jones
// idempotence/self-adjointness, the braid-free reflection relation
// efe = lambda e, and (F*F)(E*E) = lambda id for the normalized rank-one
// generators E = Q/sqrt(d), F = Q^-1/sqrt(d) (xi(E) and xi(F^t) span the
// images of the even/odd Jones projections).
DualityReport verify_duality(const DualityMaps& dm, double tol = 1e-9, int max_len = 3);

}  // namespace qlat
