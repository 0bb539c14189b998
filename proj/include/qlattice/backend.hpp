#pragma once

// Corepresentation backends.  Each backend describes a fundamental
// corepresentation v together with enough structure to compute intertwiner
// spaces Hom(v^{(x) x}, v^{(x) y}) and character moments
//   moment(w) = dim Hom(1, v^{(x) w}).
//
//   finite_group: unitary representation pi of a finite group; legs carry pi
//                 on alpha and conj(pi) on beta.
//   dual_group:   diagonal corepresentation of a group algebra, given by a
//                 tuple of group elements grading the basis.
//   span_q:       the Temperley-Lieb style span backend generated by the
//                 duality cups/caps of a positive Q (free orthogonal type).

#include <map>
#include <optional>
#include <vector>

#include "qlattice/closure_engine.hpp"
#include "qlattice/duality.hpp"
#include "qlattice/groups.hpp"

namespace qlat {

using count_t = long long;

struct Backend {
  enum class Type { finite_group, dual_group, span_q };
  Type type = Type::span_q;
  int n = 0;

  // finite_group
  std::vector<std::vector<int>> mult_table;
  std::vector<Mat> rep;

  // dual_group
  GroupSpec group;
  std::vector<GroupSpec::El> generators;

  // duality data: Q = id for the group types, the balanced Q for span_q
  QData qdata;
  DualityMaps duality() const { return make_duality(qdata); }
};

// Constructors validate their inputs (group law, unitarity, homomorphism
// property within tol; element canonical forms; Q positivity).
Backend make_finite_group_backend(std::vector<std::vector<int>> mult_table,
                                  std::vector<Mat> rep, double tol = 1e-9);
Backend make_dual_group_backend(GroupSpec group, std::vector<GroupSpec::El> generators);
Backend make_span_q_backend(const Mat& q_raw, double tol = 1e-9);

// Grading of the standard basis of H^{(x) w} for dual-group backends:
// product over legs of g_{I_t} on alpha and g_{I_t}^{-1} on beta.
GroupSpec::El dual_grading(const Backend& b, const Word& w, const std::vector<int>& idx);

// Intertwiner space Hom(v^{(x) x}, v^{(x) y}) as an HS-orthonormal span of
// concrete matrices.
//   finite_group: averaging projector over the group on the bent space
//   dual_group:   matrix units pairing equal gradings
//   span_q:       iterated cup/cap closure with window |x| + |y|
OperatorSpan hom_basis(const Backend& b, const Word& x, const Word& y,
                       double tol = 1e-9);

// moment(w) = dim Hom(1, v^{(x) w}), an exact nonnegative integer.
//   finite_group: character sum (1/|G|) sum_g prod_legs chi / conj(chi)
//   dual_group:   walk count of gradings multiplying to the identity
//   span_q:       rank of the Gram matrix of noncrossing cup diagrams
count_t moment(const Backend& b, const Word& w);

// Independent second route for finite groups: rank of the fixed-point
// projector (1/|G|) sum_g rho_w(g).  Used for cross-checks.
count_t finite_group_fixed_point_dim(const Backend& b, const Word& w, double tol = 1e-9);

// Noncrossing opposite-letter pairings of w (each arc joins an alpha to a
// beta).  Exposed for the span_q Gram route and its tests.
std::vector<std::vector<int>> noncrossing_pairings(const Word& w);
// Number of such pairings (interval DP); equals the span_q moment at generic Q.
count_t noncrossing_pairing_count(const Word& w);

// Free-product companion of the backend: for generating gradings g_1..g_n,
// H = <g_i^-1 g_j>; if g_1 in H the companion group is Z * Gamma with
// gradings z g_i, otherwise Z * H with gradings z and g_1^-1 g_i.
struct TildeResult {
  Backend backend;          // dual_group over the companion free product
  bool absorbed = false;    // true in the g_1 in H case (companion = Z * Gamma)
  SubgroupInfo h_info;      // description of H
  std::string isomorphic_to;
};
TildeResult tilde_group(const Backend& b);

// The ambient companion backend (Z * Gamma with gradings z g_i) regardless of
// the case split; word counts over it realize the tilde moments directly.
Backend tilde_companion_backend(const Backend& b);

}  // namespace qlat
