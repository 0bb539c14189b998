#pragma once

// Dense linear-algebra substrate for leg-typed tensor maps.  A map carries
// its domain and codomain words; composition and tensoring check the words,
// not just the matrix shapes (so "ab" and "ba" spaces of equal dimension do
// not silently mix).
//
// Multi-index convention: legs are numbered left to right and the leftmost
// leg is the most significant digit, i.e. the basis vector e_{v_1} (x) ... (x)
// e_{v_k} sits at flat index ((v_1*n + v_2)*n + ...).  This matches the
// standard Kronecker product, kron(A, B) acting on leg1 (x) leg2.

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qlattice/words.hpp"

namespace qlat {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct compute_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n^len with overflow guard (legs beyond ~2^62 make no sense here anyway).
Index pow_dim(int n, std::size_t len);

struct LegSpace {
  int n = 0;
  Word word;
  Index dim() const { return pow_dim(n, word.size()); }
};

// Linear map H^{(x) dom} -> H^{(x) cod} with matrix of shape dim(cod) x dim(dom).
struct TensorMap {
  int n = 0;
  Word dom, cod;
  Mat mat;

  TensorMap() = default;
  TensorMap(int n_, Word dom_, Word cod_, Mat m);

  Index dom_dim() const { return pow_dim(n, dom.size()); }
  Index cod_dim() const { return pow_dim(n, cod.size()); }

  static TensorMap identity(int n, const Word& w);
  TensorMap adjoint() const;
  bool same_signature(const TensorMap& o) const {
    return n == o.n && dom == o.dom && cod == o.cod;
  }
};

// xi(A) = sum_{ij} A_{ij} e_i (x) e_j as a map C -> H (x) Hbar (word "ab").
// The defining identity (1 (x) V) xi(M) = xi(M V^t) holds for V acting on the
// second leg.
TensorMap xi(const Mat& A);
Vec xi_vec(const Mat& A);  // the bare n^2 coefficient vector of xi(A)

Mat kron(const Mat& a, const Mat& b);

// Tensor product: (A (x) B) with domain dom(A)+dom(B), codomain cod(A)+cod(B).
TensorMap tensor(const TensorMap& a, const TensorMap& b);
// Composition a after b; requires cod(b) == dom(a) as words.
TensorMap compose(const TensorMap& a, const TensorMap& b);

// Hilbert-Schmidt inner product Tr(a^* b) and Frobenius norm.
Cplx hs_inner(const Mat& a, const Mat& b);
double hs_norm(const Mat& a);

// --- windowed applications (avoid building id (x) op (x) id densely) ---

// v is indexed by (left, mid_in, right); returns the vector indexed by
// (left, mid_out, right) obtained by applying op (shape mid_out x mid_in) to
// the middle factor.
Vec apply_middle_vec(const Mat& op, const Vec& v, Index left, Index mid_in,
                     Index mid_out, Index right);
// Contract a covector (1 x P row) against the first / last factor of v.
Vec contract_prefix(const Eigen::RowVectorXcd& cov, const Vec& v, Index rest);
Vec contract_suffix(const Eigen::RowVectorXcd& cov, const Vec& v, Index rest);
// Insert a fixed vector u between positions: v over (left, right) becomes
// the vector over (left, dim(u), right) equal to v (x) u reordered.
Vec insert_middle(const Vec& u, const Vec& v, Index left, Index right);

// Dense id_left (x) op (x) id_right (only for small dimensions).
Mat embed_middle(const Mat& op, Index left, Index right);

// Apply op to legs [pos, pos+len) of a matrix living on `legs` legs of local
// dimension n: returns (id (x) op (x) id) * m. op must be square on len legs.
Mat apply_at(const Mat& op, const Mat& m, int n, std::size_t legs, std::size_t pos,
             std::size_t len);

// --- operator spans ---

// HS-orthonormal family spanning a subspace of maps dom -> cod.
struct OperatorSpan {
  int n = 0;
  Word dom, cod;
  std::vector<Mat> basis;
  std::size_t dim() const { return basis.size(); }
};

// SVD-based orthonormalization; keeps singular directions with
// sigma > tol * sigma_max.  All maps must share the signature.
OperatorSpan orthonormalize(int n, const Word& dom, const Word& cod,
                            const std::vector<Mat>& maps, double tol = 1e-9);
OperatorSpan orthonormalize(const std::vector<TensorMap>& maps, double tol = 1e-9);

// Relative residual of x against the span (0 = contained).  If proj is given,
// the HS-orthogonal projection is written there.
double span_residual(const OperatorSpan& span, const Mat& x, Mat* proj = nullptr);

// Smallest unital *-algebra span containing gens (dom == cod required):
// alternates adjoints / pairwise products with re-orthonormalization until
// the dimension stabilizes.
OperatorSpan algebra_closure(const OperatorSpan& gens, double tol = 1e-9,
                             int max_rounds = 64);

}  // namespace qlat
