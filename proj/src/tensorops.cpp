#include "qlattice/tensorops.hpp"

#include <Eigen/SVD>

namespace qlat {

Index pow_dim(int n, std::size_t len) {
  if (n <= 0) throw config_error("leg dimension must be positive");
  Index d = 1;
  for (std::size_t k = 0; k < len; ++k) {
    if (d > (Index(1) << 56) / n) throw config_error("tensor dimension overflow");
    d *= n;
  }
  return d;
}

TensorMap::TensorMap(int n_, Word dom_, Word cod_, Mat m)
    : n(n_), dom(std::move(dom_)), cod(std::move(cod_)), mat(std::move(m)) {
  if (mat.rows() != cod_dim() || mat.cols() != dom_dim())
    throw config_error("tensor map matrix shape does not match its words");
}

TensorMap TensorMap::identity(int n, const Word& w) {
  Index d = pow_dim(n, w.size());
  return TensorMap(n, w, w, Mat::Identity(d, d));
}

TensorMap TensorMap::adjoint() const { return TensorMap(n, cod, dom, mat.adjoint()); }

Vec xi_vec(const Mat& A) {
  if (A.rows() != A.cols()) throw config_error("xi expects a square matrix");
  Index n = A.rows();
  Vec v(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) v(i * n + j) = A(i, j);
  return v;
}

TensorMap xi(const Mat& A) {
  return TensorMap(static_cast<int>(A.rows()), Word(""), Word("ab"), xi_vec(A));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

TensorMap tensor(const TensorMap& a, const TensorMap& b) {
  if (a.n != b.n) throw config_error("tensor: leg dimensions differ");
  return TensorMap(a.n, a.dom + b.dom, a.cod + b.cod, kron(a.mat, b.mat));
}

TensorMap compose(const TensorMap& a, const TensorMap& b) {
  if (a.n != b.n) throw config_error("compose: leg dimensions differ");
  if (!(a.dom == b.cod))
    throw config_error("compose: domain word '" + a.dom.text() +
                       "' does not match codomain word '" + b.cod.text() + "'");
  return TensorMap(a.n, b.dom, a.cod, a.mat * b.mat);
}

Cplx hs_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }
double hs_norm(const Mat& a) { return a.norm(); }

Vec apply_middle_vec(const Mat& op, const Vec& v, Index left, Index mid_in,
                     Index mid_out, Index right) {
  if (op.rows() != mid_out || op.cols() != mid_in || v.size() != left * mid_in * right)
    throw config_error("apply_middle_vec: shape mismatch");
  Vec out = Vec::Zero(left * mid_out * right);
  for (Index l = 0; l < left; ++l) {
    // view the slice as a (mid x right) matrix, multiply from the left
    Eigen::Map<const Mat> in_block(v.data() + l * mid_in * right, right, mid_in);
    Eigen::Map<Mat> out_block(out.data() + l * mid_out * right, right, mid_out);
    // column-major maps: entry (r, m) is v[l, m, r]
    out_block = in_block * op.transpose();
  }
  return out;
}

Vec contract_prefix(const Eigen::RowVectorXcd& cov, const Vec& v, Index rest) {
  Index p = cov.cols();
  if (v.size() != p * rest) throw config_error("contract_prefix: shape mismatch");
  Eigen::Map<const Mat> block(v.data(), rest, p);
  return block * cov.transpose();
}

Vec contract_suffix(const Eigen::RowVectorXcd& cov, const Vec& v, Index rest) {
  Index s = cov.cols();
  if (v.size() != rest * s) throw config_error("contract_suffix: shape mismatch");
  Eigen::Map<const Mat> block(v.data(), s, rest);
  return (cov * block).transpose();
}

Vec insert_middle(const Vec& u, const Vec& v, Index left, Index right) {
  if (v.size() != left * right) throw config_error("insert_middle: shape mismatch");
  Index m = u.size();
  Vec out(left * m * right);
  for (Index l = 0; l < left; ++l)
    for (Index k = 0; k < m; ++k)
      out.segment((l * m + k) * right, right) = u(k) * v.segment(l * right, right);
  return out;
}

Mat embed_middle(const Mat& op, Index left, Index right) {
  Mat lk = kron(Mat::Identity(left, left), op);
  if (right == 1) return lk;
  return kron(lk, Mat::Identity(right, right));
}

Mat apply_at(const Mat& op, const Mat& m, int n, std::size_t legs, std::size_t pos,
             std::size_t len) {
  if (pos + len > legs) throw config_error("apply_at: window out of range");
  Index left = pow_dim(n, pos);
  Index right = pow_dim(n, legs - pos - len);
  return embed_middle(op, left, right) * m;
}

OperatorSpan orthonormalize(int n, const Word& dom, const Word& cod,
                            const std::vector<Mat>& maps, double tol) {
  OperatorSpan out{n, dom, cod, {}};
  if (maps.empty()) return out;
  Index rows = maps.front().rows(), cols = maps.front().cols();
  Mat stacked(rows * cols, static_cast<Index>(maps.size()));
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (maps[k].rows() != rows || maps[k].cols() != cols)
      throw config_error("orthonormalize: inconsistent shapes");
    stacked.col(static_cast<Index>(k)) =
        Eigen::Map<const Vec>(maps[k].data(), rows * cols);
  }
  // JacobiSVD: BDCSVD's deflation can emit NaN columns on complex stacks whose
  // spectrum has many exact zeros, which is the common case here.
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) <= tol * smax) break;
    Vec col = svd.matrixU().col(k);
    out.basis.push_back(Eigen::Map<const Mat>(col.data(), rows, cols));
  }
  return out;
}

OperatorSpan orthonormalize(const std::vector<TensorMap>& maps, double tol) {
  if (maps.empty()) throw config_error("orthonormalize: empty family needs a signature");
  std::vector<Mat> raw;
  raw.reserve(maps.size());
  for (auto& m : maps) {
    if (!m.same_signature(maps.front()))
      throw config_error("orthonormalize: signatures differ");
    raw.push_back(m.mat);
  }
  return orthonormalize(maps.front().n, maps.front().dom, maps.front().cod, raw, tol);
}

double span_residual(const OperatorSpan& span, const Mat& x, Mat* proj) {
  Mat p = Mat::Zero(x.rows(), x.cols());
  for (auto& b : span.basis) p += hs_inner(b, x) * b;
  if (proj) *proj = p;
  double nx = x.norm();
  if (nx == 0) return 0.0;
  return (x - p).norm() / nx;
}

OperatorSpan algebra_closure(const OperatorSpan& gens, double tol, int max_rounds) {
  if (!(gens.dom == gens.cod))
    throw config_error("algebra_closure needs endomorphism spans");
  Index d = pow_dim(gens.n, gens.dom.size());
  std::vector<Mat> cur;
  cur.push_back(Mat::Identity(d, d));
  for (auto& b : gens.basis) {
    cur.push_back(b);
    cur.push_back(b.adjoint());
  }
  OperatorSpan span = orthonormalize(gens.n, gens.dom, gens.cod, cur, tol);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Mat> next = span.basis;
    for (auto& x : span.basis) {
      next.push_back(x.adjoint());
      for (auto& y : span.basis) next.push_back(x * y);
    }
    OperatorSpan grown = orthonormalize(gens.n, gens.dom, gens.cod, next, tol);
    if (grown.dim() == span.dim()) return grown;
    span = std::move(grown);
  }
  throw compute_error("algebra_closure did not stabilize");
}

}  // namespace qlat
