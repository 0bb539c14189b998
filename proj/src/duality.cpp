#include "qlattice/duality.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qlat {

namespace {

Mat hermitian_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index k = 0; k < ev.size(); ++k) ev(k) = ev(k) > 0 ? std::sqrt(ev(k)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

QData make_qdata(const Mat& q_raw, double tol) {
  if (q_raw.rows() != q_raw.cols() || q_raw.rows() < 1)
    throw config_error("Q must be a square matrix");
  double scale = q_raw.norm();
  if (scale == 0 || (q_raw - q_raw.adjoint()).norm() > tol * scale * 100)
    throw config_error("Q must be Hermitian");
  Mat q = (q_raw + q_raw.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo <= 0) throw config_error("Q must be positive definite");
  if (hi / lo > 1e6) throw config_error("Q eigenvalue spread exceeds 1e6");
  double tr2 = (q * q).trace().real();
  double trm2 = 0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k)
    trm2 += 1.0 / (es.eigenvalues()(k) * es.eigenvalues()(k));
  double s = std::pow(trm2 / tr2, 0.25);
  return QData{static_cast<int>(q.rows()), s * q};
}

QData q_from_F(const Mat& F, double tol) {
  if (F.rows() != F.cols()) throw config_error("F must be square");
  Mat pos = hermitian_sqrt(F.adjoint() * F);
  return make_qdata(pos.transpose(), tol);
}

DualityMaps make_duality(const QData& qd) {
  DualityMaps dm;
  dm.q = qd;
  int n = qd.n;
  dm.q_inv = qd.q.inverse();
  dm.d = (qd.q * qd.q).trace().real();
  dm.lambda = 1.0 / (dm.d * dm.d);
  dm.i_alpha = TensorMap(n, Word(""), Word("ab"), xi_vec(qd.q));
  dm.i_beta = TensorMap(n, Word(""), Word("ba"), xi_vec(dm.q_inv.transpose()));
  dm.p_alpha = dm.i_beta.adjoint();
  dm.p_beta = dm.i_alpha.adjoint();
  return dm;
}

DualityMaps make_duality(const Mat& q_raw, double tol) {
  return make_duality(make_qdata(q_raw, tol));
}

TensorMap jones_projection(const DualityMaps& dm, Parity parity) {
  if (parity == Parity::even)
    return TensorMap(dm.q.n, Word("ab"), Word("ab"),
                     dm.i_alpha.mat * dm.p_beta.mat / dm.d);
  return TensorMap(dm.q.n, Word("ba"), Word("ba"), dm.i_beta.mat * dm.p_alpha.mat / dm.d);
}

TensorMap word_cup(const DualityMaps& dm, const Word& w) {
  int n = dm.q.n;
  Vec v = Vec::Ones(1);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Vec& cup =
        w.at(k) == Letter::alpha ? dm.i_alpha.mat.col(0) : dm.i_beta.mat.col(0);
    Index side = pow_dim(n, k);
    v = insert_middle(cup, v, side, side);
  }
  return TensorMap(n, Word(""), w + hat(w), v);
}

TensorMap word_cap(const DualityMaps& dm, const Word& w) {
  return word_cup(dm, hat(w)).adjoint();
}

TensorMap conditional_expectation(const DualityMaps& dm, const Word& r, const Word& a,
                                  const Word& w, const TensorMap& x) {
  Word raw = r + a + w;
  if (!(x.dom == raw) || !(x.cod == raw))
    throw config_error("conditional_expectation: x must act on r+a+w");
  if (!is_alternating(raw))
    throw config_error("conditional_expectation: r+a+w must be alternating");
  int n = dm.q.n;
  Index dr = pow_dim(n, r.size());
  Index da = pow_dim(n, a.size());
  Index dw = pow_dim(n, w.size());

  Vec cup_r = word_cup(dm, hat(r)).mat.col(0);  // over hat(r) + r
  Vec cup_w = word_cup(dm, w).mat.col(0);       // over w + hat(w)
  Eigen::RowVectorXcd cap_r = word_cap(dm, r).mat.row(0);       // on hat(r) + r
  Eigen::RowVectorXcd cap_w = word_cap(dm, hat(w)).mat.row(0);  // on w + hat(w)

  double norm = std::pow(dm.d, -double(r.size() + w.size()));
  Mat out(da, da);
  Vec v0 = Vec::Zero(dr * dr * da * dw * dw);
  for (Index c = 0; c < da; ++c) {
    v0.setZero();
    // v0 = cup_r (x) e_c (x) cup_w over legs hat(r) r a w hat(w)
    for (Index p = 0; p < dr * dr; ++p) {
      if (cup_r(p) == Cplx(0)) continue;
      v0.segment((p * da + c) * dw * dw, dw * dw) = cup_r(p) * cup_w;
    }
    Vec v1 = apply_middle_vec(x.mat, v0, dr, dr * da * dw, dr * da * dw, dw);
    Vec v2 = contract_prefix(cap_r, v1, da * dw * dw);
    Vec v3 = contract_suffix(cap_w, v2, da);
    out.col(c) = norm * v3;
  }
  return TensorMap(n, a, a, out);
}

Mat trace_density(const DualityMaps& dm, const Word& w) {
  Mat rho = Mat::Ones(1, 1);
  Mat qa = dm.q.q * dm.q.q / dm.d;
  Mat qb = (dm.q.q.transpose() * dm.q.q.transpose()).inverse() / dm.d;
  for (std::size_t k = 0; k < w.size(); ++k)
    rho = kron(rho, w.at(k) == Letter::alpha ? qa : qb);
  return rho;
}

Cplx canonical_trace(const DualityMaps& dm, const TensorMap& x) {
  if (!(x.dom == x.cod)) throw config_error("canonical_trace: x must be an endomorphism");
  if (!is_alternating(x.dom))
    throw config_error("canonical_trace: word must be alternating");
  int n = dm.q.n;
  Index dw = pow_dim(n, x.dom.size());
  Vec cup = word_cup(dm, x.dom).mat.col(0);  // over w + hat(w)
  Vec v = apply_middle_vec(x.mat, cup, 1, dw, dw, dw);
  Eigen::RowVectorXcd cap = word_cap(dm, hat(x.dom)).mat.row(0);
  Vec res = contract_prefix(cap, v, 1);
  return res(0) * std::pow(dm.d, -double(x.dom.size()));
}

DualityReport verify_duality(const DualityMaps& dm, double tol, int max_len) {
  (void)tol;
  DualityReport rep;
  int n = dm.q.n;
  auto add = [&](const std::string& name, double r) {
    rep.checks.emplace_back(name, r);
    if (r > rep.max_residual) rep.max_residual = r;
  };
  Mat id_n = Mat::Identity(n, n);

  // snake identities on single legs
  {
    TensorMap ia_id = tensor(dm.i_alpha, TensorMap(n, Word("a"), Word("a"), id_n));
    TensorMap id_pa = tensor(TensorMap(n, Word("a"), Word("a"), id_n), dm.p_alpha);
    add("snake_alpha_left", (compose(id_pa, ia_id).mat - id_n).norm());
    TensorMap ib_id = tensor(dm.i_beta, TensorMap(n, Word("b"), Word("b"), id_n));
    TensorMap id_pb = tensor(TensorMap(n, Word("b"), Word("b"), id_n), dm.p_beta);
    add("snake_beta_left", (compose(id_pb, ib_id).mat - id_n).norm());
    TensorMap id_ib = tensor(TensorMap(n, Word("a"), Word("a"), id_n), dm.i_beta);
    TensorMap pb_id = tensor(dm.p_beta, TensorMap(n, Word("a"), Word("a"), id_n));
    add("snake_alpha_right", (compose(pb_id, id_ib).mat - id_n).norm());
    TensorMap id_ia = tensor(TensorMap(n, Word("b"), Word("b"), id_n), dm.i_alpha);
    TensorMap pa_id = tensor(dm.p_alpha, TensorMap(n, Word("b"), Word("b"), id_n));
    add("snake_beta_right", (compose(pa_id, id_ia).mat - id_n).norm());
  }

  // pairing normalization
  add("pairing_alpha", std::abs((dm.p_beta.mat * dm.i_alpha.mat)(0, 0) - dm.d));
  add("pairing_beta", std::abs((dm.p_alpha.mat * dm.i_beta.mat)(0, 0) - dm.d));
  {
    double trm2 = 0;
    Eigen::SelfAdjointEigenSolver<Mat> es(dm.q.q);
    for (Index k = 0; k < n; ++k)
      trm2 += 1.0 / (es.eigenvalues()(k) * es.eigenvalues()(k));
    add("trace_balance", std::abs(trm2 - dm.d));
  }

  // cup nesting: i_{uv} = (id_u (x) i_v (x) id_{hat(u)}) i_u for all splits
  for (int len = 0; len <= max_len; ++len) {
    for (const Word& full : all_words(len)) {
      TensorMap direct = word_cup(dm, full);
      for (std::size_t cut = 0; cut <= full.size(); ++cut) {
        Word u = full.subword(0, cut), v = full.subword(cut, full.size() - cut);
        TensorMap iu = word_cup(dm, u);
        TensorMap iv = word_cup(dm, v);
        Index du = pow_dim(n, u.size());
        Vec nested =
            insert_middle(iv.mat.col(0), iu.mat.col(0), du, du);
        add("nesting_" + full.text() + "_" + std::to_string(cut),
            (nested - direct.mat.col(0)).norm());
      }
    }
  }

  // Jones projections: idempotent, self-adjoint, reflection relation
  TensorMap e = jones_projection(dm, Parity::even);
  TensorMap f = jones_projection(dm, Parity::odd);
  add("jones_even_idem", (e.mat * e.mat - e.mat).norm());
  add("jones_odd_idem", (f.mat * f.mat - f.mat).norm());
  add("jones_even_selfadj", (e.mat - e.mat.adjoint()).norm());
  add("jones_odd_selfadj", (f.mat - f.mat.adjoint()).norm());
  {
    // on H (x) Hbar (x) H: (id (x) f)(e (x) id)(id (x) f) = lambda (id (x) f)
    Mat ef = embed_middle(e.mat, 1, n);       // e on legs 1,2 of "aba"
    Mat fe = embed_middle(f.mat, n, 1);       // f on legs 2,3
    add("jones_reflection_aba",
        (fe * ef * fe - dm.lambda * fe).norm() + (ef * fe * ef - dm.lambda * ef).norm());
    // on Hbar (x) H (x) Hbar
    Mat fe2 = embed_middle(f.mat, 1, n);
    Mat ef2 = embed_middle(e.mat, n, 1);
    add("jones_reflection_bab",
        (ef2 * fe2 * ef2 - dm.lambda * ef2).norm() +
            (fe2 * ef2 * fe2 - dm.lambda * fe2).norm());
  }

  // normalized rank-one generators: xi(E) and xi(F^t) span the images of the
  // even/odd Jones projections, so (F*F)(E*E) = lambda id.  The odd cup is
  // xi((Q^-1)^t), hence F^t = (Q^-1)^t / sqrt(d), i.e. F = Q^-1 / sqrt(d).
  {
    double sd = std::sqrt(dm.d);
    Mat E = dm.q.q / sd;
    Mat F = dm.q_inv / sd;
    Mat lhs = (F.adjoint() * F) * (E.adjoint() * E);
    Mat rhs = (E.adjoint() * E) * (F.adjoint() * F);
    add("rank_one_pair_fe", (lhs - dm.lambda * id_n).norm());
    add("rank_one_pair_ef", (rhs - dm.lambda * id_n).norm());
  }

  // conditional expectation is a retraction: E(id_r (x) y (x) id_w) = y
  {
    Word r = interval(0, 1), a = interval(1, 3), w = interval(3, 4);
    Mat y = Mat::Zero(n * n, n * n);
    // deterministic test element on the middle block
    for (Index i = 0; i < n * n; ++i)
      for (Index j = 0; j < n * n; ++j)
        y(i, j) = Cplx(std::sin(1.0 + double(3 * i + j)), std::cos(2.0 + double(i - j)));
    Mat full = kron(kron(id_n, y), id_n);
    TensorMap x(n, r + a + w, r + a + w, full);
    TensorMap back = conditional_expectation(dm, r, a, w, x);
    add("expectation_retraction", (back.mat - y).norm());
  }

  return rep;
}

}  // namespace qlat
