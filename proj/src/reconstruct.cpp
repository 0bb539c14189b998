#include "qlattice/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "qlattice/tensorops.hpp"
#include "qlattice/words.hpp"

namespace qlat {

namespace {

// Coefficient matrix of a vector on two legs: v = sum_ij M_ij e_i (x) e_j.
Mat unvec(const Vec& v, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v(static_cast<Index>(i) * n + j);
  return m;
}

// Rotates the largest entry to the positive real axis.  Conjugation by a
// unitary is phase-blind, so this pins the otherwise arbitrary eigenvector
// phases and makes repeated normalization return identity legs.
Mat phase_canonical(Mat u) {
  Index r = 0, c = 0;
  u.cwiseAbs().maxCoeff(&r, &c);
  Cplx top = u(r, c);
  if (std::abs(top) > 0) u *= std::conj(top) / std::abs(top);
  return u;
}

double projection_residual(const Mat& p) {
  return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

// Unit vector spanning the image of a rank-one projection.  Failures on the
// first Jones image mean the representation is not normalizable; later ones
// contradict the lattice axioms outright.
Vec rank_one_vector(const Mat& p, double tol, int jones_index) {
  Eigen::SelfAdjointEigenSolver<Mat> es((p + p.adjoint()) / 2.0);
  const Index m = p.rows();
  double top = es.eigenvalues()(m - 1);
  double rest = std::max(std::abs(es.eigenvalues()(0)),
                         m >= 2 ? std::abs(es.eigenvalues()(m - 2)) : 0.0);
  std::string where = "Jones image at index " + std::to_string(jones_index);
  if (std::abs(top - 1.0) > std::max(1e-6, 100 * tol)) {
    std::string msg = where + " is not a projection (top eigenvalue " +
                      std::to_string(top) + ")";
    if (jones_index == 2) throw not_normalizable_error(msg);
    throw inconsistent_representation_error(msg);
  }
  if (rest > std::max(tol, 1e-12) * top) {
    std::string msg = where + " has rank above one (second eigenvalue " +
                      std::to_string(rest) + ")";
    if (jones_index == 2) throw not_normalizable_error(msg);
    throw inconsistent_representation_error(msg);
  }
  return es.eigenvectors().col(m - 1);
}

}  // namespace

PopaRepresentation rep_from_lattice(const PopaLattice& lat) {
  PopaRepresentation rep;
  rep.n = lat.backend.n;
  rep.bound = lat.bound;
  rep.lambda = lat.lambda;
  for (const auto& [key, cell] : lat.cells) rep.cells.emplace(key, cell.span);
  rep.jones = lat.jones;
  return rep;
}

PopaRepresentation conjugate_representation(const PopaRepresentation& rep,
                                            const std::vector<Mat>& legs) {
  const int n = rep.n;
  if (static_cast<int>(legs.size()) < rep.bound)
    throw config_error("conjugation needs one unitary per tensor leg");
  for (int k = 1; k <= rep.bound; ++k) {
    const Mat& u = legs[k - 1];
    if (u.rows() != n || u.cols() != n ||
        (u.adjoint() * u - Mat::Identity(n, n)).norm() > 1e-8 * n)
      throw config_error("leg " + std::to_string(k) + " matrix is not unitary");
  }
  auto window = [&](int i, int j) {
    Mat w = Mat::Identity(1, 1);
    for (int k = i + 1; k <= j; ++k) w = kron(w, legs[k - 1]).eval();
    return w;
  };
  PopaRepresentation out;
  out.n = rep.n;
  out.bound = rep.bound;
  out.lambda = rep.lambda;
  for (const auto& [key, span] : rep.cells) {
    Mat w = window(key.first, key.second);
    OperatorSpan moved = span;
    for (Mat& b : moved.basis) b = (w * b * w.adjoint()).eval();
    out.cells.emplace(key, std::move(moved));
  }
  for (const auto& [k, tm] : rep.jones) {
    Mat w = window(k - 2, k);
    TensorMap moved = tm;
    moved.mat = w * tm.mat * w.adjoint();
    out.jones.emplace(k, std::move(moved));
  }
  return out;
}

NormalizationResult normalize(const PopaRepresentation& rep, double tol) {
  const int n = rep.n;
  if (n < 1) throw config_error("representation has no legs");
  if (rep.lambda <= 0.0 || rep.lambda > 1.0)
    throw config_error("representation lambda must lie in (0, 1]");
  if (rep.bound < 3)
    throw config_error("normalization needs Jones data up to index 3");
  for (int k = 2; k <= rep.bound; ++k)
    if (!rep.jones.count(k))
      throw config_error("missing Jones image at index " + std::to_string(k));

  NormalizationResult out;
  auto record = [&](const std::string& label, double r) {
    out.checks.emplace_back(label, r);
    out.max_residual = std::max(out.max_residual, r);
  };

  // Stage one: the image vector of the first Jones projection is xi(E) for
  // an invertible E.  Polar E = Q U gives the positive part; balancing
  // Tr(Q^2) = Tr(Q^-2) fixes the scale, and the leg-2 unitary is conj(U).
  const Mat& e2 = rep.jones.at(2).mat;
  record("jones2_projection_defect", projection_residual(e2));
  Vec psi = rank_one_vector(e2, tol, 2);
  Mat e_mat = unvec(psi, n);
  Eigen::JacobiSVD<Mat> esvd(e_mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double smax = esvd.singularValues()(0), smin = esvd.singularValues()(n - 1);
  if (!(smin > 1e-9 * smax))
    throw inconsistent_representation_error(
        "the first Jones image vector has a singular coefficient matrix");
  Mat u_polar = esvd.matrixU() * esvd.matrixV().adjoint();
  Mat q0 = esvd.matrixU() * esvd.singularValues().asDiagonal() *
           esvd.matrixU().adjoint();
  double tr2 = 0, trm2 = 0;
  for (int i = 0; i < n; ++i) {
    double s = esvd.singularValues()(i);
    tr2 += s * s;
    trm2 += 1.0 / (s * s);
  }
  Mat q = std::pow(trm2 / tr2, 0.25) * q0;

  std::vector<Mat> legs(rep.bound, Mat::Identity(n, n));
  legs[1] = phase_canonical(u_polar.conjugate());

  // Stage two: one leg at a time.  The current Jones vector, corrected on
  // its left leg by the previous unitary, must be rotated on its right leg
  // onto the canonical target for its parity.
  const double t2 = q.squaredNorm();  // Tr(Q^2) = Tr(Q^-2) after balancing
  const Mat q_inv = q.inverse();
  const Mat target_even = q / std::sqrt(t2);
  const Mat target_odd = q_inv.transpose() / std::sqrt(t2);
  const Mat even_gram = q * q / t2;          // E*E for the even target
  const Mat odd_gram = q_inv * q_inv / t2;   // F*F for the odd target
  const Mat id = Mat::Identity(n, n);

  for (int s = 3; s <= rep.bound; ++s) {
    const std::string tag = "jones" + std::to_string(s);
    const Mat& f = rep.jones.at(s).mat;
    record(tag + "_projection_defect", projection_residual(f));
    Mat m = legs[s - 2] * unvec(rank_one_vector(f, tol, s), n);

    // The Jones relation with the normalized neighbour forces the pairing of
    // the two coefficient Grams to be the Markov scalar.  MM* is blind to
    // the still-unknown rotation on the right leg, so this is checkable
    // before that unitary is chosen.
    Mat gram = m * m.adjoint();
    Mat lemma = (s % 2 == 1) ? Mat(gram.transpose() * even_gram)
                             : Mat(gram * odd_gram);
    record(tag + "_markov_pairing",
           (lemma - rep.lambda * id).norm() / rep.lambda);

    Eigen::JacobiSVD<Mat> msvd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (!(msvd.singularValues()(n - 1) > 1e-9 * msvd.singularValues()(0)))
      throw inconsistent_representation_error(
          tag + " image vector has a singular coefficient matrix");
    const Mat& target = (s % 2 == 0) ? target_even : target_odd;
    Mat x = msvd.solve(target);
    Eigen::JacobiSVD<Mat> xsvd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double spread = (xsvd.singularValues()(0) - xsvd.singularValues()(n - 1)) /
                    xsvd.singularValues()(0);
    if (spread > 1e-6)
      throw inconsistent_representation_error(
          tag + " leg transition is not unitary (singular value spread " +
          std::to_string(spread) + ")");
    Mat xu = xsvd.matrixU() * xsvd.matrixV().adjoint();
    Cplx z = hs_inner(Mat(m * xu), target);
    if (std::abs(z) < 0.5)
      throw inconsistent_representation_error(
          tag + " image vector cannot be aligned with its target");
    xu *= z / std::abs(z);
    record(tag + "_target_fit", (m * xu - target).norm());
    legs[s - 1] = phase_canonical(xu.transpose());
  }

  // The balanced trace must reproduce the Markov scalar of the tower.
  double markov_defect = std::abs(t2 * std::sqrt(rep.lambda) - 1.0);
  record("markov_scale_defect", markov_defect);
  if (markov_defect > std::max(1e-6, 100 * tol))
    throw inconsistent_representation_error(
        "trace normalization of the recovered Q disagrees with lambda (defect " +
        std::to_string(markov_defect) + ")");

  out.q = make_qdata(q, std::max(tol, 1e-12));
  out.legs = legs;
  out.rep = conjugate_representation(rep, legs);
  record("normalized_residual", normalized_residual(out.rep, out.q));
  return out;
}

double normalized_residual(const PopaRepresentation& rep, const QData& q) {
  DualityMaps dm = make_duality(q);
  double worst = 0.0;
  for (const auto& [k, tm] : rep.jones) {
    Mat expected = jones_projection(dm, jones_parity(k)).mat;
    worst = std::max(worst, (tm.mat - expected).norm());
  }
  return worst;
}

const DualityMaps& ClosureCategory::duality() const {
  if (!engine_) throw config_error("closure category is empty");
  return engine_->duality();
}

OperatorSpan ClosureCategory::hom(const Word& x, const Word& y) const {
  if (!engine_) throw config_error("closure category is empty");
  if (static_cast<int>(x.size() + y.size()) > window_)
    throw config_error("hom request for '" + x.text() + "', '" + y.text() +
                       "' exceeds the closure window");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto key = std::make_pair(x, y);
  auto it = cache_->homs.find(key);
  if (it == cache_->homs.end())
    it = cache_->homs.emplace(key, engine_->hom(x, y)).first;
  return it->second;
}

std::size_t ClosureCategory::hom_dim(const Word& x, const Word& y) const {
  if (!engine_) throw config_error("closure category is empty");
  if (x.size() == 0) {
    if (static_cast<int>(y.size()) > window_)
      throw config_error("hom request for '" + y.text() +
                         "' exceeds the closure window");
    return engine_->dim(y);
  }
  return hom(x, y).dim();
}

ClosureCategory closure(const DualityMaps& dm,
                        const std::map<Word, OperatorSpan>& seeds,
                        const std::vector<std::pair<Word, Word>>& pairs,
                        double tol) {
  int window = 2;
  for (const auto& [w, span] : seeds) {
    if (w.size() == 0 || !is_alternating(w))
      throw config_error("closure seeds must be indexed by alternating words");
    if (!(span.dom == w) || !(span.cod == w))
      throw config_error("seed span for '" + w.text() +
                         "' is not an endomorphism span of that word");
    window = std::max(window, 2 * static_cast<int>(w.size()));
  }
  for (const auto& [x, y] : pairs)
    window = std::max(window, static_cast<int>(x.size() + y.size()));

  ClosureOptions opt;
  opt.window = window;
  opt.tol = tol;
  ClosureCategory cc;
  cc.engine_ = std::make_shared<ClosureEngine>(dm, opt);
  cc.cache_ = std::make_shared<ClosureCategory::Cache>();
  cc.window_ = window;
  for (const auto& [w, span] : seeds) cc.engine_->add_end_seed(w, span);
  cc.engine_->run();
  for (const auto& [x, y] : pairs) cc.hom(x, y);
  return cc;
}

MomentTable universal_hom_dims(const ClosureCategory& cc, int max_len) {
  if (max_len < 0 || max_len > cc.window())
    throw config_error("universal hom table length exceeds the closure window");
  MomentTable table;
  table.max_len = max_len;
  for (const Word& w : words_up_to(max_len))
    table.entries[w] = static_cast<count_t>(cc.hom_dim(Word(), w));
  return table;
}

}  // namespace qlat
