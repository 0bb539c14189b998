#include "qlattice/closure_engine.hpp"

#include <string>

namespace qlat {

namespace {

// contract legs (p, p+1) of v over word w with a 1 x n^2 cap row
Vec contract_pair(const Eigen::RowVectorXcd& cap, const Vec& v, Index left,
                  Index right) {
  Index n2 = cap.cols();
  Vec out = Vec::Zero(left * right);
  for (Index l = 0; l < left; ++l) {
    Eigen::Map<const Mat> block(v.data() + l * n2 * right, right, n2);
    out.segment(l * right, right) = block * cap.transpose();
  }
  return out;
}

Word splice(const Word& w, std::size_t pos, const Word& mid) {
  return w.subword(0, pos) + mid + w.subword(pos, w.size() - pos);
}

Word drop_pair(const Word& w, std::size_t pos) {
  return w.subword(0, pos) + w.subword(pos + 2, w.size() - pos - 2);
}

}  // namespace

ClosureEngine::ClosureEngine(DualityMaps dm, ClosureOptions opt)
    : dm_(std::move(dm)), opt_(opt), n_(dm_.q.n) {
  if (opt_.window < 0 || opt_.window > 24)
    throw config_error("closure window must be in [0, 24]");
  spans_[Word("")].push_back(Vec::Ones(1));
}

void ClosureEngine::add_end_seed(const Word& x, const OperatorSpan& span) {
  if (ran_) throw config_error("seeds must be added before running the closure");
  if (x.empty()) return;  // scalars add nothing
  if (static_cast<int>(x.size()) > opt_.window)
    throw config_error("seed word exceeds the closure window");
  if (!(span.dom == x) || !(span.cod == x))
    throw config_error("seed span must be an endomorphism span of the given word");
  auto& dst = seeds_[x];
  for (auto& b : span.basis) {
    dst.push_back(b);
    dst.push_back(b.adjoint());  // keep the generated category *-closed
  }
}

bool ClosureEngine::insert(const Word& w, Vec v) {
  double norm = v.norm();
  // Candidates are images of unit vectors under bounded cup/cap/seed maps, so a
  // mathematically nonzero candidate has norm far above the tolerance.  Anything
  // at or below it is roundoff left over from an exact cancellation; normalizing
  // such a vector would promote pure noise into the span.
  if (norm <= opt_.tol) return false;
  v /= norm;
  auto& span = spans_[w];
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : span) v -= b.dot(v) * b;
  double res = v.norm();
  if (res <= opt_.tol) return false;
  span.push_back(v / res);
  return true;
}

template <typename Sink>
void ClosureEngine::expand(const Word& w, const Vec& v, Sink&& sink) const {
  const std::size_t len = w.size();
  // cap contractions at adjacent opposite letters
  for (std::size_t p = 0; p + 1 < len; ++p) {
    if (w.at(p) == w.at(p + 1)) continue;
    const TensorMap& cap = w.at(p) == Letter::beta ? dm_.p_alpha : dm_.p_beta;
    Index left = pow_dim(n_, p), right = pow_dim(n_, len - p - 2);
    sink(drop_pair(w, p), contract_pair(cap.mat.row(0), v, left, right));
  }
  // cup insertions
  if (static_cast<int>(len) + 2 <= opt_.window) {
    for (std::size_t p = 0; p <= len; ++p) {
      Index left = pow_dim(n_, p), right = pow_dim(n_, len - p);
      sink(splice(w, p, Word("ab")),
           insert_middle(dm_.i_alpha.mat.col(0), v, left, right));
      sink(splice(w, p, Word("ba")),
           insert_middle(dm_.i_beta.mat.col(0), v, left, right));
    }
  }
  // padded seed actions
  for (const auto& [x, mats] : seeds_) {
    if (x.size() > len) continue;
    for (std::size_t p = 0; p + x.size() <= len; ++p) {
      if (!(w.subword(p, x.size()) == x)) continue;
      Index left = pow_dim(n_, p), right = pow_dim(n_, len - p - x.size());
      Index dx = pow_dim(n_, x.size());
      for (const Mat& T : mats) sink(w, apply_middle_vec(T, v, left, dx, dx, right));
    }
  }
}

void ClosureEngine::run() {
  if (ran_) return;
  ran_ = true;
  if (!opt_.deferred) {
    for (rounds_ = 1; rounds_ <= opt_.max_rounds; ++rounds_) {
      bool worked = false;
      std::vector<Word> keys;
      keys.reserve(spans_.size());
      for (auto& [w, span] : spans_) keys.push_back(w);
      for (const Word& w : keys) {
        std::size_t from = processed_[w];
        std::size_t until = spans_[w].size();
        if (from >= until) continue;
        worked = true;
        for (std::size_t k = from; k < until; ++k) {
          Vec v = spans_[w][k];  // copy: insertions may reallocate the span
          expand(w, v, [&](const Word& target, Vec cand) {
            insert(target, std::move(cand));
          });
        }
        processed_[w] = until;
      }
      if (!worked) return;
    }
  } else {
    for (rounds_ = 1; rounds_ <= opt_.max_rounds; ++rounds_) {
      auto snapshot = spans_;
      bool grew = false;
      for (const auto& [w, span] : snapshot)
        for (const Vec& v : span)
          expand(w, v, [&](const Word& target, Vec cand) {
            if (insert(target, std::move(cand))) grew = true;
          });
      if (!grew) return;
    }
  }
  throw compute_error("cup/cap closure did not stabilize within " +
                      std::to_string(opt_.max_rounds) + " rounds");
}

std::size_t ClosureEngine::dim(const Word& w) const {
  auto it = spans_.find(w);
  return it == spans_.end() ? 0 : it->second.size();
}

const std::vector<Vec>* ClosureEngine::vectors(const Word& w) const {
  auto it = spans_.find(w);
  return it == spans_.end() ? nullptr : &it->second;
}

std::map<Word, std::size_t> ClosureEngine::dims(int max_len) const {
  std::map<Word, std::size_t> out;
  for (const Word& w : words_up_to(max_len)) out[w] = dim(w);
  return out;
}

OperatorSpan ClosureEngine::hom(const Word& x, const Word& y) const {
  if (static_cast<int>(x.size() + y.size()) > opt_.window)
    throw config_error("hom request exceeds the closure window");
  Word bent = hat(x) + y;
  Index dx = pow_dim(n_, x.size()), dy = pow_dim(n_, y.size());
  const auto* vs = vectors(bent);
  std::vector<Mat> raw;
  if (vs) {
    // unbend: T = (p_{hat(x)} (x) id_y)(id_x (x) S); with S viewed as a
    // (dy x dx) matrix and the cap row as a (dx x dx) matrix this is a
    // plain product.
    Eigen::RowVectorXcd cap = word_cap(dm_, hat(x)).mat.row(0);  // on x + hat(x)
    Eigen::Map<const Mat> capm(cap.data(), dx, dx);  // capm(m, c) = cap[c*dx + m]
    for (const Vec& s : *vs) {
      Eigen::Map<const Mat> sm(s.data(), dy, dx);  // sm(yi, m) = s[m*dy + yi]
      raw.push_back(sm * capm);
    }
  }
  return orthonormalize(n_, x, y, raw, opt_.tol);
}

}  // namespace qlat
