#pragma once

// Iterated cup/cap closure.  Tracks, for every word w up to a window length,
// an orthonormal basis of the space V_w of vectors C -> H^{(x) w} generated
// from the empty word by
//   * cup insertions (id (x) i_gamma (x) id),
//   * cap contractions (id (x) p_gamma (x) id) at adjacent opposite letters,
//   * optional seed endomorphism actions (id (x) T (x) id) for given spans.
// hom(x, y) of the generated category is recovered by unbending V_{hat(x) y}
// with a cap; growth is monotone so the fixed point is schedule-independent.

#include <cstddef>
#include <map>
#include <vector>

#include "qlattice/duality.hpp"

namespace qlat {

struct ClosureOptions {
  int window = 6;         // max tracked word length
  double tol = 1e-9;      // independence threshold for span growth
  int max_rounds = 200;   // stabilization guard
  bool deferred = false;  // snapshot scheduling (slower; for order tests)
};

class ClosureEngine {
 public:
  ClosureEngine(DualityMaps dm, ClosureOptions opt);

  // Registers an endomorphism span of H^{(x) x} whose padded actions are
  // closed over.  Must be called before run().
  void add_end_seed(const Word& x, const OperatorSpan& span);

  // Runs to the fixed point; throws compute_error if max_rounds is hit.
  void run();

  std::size_t dim(const Word& w) const;
  const std::vector<Vec>* vectors(const Word& w) const;
  std::map<Word, std::size_t> dims(int max_len) const;

  // Materialized hom space between tensor powers, |x| + |y| <= window.
  OperatorSpan hom(const Word& x, const Word& y) const;

  int rounds_used() const { return rounds_; }
  const DualityMaps& duality() const { return dm_; }

 private:
  DualityMaps dm_;
  ClosureOptions opt_;
  int n_;
  std::map<Word, std::vector<Vec>> spans_;
  std::map<Word, std::size_t> processed_;
  std::map<Word, std::vector<Mat>> seeds_;
  int rounds_ = 0;
  bool ran_ = false;

  bool insert(const Word& w, Vec v);
  // Emits every one-step image of v (in V_w) through `sink`.
  template <typename Sink>
  void expand(const Word& w, const Vec& v, Sink&& sink) const;
};

}  // namespace qlat
