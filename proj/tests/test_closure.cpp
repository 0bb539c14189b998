#include "doctest.h"

#include "qlattice/backend.hpp"
#include "qlattice/closure_engine.hpp"

using namespace qlat;

namespace {

Mat q12() {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.2;
  q(1, 1) = 1.0 / 1.2;
  return q;
}

ClosureEngine seedless(const Mat& q, int window, bool deferred = false) {
  ClosureOptions opt;
  opt.window = window;
  opt.deferred = deferred;
  ClosureEngine eng(make_duality(q), opt);
  eng.run();
  return eng;
}

}  // namespace

TEST_CASE("closure: seedless fixed point carries the noncrossing pairing counts") {
  ClosureEngine eng = seedless(Mat::Identity(2, 2), 6);
  for (const Word& w : words_up_to(6))
    CHECK(count_t(eng.dim(w)) == noncrossing_pairing_count(w));
  // spot values frozen independently
  CHECK(eng.dim(Word("")) == 1);
  CHECK(eng.dim(Word("a")) == 0);
  CHECK(eng.dim(Word("ab")) == 1);
  CHECK(eng.dim(Word("abab")) == 2);
  CHECK(eng.dim(Word("aabb")) == 1);
  CHECK(eng.dim(Word("ababab")) == 5);
  CHECK(eng.dim(Word("aabbab")) == 2);
}

TEST_CASE("closure: generic Q gives the same dimensions") {
  ClosureEngine eng = seedless(q12(), 6);
  for (const Word& w : words_up_to(6))
    CHECK(count_t(eng.dim(w)) == noncrossing_pairing_count(w));
}

TEST_CASE("closure: deferred scheduling reaches the same fixed point") {
  ClosureEngine a = seedless(q12(), 5, false);
  ClosureEngine b = seedless(q12(), 5, true);
  for (const Word& w : words_up_to(5)) CHECK(a.dim(w) == b.dim(w));
}

TEST_CASE("closure: hom spaces unbend through the Frobenius pairing") {
  ClosureEngine eng = seedless(q12(), 6);
  const Word pairs[][2] = {{Word("a"), Word("a")},
                           {Word("ab"), Word("ab")},
                           {Word("aba"), Word("aba")},
                           {Word("ab"), Word("ba")},
                           {Word(""), Word("abab")}};
  for (const auto& p : pairs) {
    OperatorSpan h = eng.hom(p[0], p[1]);
    CHECK(h.dom == p[0]);
    CHECK(h.cod == p[1]);
    CHECK(count_t(h.dim()) == noncrossing_pairing_count(hat(p[0]) + p[1]));
  }
  // frozen values: End(v) = 1, End(v vbar) = 2, End(v vbar v) = 5
  CHECK(eng.hom(Word("a"), Word("a")).dim() == 1);
  CHECK(eng.hom(Word("ab"), Word("ab")).dim() == 2);
  CHECK(eng.hom(Word("aba"), Word("aba")).dim() == 5);
  // hom members intertwine nothing beyond the window
  CHECK_THROWS_AS(eng.hom(Word("abab"), Word("abab")), config_error);
}

TEST_CASE("closure: dims listing matches per-word queries") {
  ClosureEngine eng = seedless(Mat::Identity(2, 2), 4);
  auto table = eng.dims(4);
  for (const auto& [w, d] : table) CHECK(eng.dim(w) == d);
  CHECK(table.size() == 31);  // 1 + 2 + 4 + 8 + 16
}

TEST_CASE("closure: end seeds enlarge the invariant spaces") {
  // seed End(v) with the full matrix algebra: the closure then contains the
  // whole tensor algebra and every V_w has the dimension of the ambient
  // grading count for the two-dimensional trivial-grading case, which for
  // the word ab is 4 (all of H (x) Hbar) instead of the pairing count 1.
  DualityMaps dm = make_duality(Mat::Identity(2, 2));
  std::vector<Mat> units;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Mat u = Mat::Zero(2, 2);
      u(r, c) = 1.0;
      units.push_back(u);
    }
  OperatorSpan full = orthonormalize(2, Word("a"), Word("a"), units);
  ClosureOptions opt;
  opt.window = 4;
  ClosureEngine eng(dm, opt);
  eng.add_end_seed(Word("a"), full);
  eng.run();
  CHECK(eng.dim(Word("ab")) == 4);
  CHECK(eng.dim(Word("ab")) > noncrossing_pairing_count(Word("ab")));
}
