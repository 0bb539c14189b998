#include "doctest.h"

#include <cmath>

#include "qlattice/moments.hpp"
#include "qlattice/reconstruct.hpp"
#include "qlattice/runtime.hpp"

using namespace qlat;

namespace {

Backend span_q12() {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.2;
  q(1, 1) = 1.0 / 1.2;
  return make_span_q_backend(q);
}

std::vector<std::vector<int>> s3_table() {
  return {{0, 1, 2, 3, 4, 5}, {1, 2, 0, 5, 3, 4}, {2, 0, 1, 4, 5, 3},
          {3, 4, 5, 0, 1, 2}, {4, 5, 3, 2, 0, 1}, {5, 3, 4, 1, 2, 0}};
}

std::vector<Mat> s3_rep() {
  double c = -0.5, s = std::sqrt(3.0) / 2.0;
  auto m = [](double a, double b, double c2, double d) {
    Mat r(2, 2);
    r << a, b, c2, d;
    return r;
  };
  return {m(1, 0, 0, 1),  m(c, -s, s, c),  m(c, s, -s, c),
          m(1, 0, 0, -1), m(c, -s, -s, -c), m(c, s, s, -c)};
}

// random unitaries on legs 2..bound, identity on leg 1 (the leg-1 gauge is
// the representative the normal form fixes)
std::vector<Mat> scrambling_legs(int bound, std::uint64_t seed) {
  std::mt19937_64 rng = seeded_rng(seed);
  std::vector<Mat> legs;
  legs.push_back(Mat::Identity(2, 2));
  for (int k = 2; k <= bound; ++k) legs.push_back(random_unitary(2, rng));
  return legs;
}

}  // namespace

TEST_CASE("reconstruct: the identity representation is already normal") {
  PopaLattice L = build_lattice(span_q12(), 4);
  PopaRepresentation rep = rep_from_lattice(L);
  CHECK(rep.bound == 4);
  CHECK(rep.lambda == doctest::Approx(L.lambda).epsilon(1e-12));
  NormalizationResult res = normalize(rep);
  CHECK(res.max_residual < 1e-9);
  CHECK((res.q.q - L.dual.q.q).norm() < 1e-8);
  CHECK(normalized_residual(res.rep, res.q) < 1e-8);
}

TEST_CASE("reconstruct: normalization undoes a leg scrambling") {
  PopaLattice L = build_lattice(span_q12(), 4);
  PopaRepresentation base = rep_from_lattice(L);
  Mat q0 = L.dual.q.q;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    PopaRepresentation scrambled =
        conjugate_representation(base, scrambling_legs(4, seed));
    // the scrambled family genuinely moved away from the normal form
    CHECK(normalized_residual(scrambled, L.dual.q) > 1e-3);
    NormalizationResult res = normalize(scrambled);
    CAPTURE(seed);
    CHECK(res.max_residual < 1e-8);
    CHECK((res.q.q - q0).norm() < 1e-8);
    CHECK(normalized_residual(res.rep, res.q) < 1e-8);
  }
}

TEST_CASE("reconstruct: corrupted Jones data is diagnosed") {
  PopaLattice L = build_lattice(span_q12(), 4);
  PopaRepresentation rep = rep_from_lattice(L);
  SUBCASE("rank failure at the bottom is not normalizable") {
    rep.jones.at(2).mat = Mat::Identity(4, 4);
    CHECK_THROWS_AS(normalize(rep), not_normalizable_error);
  }
  SUBCASE("rank failure further up is an inconsistency") {
    rep.jones.at(3).mat = Mat::Identity(4, 4);
    CHECK_THROWS_AS(normalize(rep), inconsistent_representation_error);
  }
}

TEST_CASE("reconstruct: seedless closure category reproduces the moments") {
  Backend b = make_span_q_backend(Mat::Identity(2, 2));
  ClosureCategory cc =
      closure(b.duality(), {}, {{Word(""), interval(0, 4)}}, 1e-9);
  CHECK(cc.window() >= 4);
  MomentTable dims = universal_hom_dims(cc, 4);
  MomentTable direct = moments_from_backend(b, 4);
  CHECK(dims.entries == direct.entries);
}

TEST_CASE("reconstruct: seeded closure matches the seed cells on alternating words") {
  Backend s3 = make_finite_group_backend(s3_table(), s3_rep());
  std::map<Word, OperatorSpan> seeds;
  for (const Word& w : words_up_to(3))
    if (!w.empty() && is_alternating(w)) seeds[w] = hom_basis(s3, w, w);
  std::vector<std::pair<Word, Word>> pairs;
  for (const Word& w : words_up_to(3))
    if (!w.empty() && is_alternating(w)) pairs.emplace_back(w, w);
  ClosureCategory cc = closure(s3.duality(), seeds, pairs, 1e-9);
  for (const auto& [x, y] : pairs) {
    CAPTURE(x.text());
    CHECK(cc.hom_dim(x, y) == hom_basis(s3, x, y).dim());
  }
  // a hom space between distinct alternating words of fitting length
  CHECK(cc.hom_dim(Word("a"), Word("aba")) == hom_basis(s3, Word("a"), Word("aba")).dim());
}
