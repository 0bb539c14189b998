#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "qlattice/lattice.hpp"

using namespace qlat;

namespace {

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

Backend span_q1() { return make_span_q_backend(Mat::Identity(2, 2)); }

Backend span_q12() {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.2;
  q(1, 1) = 1.0 / 1.2;
  return make_span_q_backend(q);
}

// (dim, mult, weight) triples sorted for order-independent comparison
std::vector<std::pair<int, int>> dim_mult_pairs(const CellSummands& cs) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t k = 0; k < cs.dims.size(); ++k)
    out.emplace_back(cs.dims[k], cs.mults[k]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("lattice: bound policy") {
  CHECK(default_bound(span_q1()) == 5);
  CHECK_THROWS_AS(build_lattice(span_q1(), 6), config_error);
}

TEST_CASE("lattice: row zero of the Temperley-Lieb tower") {
  PopaLattice L = build_lattice(span_q1(), 4);
  CHECK(L.lambda == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(lattice_index(L) == doctest::Approx(4.0).epsilon(1e-12));
  // Catalan dimensions 1, 1, 2, 5, 14
  const std::size_t want[5] = {1, 1, 2, 5, 14};
  for (int j = 0; j <= 4; ++j) CHECK(L.cell(0, j).span.dim() == want[j]);
  // every cell is present and carries the interval word
  for (int i = 0; i <= 4; ++i)
    for (int j = i; j <= 4; ++j) CHECK(L.cell(i, j).word == interval(i, j));
}

TEST_CASE("lattice: deformed index follows the quantum dimension") {
  PopaLattice L = build_lattice(span_q12(), 4);
  double mu2 = 1.2 * 1.2;
  double d = mu2 + 1.0 / mu2;
  CHECK(lattice_index(L) == doctest::Approx(d * d).epsilon(1e-12));
  // (1921/900)^2, the exact rational square of d = 1.2^2 + 1.2^-2
  CHECK(lattice_index(L) == doctest::Approx(4.555853086419753).epsilon(1e-9));
}

TEST_CASE("lattice: axiom suite passes on representative backends") {
  for (Backend b : {span_q1(), make_finite_group_backend(s3_table(), s3_rep())}) {
    PopaLattice L = build_lattice(b, 4);
    AxiomReport rep = verify_axioms(L, 12345);
    CAPTURE(rep.max_residual);
    CHECK(rep.max_residual < 1e-8);
    CHECK(!rep.entries.empty());
    AxiomReport shift = shift_check(L);
    CHECK(shift.max_residual < 1e-8);
  }
}

TEST_CASE("lattice: jones projections live in their cells") {
  PopaLattice L = build_lattice(span_q12(), 4);
  for (int k = 2; k <= 4; ++k) {
    Mat e = jones_in_cell(L, k, k - 2, k);
    CHECK((e * e - e).norm() < 1e-10);
    CHECK((e - e.adjoint()).norm() < 1e-10);
    double res = 1.0;
    cell_expectation(L, k - 2, k, k - 2, k, e, &res);
    CHECK(res < 1e-10);
  }
}

TEST_CASE("lattice: embedding pads with identity legs") {
  PopaLattice L = build_lattice(span_q1(), 4);
  Mat id4 = Mat::Identity(4, 4);
  Mat up = embed_cell(L, 0, 2, 0, 4, id4);
  CHECK((up - Mat::Identity(16, 16)).norm() < 1e-12);
}

TEST_CASE("lattice: Bratteli decomposition of the Temperley-Lieb cell (0,4)") {
  PopaLattice L = build_lattice(span_q1(), 4);
  BratteliData bd = bratteli(L);
  const CellSummands& cs = bd.summands.at({0, 4});
  // multiplicity spaces of spin 2, 1, 0 inside (C^2)^{(x)4}
  std::vector<std::pair<int, int>> want = {{1, 5}, {2, 1}, {3, 3}};
  CHECK(dim_mult_pairs(cs) == want);
  // sum d_k^2 is the cell dimension, sum d_k m_k the ambient dimension
  int sum_sq = 0, sum_dm = 0;
  double sum_weight = 0.0;
  for (std::size_t k = 0; k < cs.dims.size(); ++k) {
    sum_sq += cs.dims[k] * cs.dims[k];
    sum_dm += cs.dims[k] * cs.mults[k];
    sum_weight += cs.dims[k] * cs.weights[k];
    // at Q = id the canonical trace is the normalized ambient trace
    CHECK(cs.weights[k] == doctest::Approx(cs.mults[k] / 16.0).epsilon(1e-8));
  }
  CHECK(sum_sq == 14);
  CHECK(sum_dm == 16);
  CHECK(sum_weight == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lattice: Bratteli decomposition of the S_3 cell (0,4)") {
  PopaLattice L = build_lattice(make_finite_group_backend(s3_table(), s3_rep()), 4);
  BratteliData bd = bratteli(L);
  const CellSummands& cs = bd.summands.at({0, 4});
  // v^4 = 3 triv + 3 sgn + 5 std
  std::vector<std::pair<int, int>> want = {{3, 1}, {3, 1}, {5, 2}};
  CHECK(dim_mult_pairs(cs) == want);
  int sum_sq = 0;
  for (int d : cs.dims) sum_sq += d * d;
  CHECK(sum_sq == 43);
  for (std::size_t k = 0; k < cs.dims.size(); ++k)
    CHECK(cs.weights[k] == doctest::Approx(cs.mults[k] / 16.0).epsilon(1e-8));
}

TEST_CASE("lattice: inclusion edges are unital integer embeddings") {
  for (Backend b : {span_q1(), span_q12()}) {
    PopaLattice L = build_lattice(b, 4);
    BratteliData bd = bratteli(L);
    CHECK(!bd.inclusions.empty());
    for (const InclusionEdge& e : bd.inclusions) {
      const CellSummands& from = bd.summands.at(e.from);
      const CellSummands& to = bd.summands.at(e.to);
      REQUIRE(e.mult.size() == to.dims.size());
      for (std::size_t k = 0; k < to.dims.size(); ++k) {
        REQUIRE(e.mult[k].size() == from.dims.size());
        int total = 0;
        for (std::size_t l = 0; l < from.dims.size(); ++l) {
          CHECK(e.mult[k][l] >= 0);
          total += e.mult[k][l] * from.dims[l];
        }
        CHECK(total == to.dims[k]);  // unital: multiplicities fill the summand
      }
    }
  }
}

TEST_CASE("lattice: bratteli_dot emits one node per summand") {
  PopaLattice L = build_lattice(span_q1(), 3);
  BratteliData bd = bratteli(L);
  std::string dot = bratteli_dot(bd);
  CHECK(dot.find("digraph") != std::string::npos);
  std::size_t nodes = 0;
  for (const auto& [key, cs] : bd.summands) nodes += cs.dims.size();
  std::size_t label_count = 0;
  for (std::size_t pos = dot.find("label="); pos != std::string::npos;
       pos = dot.find("label=", pos + 1))
    ++label_count;
  CHECK(label_count >= nodes);
}
