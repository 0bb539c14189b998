#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "qlattice/amenability.hpp"
#include "qlattice/json_io.hpp"
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

}  // namespace

TEST_CASE("json_io: matrices round-trip with complex entries") {
  Mat m(2, 2);
  m << Cplx(1.0, -2.0), Cplx(0.0, 0.5), Cplx(-3.25, 0.0), Cplx(0.0, 0.0);
  Mat back = mat_from_json(mat_to_json(m));
  CHECK((back - m).norm() == 0.0);
  CHECK_THROWS_AS(mat_from_json(nlohmann::json::array()), config_error);
  CHECK_THROWS_AS(mat_from_json(nlohmann::json::parse("[[1, 2], [3]]")),
                  config_error);
}

TEST_CASE("json_io: groups round-trip") {
  for (GroupSpec g :
       {GroupSpec::free_group(2), GroupSpec::free_abelian(3),
        GroupSpec::finite(s3_table()),
        GroupSpec::free_product(
            {GroupSpec::free_group(1), GroupSpec::free_abelian(2)})}) {
    GroupSpec back = group_from_json(group_to_json(g));
    CHECK(back.describe() == g.describe());
    CHECK(back.kind == g.kind);
  }
  CHECK_THROWS_AS(group_from_json(nlohmann::json::parse("{\"kind\": \"ring\"}")),
                  config_error);
  CHECK_THROWS_AS(group_from_json(nlohmann::json::parse("42")), config_error);
}

TEST_CASE("json_io: backends round-trip and keep their moments") {
  std::vector<Backend> bs;
  bs.push_back(make_finite_group_backend(s3_table(), s3_rep()));
  bs.push_back(
      make_dual_group_backend(GroupSpec::free_abelian(2), {{1, 0}, {0, 1}}));
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.2;
  q(1, 1) = 1.0 / 1.2;
  bs.push_back(make_span_q_backend(q));
  for (const Backend& b : bs) {
    Backend back = backend_from_json(backend_to_json(b));
    CHECK(back.type == b.type);
    CHECK(back.n == b.n);
    CHECK(backend_describe(back) == backend_describe(b));
    for (const Word& w : words_up_to(3)) CHECK(moment(back, w) == moment(b, w));
  }
  CHECK_THROWS_AS(backend_from_json(nlohmann::json::parse("{}")), config_error);
  CHECK_THROWS_AS(
      backend_from_json(nlohmann::json::parse("{\"type\": \"frobenius\"}")),
      config_error);
  CHECK_THROWS_AS(
      backend_from_json(nlohmann::json::parse("{\"type\": \"span_q\", \"q_diag\": []}")),
      config_error);
}

TEST_CASE("json_io: load_backend reads files and rejects missing ones") {
  const char* path = "qlattice_test_backend.json";
  {
    std::ofstream out(path);
    out << "{\"type\": \"dual_group\", \"group\": {\"kind\": \"free\", \"rank\": 2},"
        << " \"generators\": [[1], [2]]}";
  }
  Backend b = load_backend(path);
  CHECK(b.type == Backend::Type::dual_group);
  CHECK(moment(b, Word("ab")) == 2);
  std::remove(path);
  CHECK_THROWS_AS(load_backend("does_not_exist.json"), config_error);
}

TEST_CASE("json_io: moment tables round-trip") {
  Backend b =
      make_dual_group_backend(GroupSpec::free_abelian(2), {{1, 0}, {0, 1}});
  MomentTable t = moments_from_backend(b, 4);
  MomentTable back = moment_table_from_json(moment_table_to_json(t));
  CHECK(back.max_len == t.max_len);
  CHECK(back.entries == t.entries);
}

TEST_CASE("json_io: report serializers expose the verdict fields") {
  Backend b =
      make_dual_group_backend(GroupSpec::free_abelian(2), {{1, 0}, {0, 1}});
  SpectralEstimate est = kesten_test(b, 12);
  ordered_json j = amenability_report("kesten", est, b.n);
  CHECK(j.at("verdict").get<std::string>() == "amenable");
  CHECK(j.at("k_max").get<int>() == est.k_max);
  CHECK(j.contains("lower_bounds"));

  PopaLattice L = build_lattice(make_span_q_backend(Mat::Identity(2, 2)), 4);
  AxiomReport rep = verify_axioms(L, 12345);
  ordered_json ja = axiom_report_to_json(rep, 1e-8);
  CHECK(ja.at("pass").get<bool>());
  CHECK(ja.at("checks").get<std::size_t>() == rep.entries.size());

  BratteliData bd = bratteli(L);
  ordered_json jb = bratteli_to_json(bd);
  CHECK(jb.contains("cells"));
  CHECK(jb.contains("edges"));
}
