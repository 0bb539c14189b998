#include "qlattice/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qlattice/words.hpp"

namespace qlat {

namespace {

std::string cell_name(const CellKey& key) {
  return std::to_string(key.first) + "," + std::to_string(key.second);
}

Cplx entry_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Cplx(j[0].get<double>(), j[1].get<double>());
  throw config_error("matrix entry must be a number or an [re, im] pair");
}

}  // namespace

Mat mat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw config_error("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw config_error("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = entry_from_json(j[r][c]);
  }
  return m;
}

ordered_json mat_to_json(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

GroupSpec group_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw config_error("group object needs a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "free" || kind == "free_abelian") {
    if (!j.contains("rank") || !j.at("rank").is_number_integer())
      throw config_error("group kind '" + kind + "' needs an integer 'rank'");
    int rank = j.at("rank").get<int>();
    return kind == "free" ? GroupSpec::free_group(rank)
                          : GroupSpec::free_abelian(rank);
  }
  if (kind == "finite") {
    if (!j.contains("mult_table"))
      throw config_error("finite group needs a 'mult_table'");
    return GroupSpec::finite(
        j.at("mult_table").get<std::vector<std::vector<int>>>());
  }
  if (kind == "free_product") {
    if (!j.contains("parts") || !j.at("parts").is_array())
      throw config_error("free product needs a 'parts' array");
    std::vector<GroupSpec> parts;
    for (const auto& p : j.at("parts")) parts.push_back(group_from_json(p));
    return GroupSpec::free_product(std::move(parts));
  }
  throw config_error("unknown group kind '" + kind + "'");
}

ordered_json group_to_json(const GroupSpec& g) {
  ordered_json j;
  switch (g.kind) {
    case GroupSpec::Kind::free:
      j["kind"] = "free";
      j["rank"] = g.rank;
      break;
    case GroupSpec::Kind::free_abelian:
      j["kind"] = "free_abelian";
      j["rank"] = g.rank;
      break;
    case GroupSpec::Kind::finite:
      j["kind"] = "finite";
      j["mult_table"] = g.table;
      break;
    case GroupSpec::Kind::free_product: {
      j["kind"] = "free_product";
      ordered_json parts = ordered_json::array();
      for (const auto& p : g.parts) parts.push_back(group_to_json(p));
      j["parts"] = std::move(parts);
      break;
    }
  }
  return j;
}

Backend backend_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("type"))
      throw config_error("backend object needs a 'type' field");
    const std::string type = j.at("type").get<std::string>();
    if (type == "finite_group") {
      if (!j.contains("mult_table") || !j.contains("rep"))
        throw config_error("finite_group backend needs 'mult_table' and 'rep'");
      std::vector<Mat> rep;
      for (const auto& m : j.at("rep")) rep.push_back(mat_from_json(m));
      return make_finite_group_backend(
          j.at("mult_table").get<std::vector<std::vector<int>>>(),
          std::move(rep));
    }
    if (type == "dual_group") {
      if (!j.contains("group") || !j.contains("generators"))
        throw config_error("dual_group backend needs 'group' and 'generators'");
      std::vector<GroupSpec::El> gens;
      for (const auto& g : j.at("generators"))
        gens.push_back(g.get<std::vector<int>>());
      return make_dual_group_backend(group_from_json(j.at("group")),
                                     std::move(gens));
    }
    if (type == "span_q") {
      if (j.contains("q_diag")) {
        auto diag = j.at("q_diag").get<std::vector<double>>();
        if (diag.empty()) throw config_error("'q_diag' must be non-empty");
        Mat q = Mat::Zero(static_cast<Index>(diag.size()),
                          static_cast<Index>(diag.size()));
        for (std::size_t i = 0; i < diag.size(); ++i)
          q(static_cast<Index>(i), static_cast<Index>(i)) = diag[i];
        return make_span_q_backend(q);
      }
      if (j.contains("q")) return make_span_q_backend(mat_from_json(j.at("q")));
      throw config_error("span_q backend needs 'q_diag' or 'q'");
    }
    throw config_error("unknown backend type '" + type + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("malformed backend JSON: ") + ex.what());
  }
}

ordered_json backend_to_json(const Backend& b) {
  ordered_json j;
  switch (b.type) {
    case Backend::Type::finite_group:
      j["type"] = "finite_group";
      j["mult_table"] = b.mult_table;
      j["rep"] = ordered_json::array();
      for (const auto& m : b.rep) j["rep"].push_back(mat_to_json(m));
      break;
    case Backend::Type::dual_group:
      j["type"] = "dual_group";
      j["group"] = group_to_json(b.group);
      j["generators"] = b.generators;
      break;
    case Backend::Type::span_q: {
      j["type"] = "span_q";
      bool diagonal = true;
      for (Index r = 0; r < b.qdata.q.rows() && diagonal; ++r)
        for (Index c = 0; c < b.qdata.q.cols() && diagonal; ++c)
          if (r != c && std::abs(b.qdata.q(r, c)) > 0) diagonal = false;
      if (diagonal) {
        std::vector<double> diag;
        for (Index r = 0; r < b.qdata.q.rows(); ++r)
          diag.push_back(b.qdata.q(r, r).real());
        j["q_diag"] = diag;
      } else {
        j["q"] = mat_to_json(b.qdata.q);
      }
      break;
    }
  }
  return j;
}

Backend load_backend(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open backend file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw config_error("malformed JSON in '" + path + "': " + ex.what());
  }
  return backend_from_json(j);
}

std::string backend_describe(const Backend& b) {
  switch (b.type) {
    case Backend::Type::finite_group:
      return "finite_group(order=" + std::to_string(b.mult_table.size()) +
             ", dim=" + std::to_string(b.n) + ")";
    case Backend::Type::dual_group:
      return "dual(" + b.group.describe() + ")";
    case Backend::Type::span_q:
      return "span_q(n=" + std::to_string(b.n) + ")";
  }
  return "backend";
}

ordered_json moment_table_to_json(const MomentTable& t) {
  ordered_json j;
  j["max_len"] = t.max_len;
  ordered_json entries;
  for (const auto& [w, count] : t.entries) entries[w.text()] = count;
  j["entries"] = std::move(entries);
  return j;
}

MomentTable moment_table_from_json(const nlohmann::json& j) {
  try {
    MomentTable t;
    t.max_len = j.at("max_len").get<int>();
    for (const auto& [text, count] : j.at("entries").items())
      t.entries[Word(text)] = count.get<count_t>();
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("malformed moment table JSON: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw config_error(std::string("malformed moment table word: ") + ex.what());
  }
}

ordered_json axiom_report_to_json(const AxiomReport& r, double threshold) {
  ordered_json j;
  j["seed"] = r.seed;
  j["checks"] = r.entries.size();
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass(threshold);
  std::map<std::string, double> families;
  const AxiomReport::Entry* worst = nullptr;
  for (const auto& e : r.entries) {
    auto [it, fresh] = families.emplace(e.family, e.residual);
    if (!fresh) it->second = std::max(it->second, e.residual);
    if (!worst || e.residual > worst->residual) worst = &e;
  }
  ordered_json fam;
  for (const auto& [name, res] : families) fam[name] = res;
  j["families"] = std::move(fam);
  if (worst) {
    j["worst"] = {{"family", worst->family},
                  {"detail", worst->detail},
                  {"residual", worst->residual}};
  }
  return j;
}

ordered_json bratteli_to_json(const BratteliData& b) {
  ordered_json j;
  j["seed"] = b.seed;
  ordered_json cells = ordered_json::array();
  for (const auto& [key, s] : b.summands) {
    ordered_json c;
    c["cell"] = cell_name(key);
    c["dims"] = s.dims;
    c["mults"] = s.mults;
    c["weights"] = s.weights;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  ordered_json edges = ordered_json::array();
  for (const auto& e : b.inclusions) {
    ordered_json ej;
    ej["from"] = cell_name(e.from);
    ej["to"] = cell_name(e.to);
    ej["mult"] = e.mult;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  return j;
}

namespace {

ordered_json estimate_to_json(const std::string& test,
                              const SpectralEstimate& est, int n) {
  ordered_json j;
  j["test"] = test;
  j["lower_bounds"] = est.lower_bounds;
  j["ratios"] = est.ratio_estimates;
  j["extrapolated"] = est.extrapolated;
  j["verdict"] = verdict_name(est.verdict);
  j["n"] = n;
  j["margin"] = est.margin;
  j["k_max"] = est.k_max;
  j["ceiling"] = est.ceiling;
  j["moment_numerators"] = est.moment_numerators;
  j["monotone_exact"] = est.monotone_exact;
  return j;
}

}  // namespace

ordered_json amenability_report(const std::string& test,
                                const SpectralEstimate& est, int n) {
  ordered_json j = estimate_to_json(test, est, n);
  j["d"] = est.ceiling;
  j["index"] = nullptr;
  j["index_is_square"] = nullptr;
  return j;
}

ordered_json amenability_report(const std::string& test,
                                const LatticeAmenability& la, int n) {
  ordered_json j = estimate_to_json(test, la.estimate, n);
  j["d"] = std::sqrt(la.index);
  j["index"] = la.index;
  j["index_is_square"] = la.index_is_square;
  j["trace_compatible"] = la.trace_flag;
  return j;
}

}  // namespace qlat
