#include "qlattice/backend.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace qlat {

namespace {

// odometer over [n]^k, least significant last
bool next_index(std::vector<int>& idx, int n) {
  for (std::size_t t = idx.size(); t-- > 0;) {
    if (++idx[t] < n) return true;
    idx[t] = 0;
  }
  return false;
}

Mat rep_on_word(const Backend& b, const Word& w, std::size_t g) {
  Mat out = Mat::Ones(1, 1);
  for (std::size_t t = 0; t < w.size(); ++t) {
    const Mat& u = b.rep[g];
    out = kron(out, w.at(t) == Letter::alpha ? u : Mat(u.conjugate()));
  }
  return out;
}

OperatorSpan unbend_vectors(const DualityMaps& dm, const Word& x, const Word& y,
                            const std::vector<Vec>& vecs, double tol) {
  int n = dm.q.n;
  Index dx = pow_dim(n, x.size());
  Index dy = pow_dim(n, y.size());
  Eigen::RowVectorXcd cap = word_cap(dm, hat(x)).mat.row(0);
  Eigen::Map<const Mat> capm(cap.data(), dx, dx);
  std::vector<Mat> raw;
  raw.reserve(vecs.size());
  for (const Vec& s : vecs) {
    Eigen::Map<const Mat> sm(s.data(), dy, dx);
    raw.push_back(sm * capm);
  }
  return orthonormalize(n, x, y, raw, tol);
}

}  // namespace

Backend make_finite_group_backend(std::vector<std::vector<int>> mult_table,
                                  std::vector<Mat> rep, double tol) {
  Backend b;
  b.type = Backend::Type::finite_group;
  GroupSpec::finite(mult_table).validate();
  if (rep.size() != mult_table.size())
    throw config_error("finite group backend needs one matrix per group element");
  if (rep.empty() || rep[0].rows() != rep[0].cols() || rep[0].rows() < 1)
    throw config_error("representation matrices must be square");
  b.n = static_cast<int>(rep[0].rows());
  double slack = std::max(tol * 100, 1e-9) * b.n;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    if (rep[g].rows() != b.n || rep[g].cols() != b.n)
      throw config_error("representation matrices have inconsistent sizes");
    if ((rep[g].adjoint() * rep[g] - Mat::Identity(b.n, b.n)).norm() > slack)
      throw config_error("representation matrix " + std::to_string(g) +
                         " is not unitary");
  }
  for (std::size_t g = 0; g < rep.size(); ++g)
    for (std::size_t h = 0; h < rep.size(); ++h)
      if ((rep[g] * rep[h] - rep[static_cast<std::size_t>(mult_table[g][h])]).norm() >
          slack)
        throw config_error("representation is not a homomorphism at (" +
                           std::to_string(g) + "," + std::to_string(h) + ")");
  b.mult_table = std::move(mult_table);
  b.rep = std::move(rep);
  b.qdata = QData{b.n, Mat::Identity(b.n, b.n)};
  return b;
}

Backend make_dual_group_backend(GroupSpec group, std::vector<GroupSpec::El> generators) {
  group.validate();
  Backend b;
  b.type = Backend::Type::dual_group;
  if (generators.empty()) throw config_error("dual group backend needs generators");
  b.n = static_cast<int>(generators.size());
  b.generators.reserve(generators.size());
  for (auto& g : generators) b.generators.push_back(group.canon(g));
  b.group = std::move(group);
  b.qdata = QData{b.n, Mat::Identity(b.n, b.n)};
  return b;
}

Backend make_span_q_backend(const Mat& q_raw, double tol) {
  Backend b;
  b.type = Backend::Type::span_q;
  b.qdata = make_qdata(q_raw, tol);
  b.n = b.qdata.n;
  return b;
}

GroupSpec::El dual_grading(const Backend& b, const Word& w, const std::vector<int>& idx) {
  if (b.type != Backend::Type::dual_group)
    throw config_error("dual_grading needs a dual group backend");
  if (idx.size() != w.size()) throw config_error("dual_grading: index length mismatch");
  GroupSpec::El acc = b.group.identity();
  for (std::size_t t = 0; t < w.size(); ++t) {
    const auto& g = b.generators[static_cast<std::size_t>(idx[t])];
    acc = b.group.mul(acc, w.at(t) == Letter::alpha ? g : b.group.inv(g));
  }
  return acc;
}

OperatorSpan hom_basis(const Backend& b, const Word& x, const Word& y, double tol) {
  switch (b.type) {
    case Backend::Type::finite_group: {
      Word bent = hat(x) + y;
      Index dim = pow_dim(b.n, bent.size());
      Mat proj = Mat::Zero(dim, dim);
      for (std::size_t g = 0; g < b.rep.size(); ++g) proj += rep_on_word(b, bent, g);
      proj /= double(b.rep.size());
      Eigen::SelfAdjointEigenSolver<Mat> es((proj + proj.adjoint()) / 2.0);
      std::vector<Vec> fixed;
      for (Index k = 0; k < dim; ++k)
        if (es.eigenvalues()(k) > 0.5) fixed.push_back(es.eigenvectors().col(k));
      return unbend_vectors(b.duality(), x, y, fixed, tol);
    }
    case Backend::Type::dual_group: {
      OperatorSpan span{b.n, x, y, {}};
      Index dx = pow_dim(b.n, x.size());
      Index dy = pow_dim(b.n, y.size());
      // bucket domain gradings, then match codomain gradings
      std::unordered_map<std::string, std::vector<Index>> buckets;
      std::vector<int> idx(x.size(), 0);
      Index flat = 0;
      do {
        buckets[el_key(dual_grading(b, x, idx))].push_back(flat);
        ++flat;
      } while (next_index(idx, b.n) && flat < dx);
      std::vector<int> jdx(y.size(), 0);
      flat = 0;
      do {
        auto it = buckets.find(el_key(dual_grading(b, y, jdx)));
        if (it != buckets.end()) {
          for (Index i : it->second) {
            Mat unit = Mat::Zero(dy, dx);
            unit(flat, i) = 1.0;
            span.basis.push_back(std::move(unit));
          }
        }
        ++flat;
      } while (next_index(jdx, b.n) && flat < dy);
      return span;
    }
    case Backend::Type::span_q: {
      ClosureOptions opt;
      opt.window = static_cast<int>(x.size() + y.size());
      opt.tol = tol;
      ClosureEngine eng(b.duality(), opt);
      eng.run();
      return eng.hom(x, y);
    }
  }
  throw config_error("unknown backend type");
}

namespace {

count_t finite_group_moment(const Backend& b, const Word& w) {
  std::size_t order = b.rep.size();
  std::vector<Cplx> chi(order);
  for (std::size_t g = 0; g < order; ++g) chi[g] = b.rep[g].trace();
  Cplx acc = 0;
  for (std::size_t g = 0; g < order; ++g) {
    Cplx term = 1.0;
    for (std::size_t t = 0; t < w.size(); ++t)
      term *= w.at(t) == Letter::alpha ? chi[g] : std::conj(chi[g]);
    acc += term;
  }
  acc /= double(order);
  double rounded = std::round(acc.real());
  if (std::abs(acc.real() - rounded) > 1e-6 || std::abs(acc.imag()) > 1e-6)
    throw compute_error("character sum for word '" + w.text() +
                        "' is not close to an integer");
  return static_cast<count_t>(rounded);
}

count_t dual_group_moment(const Backend& b, const Word& w) {
  constexpr std::size_t kStateGuard = 6'000'000;
  std::map<GroupSpec::El, count_t> states;
  states[b.group.identity()] = 1;
  std::vector<GroupSpec::El> step(static_cast<std::size_t>(b.n));
  for (std::size_t t = 0; t < w.size(); ++t) {
    for (int i = 0; i < b.n; ++i)
      step[static_cast<std::size_t>(i)] =
          w.at(t) == Letter::alpha ? b.generators[static_cast<std::size_t>(i)]
                                   : b.group.inv(b.generators[static_cast<std::size_t>(i)]);
    std::map<GroupSpec::El, count_t> next;
    for (const auto& [el, cnt] : states)
      for (int i = 0; i < b.n; ++i)
        next[b.group.mul(el, step[static_cast<std::size_t>(i)])] += cnt;
    if (next.size() > kStateGuard)
      throw compute_error("dual group moment state space exceeds guard for word '" +
                          w.text() + "'");
    states = std::move(next);
  }
  auto it = states.find(b.group.identity());
  return it == states.end() ? 0 : it->second;
}

}  // namespace

std::vector<std::vector<int>> noncrossing_pairings(const Word& w) {
  int k = static_cast<int>(w.size());
  std::vector<std::vector<int>> out;
  if (k % 2 != 0) return out;
  using Arcs = std::vector<std::pair<int, int>>;
  std::function<std::vector<Arcs>(int, int)> rec = [&](int l, int r) {
    std::vector<Arcs> res;
    if (l > r) {
      res.push_back({});
      return res;
    }
    for (int q = l + 1; q <= r; q += 2) {
      if (w.at(static_cast<std::size_t>(q)) == w.at(static_cast<std::size_t>(l)))
        continue;
      for (const Arcs& inner : rec(l + 1, q - 1)) {
        for (const Arcs& outer : rec(q + 1, r)) {
          Arcs arcs;
          arcs.reserve(1 + inner.size() + outer.size());
          arcs.emplace_back(l, q);
          arcs.insert(arcs.end(), inner.begin(), inner.end());
          arcs.insert(arcs.end(), outer.begin(), outer.end());
          res.push_back(std::move(arcs));
        }
      }
    }
    return res;
  };
  for (const Arcs& arcs : rec(0, k - 1)) {
    std::vector<int> partner(static_cast<std::size_t>(k));
    for (auto [p, q] : arcs) {
      partner[static_cast<std::size_t>(p)] = q;
      partner[static_cast<std::size_t>(q)] = p;
    }
    out.push_back(std::move(partner));
  }
  return out;
}

count_t noncrossing_pairing_count(const Word& w) {
  int k = static_cast<int>(w.size());
  if (k % 2 != 0) return 0;
  if (k == 0) return 1;
  std::map<std::pair<int, int>, count_t> memo;
  std::function<count_t(int, int)> rec = [&](int l, int r) -> count_t {
    if (l > r) return 1;
    auto key = std::make_pair(l, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    count_t total = 0;
    for (int q = l + 1; q <= r; q += 2)
      if (w.at(static_cast<std::size_t>(q)) != w.at(static_cast<std::size_t>(l)))
        total += rec(l + 1, q - 1) * rec(q + 1, r);
    memo[key] = total;
    return total;
  };
  return rec(0, k - 1);
}

namespace {

count_t span_q_moment(const Backend& b, const Word& w) {
  if (w.size() > 16)
    throw compute_error("span_q moment guard: word length > 16 (Gram growth)");
  if (w.empty()) return 1;
  auto pairings = noncrossing_pairings(w);
  if (pairings.empty()) return 0;
  DualityMaps dm = b.duality();
  const Mat qa = dm.q.q;                    // arc matrix for (alpha, beta)
  const Mat qb = dm.q_inv.transpose();      // arc matrix for (beta, alpha)
  auto arc_matrix = [&](int p) { return w.at(static_cast<std::size_t>(p)) == Letter::alpha ? qa : qb; };

  std::size_t m = pairings.size();
  Mat gram(static_cast<Index>(m), static_cast<Index>(m));
  int k = static_cast<int>(w.size());
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t c = a; c < m; ++c) {
      const auto& bra = pairings[a];
      const auto& ket = pairings[c];
      // product over cycles of the union of the two pairings
      std::vector<char> seen(static_cast<std::size_t>(k), 0);
      Cplx value = 1.0;
      for (int s = 0; s < k; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        Mat cyc = Mat::Identity(b.n, b.n);
        int pos = s;
        do {
          // ket arc from pos
          int q = ket[static_cast<std::size_t>(pos)];
          Mat a2 = arc_matrix(std::min(pos, q));
          cyc = cyc * (pos < q ? a2 : Mat(a2.transpose()));
          seen[static_cast<std::size_t>(pos)] = 1;
          seen[static_cast<std::size_t>(q)] = 1;
          // bra arc (conjugated) from there
          int r = bra[static_cast<std::size_t>(q)];
          Mat a1 = arc_matrix(std::min(q, r)).conjugate();
          cyc = cyc * (q < r ? a1 : Mat(a1.transpose()));
          pos = r;
        } while (pos != s);
        value *= cyc.trace();
      }
      gram(static_cast<Index>(a), static_cast<Index>(c)) = value;
      gram(static_cast<Index>(c), static_cast<Index>(a)) = std::conj(value);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  count_t rank = 0;
  for (Index t = 0; t < es.eigenvalues().size(); ++t)
    if (es.eigenvalues()(t) > std::max(1e-12, 1e-9 * top)) ++rank;
  return rank;
}

}  // namespace

count_t moment(const Backend& b, const Word& w) {
  switch (b.type) {
    case Backend::Type::finite_group:
      return finite_group_moment(b, w);
    case Backend::Type::dual_group:
      return dual_group_moment(b, w);
    case Backend::Type::span_q:
      return span_q_moment(b, w);
  }
  throw config_error("unknown backend type");
}

count_t finite_group_fixed_point_dim(const Backend& b, const Word& w, double tol) {
  if (b.type != Backend::Type::finite_group)
    throw config_error("fixed point dimension needs a finite group backend");
  (void)tol;
  Index dim = pow_dim(b.n, w.size());
  Mat proj = Mat::Zero(dim, dim);
  for (std::size_t g = 0; g < b.rep.size(); ++g) proj += rep_on_word(b, w, g);
  proj /= double(b.rep.size());
  Eigen::SelfAdjointEigenSolver<Mat> es((proj + proj.adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  count_t cnt = 0;
  for (Index k = 0; k < dim; ++k)
    if (es.eigenvalues()(k) > 0.5) ++cnt;
  return cnt;
}

// --- tilde companion -------------------------------------------------------

namespace {

// Z * Gamma with the Z factor as part 0; lift re-indexes Gamma elements.
struct Companion {
  GroupSpec group;
  bool gamma_was_product = false;
};

Companion companion_group(const GroupSpec& gamma) {
  std::vector<GroupSpec> parts;
  parts.push_back(GroupSpec::free_abelian(1));
  bool product = gamma.kind == GroupSpec::Kind::free_product;
  if (product)
    parts.insert(parts.end(), gamma.parts.begin(), gamma.parts.end());
  else
    parts.push_back(gamma);
  return {GroupSpec::free_product(std::move(parts)), product};
}

GroupSpec::El lift_to_companion(const Companion& c, const GroupSpec& gamma,
                                const GroupSpec::El& e) {
  if (gamma.is_identity(e)) return {};
  if (!c.gamma_was_product) {
    GroupSpec::El out;
    out.push_back(1);
    out.push_back(static_cast<int>(e.size()));
    out.insert(out.end(), e.begin(), e.end());
    return out;
  }
  // shift part indices by one
  GroupSpec::El out = e;
  std::size_t pos = 0;
  while (pos < out.size()) {
    out[pos] += 1;
    pos += 2 + static_cast<std::size_t>(out[pos + 1]);
  }
  return out;
}

GroupSpec::El companion_z() { return {0, 1, 1}; }

}  // namespace

Backend tilde_companion_backend(const Backend& b) {
  if (b.type != Backend::Type::dual_group)
    throw config_error("tilde construction needs a dual group backend");
  Companion c = companion_group(b.group);
  std::vector<GroupSpec::El> gens;
  gens.reserve(b.generators.size());
  for (const auto& g : b.generators)
    gens.push_back(c.group.mul(companion_z(), lift_to_companion(c, b.group, g)));
  return make_dual_group_backend(c.group, std::move(gens));
}

TildeResult tilde_group(const Backend& b) {
  if (b.type != Backend::Type::dual_group)
    throw config_error("tilde_group needs a dual group backend");
  const GroupSpec& gamma = b.group;
  const auto& gens = b.generators;
  std::vector<GroupSpec::El> h_gens;
  GroupSpec::El g1_inv = gamma.inv(gens[0]);
  for (std::size_t j = 1; j < gens.size(); ++j)
    h_gens.push_back(gamma.mul(g1_inv, gens[j]));
  Subgroup h = Subgroup::generated(gamma, h_gens);  // unsupported kinds throw here

  TildeResult result;
  result.h_info = h.info();
  Companion c = companion_group(gamma);
  if (h.contains(gens[0])) {
    // case (i): the companion group with generators z g_i
    result.absorbed = true;
    result.backend = tilde_companion_backend(b);
    Subgroup full = Subgroup::generated(gamma, gens);
    result.isomorphic_to = "Z * " + full.info().describe();
  } else {
    // case (ii): Z * H with generators z, g_1^-1 g_2, ..., g_1^-1 g_n
    result.absorbed = false;
    std::vector<GroupSpec::El> tgens;
    tgens.push_back(companion_z());
    for (auto& hg : h_gens) tgens.push_back(lift_to_companion(c, gamma, hg));
    result.backend = make_dual_group_backend(c.group, std::move(tgens));
    result.isomorphic_to = "Z * " + h.info().describe();
  }
  return result;
}

}  // namespace qlat
