#include "qlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "qlattice/runtime.hpp"

namespace qlat {

namespace {

std::string cell_name(int i, int j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

Mat random_cell_element(const LatticeCell& c, std::mt19937_64& rng) {
  Vec coeff = random_complex_vector(static_cast<Index>(c.span.dim()), rng);
  Index rows = c.span.basis[0].rows();
  Mat x = Mat::Zero(rows, rows);
  for (std::size_t s = 0; s < c.span.dim(); ++s)
    x += coeff(static_cast<Index>(s)) * c.span.basis[s];
  double nrm = hs_norm(x);
  if (nrm > 0) x /= nrm;
  return x;
}

Cplx cell_trace(const LatticeCell& c, const Mat& x) { return (c.rho * x).trace(); }

void add_entry(AxiomReport& rep, const std::string& family, std::string detail,
               double residual) {
  rep.entries.push_back({family, std::move(detail), residual});
  rep.max_residual = std::max(rep.max_residual, residual);
}

}  // namespace

const LatticeCell& PopaLattice::cell(int i, int j) const {
  auto it = cells.find({i, j});
  if (it == cells.end())
    throw config_error("lattice cell " + cell_name(i, j) + " was not built");
  return it->second;
}

int default_bound(const Backend& b) {
  if (b.n <= 2) return 5;
  if (b.n == 3) return 4;
  return 3;
}

double lattice_index(const PopaLattice& L) { return 1.0 / L.lambda; }

PopaLattice build_lattice(const Backend& b, int bound, double tol) {
  if (bound < 0) throw config_error("lattice bound must be nonnegative");
  int cap = default_bound(b);
  if (bound > cap)
    throw config_error("lattice bound " + std::to_string(bound) +
                       " exceeds the supported maximum " + std::to_string(cap) +
                       " for leg dimension " + std::to_string(b.n));

  PopaLattice L;
  L.backend = b;
  L.dual = b.duality();
  L.lambda = L.dual.lambda;
  L.bound = bound;
  L.tol = tol;

  // span_q cells all come from one cup/cap closure run at the widest window;
  // group backends use their per-word averaging / grading routes.
  std::unique_ptr<ClosureEngine> engine;
  if (b.type == Backend::Type::span_q) {
    ClosureOptions opt;
    opt.window = std::max(2, 2 * bound);
    opt.tol = tol;
    engine = std::make_unique<ClosureEngine>(L.dual, opt);
    engine->run();
  }

  std::vector<CellKey> keys;
  for (int i = 0; i <= bound; ++i)
    for (int j = i; j <= bound; ++j) keys.push_back({i, j});

  std::vector<LatticeCell> built(keys.size());
  auto build_one = [&](std::size_t t) {
    auto [i, j] = keys[t];
    LatticeCell cell;
    cell.word = interval(i, j);
    cell.span = engine ? engine->hom(cell.word, cell.word)
                       : hom_basis(b, cell.word, cell.word, tol);
    if (cell.span.dim() == 0)
      throw compute_error("cell " + cell_name(i, j) + " came out empty");
    cell.rho = trace_density(L.dual, cell.word);
    std::size_t m = cell.span.dim();
    cell.rho_basis.reserve(m);
    for (const Mat& bs : cell.span.basis) cell.rho_basis.push_back(bs * cell.rho);
    Mat gram(m, m);
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t u = 0; u < m; ++u)
        gram(static_cast<Index>(s), static_cast<Index>(u)) =
            hs_inner(cell.rho_basis[s], cell.span.basis[u]);
    cell.tau_gram = Eigen::LDLT<Mat>(gram);
    if (cell.tau_gram.info() != Eigen::Success ||
        !cell.tau_gram.isPositive())
      throw compute_error("trace Gram matrix of cell " + cell_name(i, j) +
                          " is not positive definite");
    built[t] = std::move(cell);
  };
  if (engine) {
    for (std::size_t t = 0; t < keys.size(); ++t) build_one(t);
  } else {
    parallel_for(keys.size(), build_one);
  }
  for (std::size_t t = 0; t < keys.size(); ++t)
    L.cells.emplace(keys[t], std::move(built[t]));

  for (int k = 2; k <= bound; ++k) {
    TensorMap e = jones_projection(L.dual, jones_parity(k));
    if (!(e.dom == interval(k - 2, k)))
      throw compute_error("Jones projection parity mismatch at index " +
                          std::to_string(k));
    L.jones.emplace(k, std::move(e));
  }
  return L;
}

Mat embed_cell(const PopaLattice& L, int i, int j, int k, int l, const Mat& x) {
  if (!(k <= i && i <= j && j <= l))
    throw config_error("embed_cell requires " + cell_name(k, l) + " to contain " +
                       cell_name(i, j));
  return embed_middle(x, pow_dim(L.backend.n, i - k), pow_dim(L.backend.n, l - j));
}

Mat jones_in_cell(const PopaLattice& L, int k, int lo, int hi) {
  auto it = L.jones.find(k);
  if (it == L.jones.end())
    throw config_error("Jones projection e_" + std::to_string(k) +
                       " is outside the built range");
  if (!(lo <= k - 2 && k <= hi))
    throw config_error("cell " + cell_name(lo, hi) + " does not contain e_" +
                       std::to_string(k));
  return embed_middle(it->second.mat, pow_dim(L.backend.n, k - 2 - lo),
                      pow_dim(L.backend.n, hi - k));
}

Mat cell_expectation(const PopaLattice& L, int i, int j, int k, int l,
                     const Mat& x, double* in_span_residual) {
  if (!(i <= k && k <= l && l <= j))
    throw config_error("cell_expectation target " + cell_name(k, l) +
                       " must be nested in source " + cell_name(i, j));
  const LatticeCell& target = L.cell(k, l);
  Word r = interval(i, k), a = interval(k, l), w = interval(l, j);
  Mat y;
  if (r.empty() && w.empty()) {
    y = x;
  } else {
    TensorMap xm(L.backend.n, interval(i, j), interval(i, j), x);
    y = conditional_expectation(L.dual, r, a, w, xm).mat;
  }
  std::size_t m = target.span.dim();
  Vec v(static_cast<Index>(m));
  for (std::size_t s = 0; s < m; ++s)
    v(static_cast<Index>(s)) = hs_inner(target.rho_basis[s], y);
  Vec c = target.tau_gram.solve(v);
  Mat out = Mat::Zero(y.rows(), y.cols());
  for (std::size_t s = 0; s < m; ++s)
    out += c(static_cast<Index>(s)) * target.span.basis[s];
  if (in_span_residual) {
    double ny = hs_norm(y);
    *in_span_residual = ny > 0 ? hs_norm(y - out) / ny : 0.0;
  }
  return out;
}

double AxiomReport::family_max(const std::string& family) const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.family == family) m = std::max(m, e.residual);
  return m;
}

AxiomReport verify_axioms(const PopaLattice& L, std::uint64_t seed) {
  if (L.bound < 3)
    throw config_error("verify_axioms needs a lattice built to bound >= 3");
  AxiomReport rep;
  rep.seed = seed;
  std::mt19937_64 rng = seeded_rng(seed);
  int bound = L.bound;

  std::vector<CellKey> keys;
  for (const auto& [key, cell] : L.cells) keys.push_back(key);

  // (a) commuting squares E_{ij} E_{kl} = E_{rs}, r = max(i,k), s = min(j,l),
  // on random elements of the smallest common cell.
  for (const auto& [i, j] : keys)
    for (const auto& [k, l] : keys) {
      int r = std::max(i, k), s = std::min(j, l);
      if (r > s) continue;
      int lo = std::min(i, k), hi = std::max(j, l);
      const LatticeCell& top = L.cell(lo, hi);
      for (int rep_count = 0; rep_count < 2; ++rep_count) {
        Mat x = random_cell_element(top, rng);
        Mat u = cell_expectation(L, lo, hi, k, l, x);
        Mat ue = embed_cell(L, k, l, lo, hi, u);
        Mat v1 = cell_expectation(L, lo, hi, i, j, ue);
        Mat v2 = cell_expectation(L, lo, hi, r, s, x);
        double res = hs_norm(embed_cell(L, i, j, lo, hi, v1) -
                             embed_cell(L, r, s, lo, hi, v2));
        add_entry(rep, "commuting_square",
                  cell_name(i, j) + cell_name(k, l), res);
      }
    }

  // (b) Jones reductions, horizontal and vertical.
  for (const auto& [i, j] : keys) {
    if (i <= j - 1 && j + 1 <= bound) {
      const LatticeCell& src = L.cell(i, j);
      Mat x = random_cell_element(src, rng);
      Mat xe = embed_cell(L, i, j, i, j + 1, x);
      Mat e = jones_in_cell(L, j + 1, i, j + 1);
      Mat ex = cell_expectation(L, i, j, i, j - 1, x);
      Mat rhs = embed_cell(L, i, j - 1, i, j + 1, ex) * e;
      add_entry(rep, "jones_reduction", "h " + cell_name(i, j),
                hs_norm(e * xe * e - rhs));
    }
    if (i >= 1 && i + 1 <= j) {
      const LatticeCell& src = L.cell(i, j);
      Mat x = random_cell_element(src, rng);
      Mat xe = embed_cell(L, i, j, i - 1, j, x);
      Mat e = jones_in_cell(L, i + 1, i - 1, j);
      Mat ex = cell_expectation(L, i, j, i + 1, j, x);
      Mat rhs = embed_cell(L, i + 1, j, i - 1, j, ex) * e;
      add_entry(rep, "jones_reduction", "v " + cell_name(i, j),
                hs_norm(e * xe * e - rhs));
    }
  }

  // (c) Markov conditions, horizontal (x in A_{i,j+2}) and vertical
  // (x in A_{ij}, e_{i+2} inside).
  for (const auto& [i, m] : keys) {
    if (m >= i + 2) {
      const LatticeCell& src = L.cell(i, m);
      Mat x = random_cell_element(src, rng);
      Mat e = jones_in_cell(L, m, i, m);
      Mat xe = x * e;
      Mat y = cell_expectation(L, i, m, i, m - 1, xe);
      Mat lhs = (1.0 / L.lambda) * embed_cell(L, i, m - 1, i, m, y) * e;
      add_entry(rep, "markov", "h " + cell_name(i, m), hs_norm(lhs - xe));
    }
    if (m >= i + 2) {
      const LatticeCell& src = L.cell(i, m);
      Mat x = random_cell_element(src, rng);
      Mat e = jones_in_cell(L, i + 2, i, m);
      Mat xe = x * e;
      Mat y = cell_expectation(L, i, m, i + 1, m, xe);
      Mat lhs = (1.0 / L.lambda) * embed_cell(L, i + 1, m, i, m, y) * e;
      add_entry(rep, "markov", "v " + cell_name(i, m), hs_norm(lhs - xe));
    }
  }

  // (d) commutation [A_{ij}, A_{kl}] = 0 for i <= j <= k <= l.
  for (const auto& [i, j] : keys)
    for (const auto& [k, l] : keys) {
      if (!(j <= k)) continue;
      Mat x = random_cell_element(L.cell(i, j), rng);
      Mat y = random_cell_element(L.cell(k, l), rng);
      Mat xe = embed_cell(L, i, j, i, l, x);
      Mat ye = embed_cell(L, k, l, i, l, y);
      add_entry(rep, "commutation", cell_name(i, j) + cell_name(k, l),
                hs_norm(xe * ye - ye * xe));
    }

  // (e) Temperley-Lieb relations among the Jones projections.
  for (int k = 2; k <= bound; ++k)
    for (int k2 = 2; k2 <= bound; ++k2) {
      if (k == k2) continue;
      int lo = std::min(k, k2) - 2, hi = std::max(k, k2);
      Mat a = jones_in_cell(L, k, lo, hi);
      Mat b = jones_in_cell(L, k2, lo, hi);
      if (std::abs(k - k2) == 1) {
        add_entry(rep, "temperley_lieb",
                  "e" + std::to_string(k) + " e" + std::to_string(k2),
                  hs_norm(a * b * a - L.lambda * a));
      } else {
        add_entry(rep, "temperley_lieb",
                  "[e" + std::to_string(k) + ", e" + std::to_string(k2) + "]",
                  hs_norm(a * b - b * a));
      }
    }

  // expectations of lattice elements stay in the lattice, preserve the
  // trace, and nested cells include isometrically.
  for (const auto& [i, j] : keys)
    for (int k = i; k <= j; ++k)
      for (int l = k; l <= j; ++l) {
        const LatticeCell& src = L.cell(i, j);
        Mat x = random_cell_element(src, rng);
        double in_span = 0.0;
        Mat ex = cell_expectation(L, i, j, k, l, x, &in_span);
        add_entry(rep, "expectation_in_cell",
                  cell_name(i, j) + "->" + cell_name(k, l), in_span);
        Cplx t1 = cell_trace(src, x);
        Cplx t2 = cell_trace(L.cell(k, l), ex);
        add_entry(rep, "trace_compat",
                  cell_name(i, j) + "->" + cell_name(k, l), std::abs(t1 - t2));
      }

  for (const auto& [i, j] : keys)
    for (const auto& [k, l] : keys) {
      if (!(k <= i && j <= l) || (k == i && j == l)) continue;
      const LatticeCell& small = L.cell(i, j);
      const LatticeCell& big = L.cell(k, l);
      double worst = 0.0;
      for (const Mat& bs : small.span.basis) {
        Mat be = embed_cell(L, i, j, k, l, bs);
        worst = std::max(worst, span_residual(big.span, be));
      }
      add_entry(rep, "inclusion", cell_name(i, j) + " in " + cell_name(k, l),
                worst);
    }

  for (int k = 2; k <= bound; ++k)
    for (const auto& [a, b] : keys) {
      if (!(a <= k - 2 && k <= b)) continue;
      Mat e = jones_in_cell(L, k, a, b);
      add_entry(rep, "jones_membership",
                "e" + std::to_string(k) + " in " + cell_name(a, b),
                span_residual(L.cell(a, b).span, e));
    }

  for (const auto& [key, cell] : L.cells) {
    std::size_t m = cell.span.dim();
    Mat gram(m, m);
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t u = 0; u < m; ++u)
        gram(static_cast<Index>(s), static_cast<Index>(u)) =
            hs_inner(cell.rho_basis[s], cell.span.basis[u]);
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    add_entry(rep, "trace_gram", cell_name(key.first, key.second),
              lo > L.tol * hi ? 0.0 : 1.0);
  }

  return rep;
}

AxiomReport shift_check(const PopaLattice& L) {
  if (L.bound < 4)
    throw config_error("shift_check needs a lattice built to bound >= 4");
  AxiomReport rep;
  for (const auto& [key, small] : L.cells) {
    auto [i, j] = key;
    auto it = L.cells.find({i + 2, j + 2});
    if (it == L.cells.end()) continue;
    const LatticeCell& shifted = it->second;
    if (!(small.word == shifted.word))
      throw compute_error("shifted cells disagree on their leg word");
    double worst = 0.0;
    for (const Mat& bs : small.span.basis)
      worst = std::max(worst, span_residual(shifted.span, bs));
    for (const Mat& bs : shifted.span.basis)
      worst = std::max(worst, span_residual(small.span, bs));
    add_entry(rep, "shift",
              cell_name(i, j) + " vs " + cell_name(i + 2, j + 2), worst);
  }
  return rep;
}

namespace {

// Center of the cell algebra: coefficient vectors killed by every commutator
// map c -> [sum_t c_t b_t, b_s].
std::vector<Mat> cell_center(const LatticeCell& cell, double tol) {
  std::size_t m = cell.span.dim();
  Index d2 = cell.span.basis[0].rows() * cell.span.basis[0].cols();
  Mat k(static_cast<Index>(m) * d2, static_cast<Index>(m));
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t s = 0; s < m; ++s) {
      Mat comm = cell.span.basis[t] * cell.span.basis[s] -
                 cell.span.basis[s] * cell.span.basis[t];
      k.block(static_cast<Index>(s) * d2, static_cast<Index>(t), d2, 1) =
          Eigen::Map<Vec>(comm.data(), d2);
    }
  // JacobiSVD for the same robustness reason as in orthonormalize(): the
  // commutator stack has a large exact kernel, which trips BDCSVD deflation.
  Eigen::JacobiSVD<Mat> svd(k, Eigen::ComputeThinV);
  double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  double cut = std::max(1e-12, tol * smax);
  std::vector<Mat> out;
  for (Index c = 0; c < svd.singularValues().size(); ++c) {
    if (svd.singularValues()(c) > cut) continue;
    Mat z = Mat::Zero(cell.span.basis[0].rows(), cell.span.basis[0].cols());
    for (std::size_t t = 0; t < m; ++t)
      z += svd.matrixV()(static_cast<Index>(t), c) * cell.span.basis[t];
    out.push_back(std::move(z));
  }
  return out;
}

// Split sorted eigenvalues into exactly `count` clusters at the largest
// consecutive gaps.  The count is known from independent structure (center
// dimension, corner rank), so clustering only locates the separators; it
// refuses when those are not clearly larger than the intra-cluster spread.
std::vector<std::vector<Index>> cluster_eigenvalues(const Eigen::VectorXd& ev,
                                                    int count, double floor_gap,
                                                    const std::string& context) {
  const Index n = ev.size();
  if (count < 1 || static_cast<Index>(count) > n)
    throw compute_error(context + ": cannot split " + std::to_string(n) +
                        " eigenvalues into " + std::to_string(count) +
                        " clusters");
  std::vector<std::pair<double, Index>> gaps;
  for (Index t = 0; t + 1 < n; ++t) gaps.emplace_back(ev(t + 1) - ev(t), t);
  std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<Index> seps;
  double min_sep = 0.0;
  for (int t = 0; t < count - 1; ++t) {
    seps.push_back(gaps[t].second);
    min_sep = t == 0 ? gaps[t].first : std::min(min_sep, gaps[t].first);
  }
  double max_intra = 0.0;
  for (std::size_t t = static_cast<std::size_t>(count) - 1; t < gaps.size(); ++t)
    max_intra = std::max(max_intra, gaps[t].first);
  if (count > 1 && min_sep < std::max(10.0 * max_intra, floor_gap))
    throw compute_error(context +
                        ": eigenvalue clustering is ambiguous (separator gap " +
                        std::to_string(min_sep) + " vs intra-cluster spread " +
                        std::to_string(max_intra) + "); try another seed");
  std::sort(seps.begin(), seps.end());
  std::vector<std::vector<Index>> clusters(1);
  std::size_t used = 0;
  for (Index t = 0; t < n; ++t) {
    clusters.back().push_back(t);
    if (used < seps.size() && t == seps[used] && t + 1 < n) {
      clusters.emplace_back();
      ++used;
    }
  }
  return clusters;
}

}  // namespace

BratteliData bratteli(const PopaLattice& L, std::uint64_t seed) {
  BratteliData data;
  data.seed = seed;
  std::mt19937_64 rng = seeded_rng(seed);

  for (const auto& [key, cell] : L.cells) {
    std::string name = cell_name(key.first, key.second);
    Index dim = cell.span.basis[0].rows();
    CellSummands cs;
    cs.key = key;

    if (cell.span.dim() == 1) {
      cs.dims = {1};
      cs.mults = {static_cast<int>(dim)};
      cs.weights = {1.0};
      cs.central_projections = {Mat::Identity(dim, dim)};
      cs.minimal_projections = {Mat::Identity(dim, dim)};
      data.summands.emplace(key, std::move(cs));
      continue;
    }

    std::vector<Mat> center = cell_center(cell, L.tol);
    if (center.empty())
      throw compute_error("center of cell " + name + " came out empty");

    Vec gamma = random_complex_vector(static_cast<Index>(center.size()), rng);
    Mat z = Mat::Zero(dim, dim);
    for (std::size_t t = 0; t < center.size(); ++t)
      z += gamma(static_cast<Index>(t)) * center[t];
    z = (z + z.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> eig(z);
    double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    auto clusters =
        cluster_eigenvalues(eig.eigenvalues(), static_cast<int>(center.size()),
                            10.0 * L.tol * scale, "central element of cell " + name);

    for (const auto& cluster : clusters) {
      Mat q = Mat::Zero(dim, dim);
      for (Index t : cluster)
        q += eig.eigenvectors().col(t) * eig.eigenvectors().col(t).adjoint();

      std::vector<Mat> corner;
      corner.reserve(cell.span.dim());
      for (const Mat& bs : cell.span.basis) corner.push_back(q * bs * q);
      OperatorSpan corner_span = orthonormalize(L.backend.n, cell.word,
                                                cell.word, corner, L.tol);
      double droot = std::sqrt(static_cast<double>(corner_span.dim()));
      int d = static_cast<int>(std::lround(droot));
      if (d * d != static_cast<int>(corner_span.dim()))
        throw compute_error("corner dimension of cell " + name +
                            " is not a perfect square");
      double trace_q = q.trace().real();
      int mult = static_cast<int>(std::lround(trace_q / d));
      if (std::abs(trace_q - static_cast<double>(mult) * d) > 1e-6)
        throw compute_error("summand multiplicity of cell " + name +
                            " is not an integer");
      double weight = ((cell.rho * q).trace() / static_cast<double>(d)).real();

      Mat minimal;
      if (d == 1) {
        minimal = q;
      } else {
        Vec g2 = random_complex_vector(static_cast<Index>(corner_span.dim()), rng);
        Mat y = Mat::Zero(dim, dim);
        for (std::size_t t = 0; t < corner_span.dim(); ++t)
          y += g2(static_cast<Index>(t)) * corner_span.basis[t];
        y = (y + y.adjoint()).eval();
        double offset = 2.0 * hs_norm(y) + 1.0;
        y += offset * q;
        Eigen::SelfAdjointEigenSolver<Mat> es(y);
        std::vector<double> support_vals;
        std::vector<Index> support_idx;
        for (Index t = 0; t < es.eigenvalues().size(); ++t)
          if (es.eigenvalues()(t) > offset / 2) support_idx.push_back(t);
        if (static_cast<int>(support_idx.size()) != d * mult)
          throw compute_error("corner support of cell " + name +
                              " has unexpected rank");
        Eigen::VectorXd supported(static_cast<Index>(support_idx.size()));
        for (std::size_t t = 0; t < support_idx.size(); ++t)
          supported(static_cast<Index>(t)) = es.eigenvalues()(support_idx[t]);
        double cscale = std::max(1.0, supported.cwiseAbs().maxCoeff());
        auto cclusters = cluster_eigenvalues(supported, d, 10.0 * L.tol * cscale,
                                             "corner spectrum of cell " + name);
        minimal = Mat::Zero(dim, dim);
        for (Index t : cclusters.front()) {
          Index col = support_idx[static_cast<std::size_t>(t)];
          minimal += es.eigenvectors().col(col) * es.eigenvectors().col(col).adjoint();
        }
        if (static_cast<int>(cclusters.front().size()) != mult)
          throw compute_error("minimal projection rank mismatch in cell " + name);
      }

      cs.dims.push_back(d);
      cs.mults.push_back(mult);
      cs.weights.push_back(weight);
      cs.central_projections.push_back(std::move(q));
      cs.minimal_projections.push_back(std::move(minimal));
    }

    double total = 0.0;
    for (std::size_t t = 0; t < cs.dims.size(); ++t)
      total += cs.dims[t] * cs.weights[t];
    if (std::abs(total - 1.0) > 1e-8)
      throw compute_error("trace weights of cell " + name +
                          " do not sum to 1 against dimensions");
    data.summands.emplace(key, std::move(cs));
  }

  // Inclusion multiplicity matrices along horizontal and vertical edges.
  auto add_edge = [&](CellKey from, CellKey to) {
    const CellSummands& a = data.summands.at(from);
    const CellSummands& b = data.summands.at(to);
    InclusionEdge edge;
    edge.from = from;
    edge.to = to;
    edge.mult.assign(b.dims.size(), std::vector<int>(a.dims.size(), 0));
    for (std::size_t l = 0; l < a.dims.size(); ++l) {
      Mat p = embed_cell(L, from.first, from.second, to.first, to.second,
                         a.minimal_projections[l]);
      for (std::size_t k = 0; k < b.dims.size(); ++k) {
        double raw = (b.central_projections[k] * p).trace().real() /
                     static_cast<double>(b.mults[k]);
        int lam = static_cast<int>(std::lround(raw));
        if (std::abs(raw - lam) > 1e-6)
          throw compute_error("inclusion multiplicity " +
                              cell_name(from.first, from.second) + " -> " +
                              cell_name(to.first, to.second) +
                              " is not an integer");
        edge.mult[k][l] = lam;
      }
    }
    for (std::size_t k = 0; k < b.dims.size(); ++k) {
      int total = 0;
      for (std::size_t l = 0; l < a.dims.size(); ++l)
        total += edge.mult[k][l] * a.dims[l];
      if (total != b.dims[k])
        throw compute_error("inclusion bookkeeping failed on edge " +
                            cell_name(from.first, from.second) + " -> " +
                            cell_name(to.first, to.second));
    }
    data.inclusions.push_back(std::move(edge));
  };

  for (const auto& [key, cell] : L.cells) {
    auto [i, j] = key;
    if (L.cells.count({i, j + 1})) add_edge({i, j}, {i, j + 1});
    if (i >= 1 && L.cells.count({i - 1, j})) add_edge({i, j}, {i - 1, j});
  }
  return data;
}

std::string bratteli_dot(const BratteliData& data) {
  std::ostringstream os;
  os << "digraph bratteli {\n  rankdir=BT;\n  node [shape=box];\n";
  auto node_id = [](CellKey key, std::size_t summand) {
    std::ostringstream id;
    id << "c" << key.first << "_" << key.second << "_" << summand;
    return id.str();
  };
  std::map<int, std::vector<std::string>> by_row;
  for (const auto& [key, cs] : data.summands) {
    for (std::size_t t = 0; t < cs.dims.size(); ++t) {
      os << "  " << node_id(key, t) << " [label=\"A(" << key.first << ","
         << key.second << ") d=" << cs.dims[t] << " t=" << cs.weights[t]
         << "\"];\n";
      by_row[key.second].push_back(node_id(key, t));
    }
  }
  for (const auto& [row, ids] : by_row) {
    os << "  { rank=same;";
    for (const auto& id : ids) os << " " << id << ";";
    os << " }\n";
  }
  for (const auto& edge : data.inclusions)
    for (std::size_t k = 0; k < edge.mult.size(); ++k)
      for (std::size_t l = 0; l < edge.mult[k].size(); ++l) {
        if (edge.mult[k][l] == 0) continue;
        os << "  " << node_id(edge.from, l) << " -> " << node_id(edge.to, k)
           << " [label=\"" << edge.mult[k][l] << "\"];\n";
      }
  os << "}\n";
  return os.str();
}

}  // namespace qlat
