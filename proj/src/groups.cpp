#include "qlattice/groups.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qlattice/tensorops.hpp"  // config_error

namespace qlat {

using El = GroupSpec::El;

GroupSpec GroupSpec::free_group(int rank) {
  GroupSpec g;
  g.kind = Kind::free;
  g.rank = rank;
  return g;
}

GroupSpec GroupSpec::free_abelian(int rank) {
  GroupSpec g;
  g.kind = Kind::free_abelian;
  g.rank = rank;
  return g;
}

GroupSpec GroupSpec::finite(std::vector<std::vector<int>> table) {
  GroupSpec g;
  g.kind = Kind::finite;
  g.table = std::move(table);
  return g;
}

GroupSpec GroupSpec::free_product(std::vector<GroupSpec> parts) {
  GroupSpec g;
  g.kind = Kind::free_product;
  g.parts = std::move(parts);
  return g;
}

void GroupSpec::validate() const {
  switch (kind) {
    case Kind::free:
    case Kind::free_abelian:
      if (rank < 0) throw config_error("group rank must be nonnegative");
      return;
    case Kind::finite: {
      std::size_t m = table.size();
      if (m == 0) throw config_error("finite group table is empty");
      for (auto& row : table) {
        if (row.size() != m) throw config_error("finite group table is not square");
        for (int v : row)
          if (v < 0 || static_cast<std::size_t>(v) >= m)
            throw config_error("finite group table entry out of range");
      }
      // identity
      int id = identity_index();
      // inverses: every row and column is a permutation hitting id
      for (std::size_t g = 0; g < m; ++g) {
        bool has_inv = false;
        std::vector<char> seen_row(m, 0), seen_col(m, 0);
        for (std::size_t h = 0; h < m; ++h) {
          if (table[g][h] == id) has_inv = true;
          if (seen_row[static_cast<std::size_t>(table[g][h])]++)
            throw config_error("finite group table row is not a permutation");
          if (seen_col[static_cast<std::size_t>(table[h][g])]++)
            throw config_error("finite group table column is not a permutation");
        }
        if (!has_inv) throw config_error("finite group element lacks an inverse");
      }
      if (m <= 512) {
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
              if (table[static_cast<std::size_t>(table[a][b])][c] !=
                  table[a][static_cast<std::size_t>(table[b][c])])
                throw config_error("finite group table is not associative");
      }
      return;
    }
    case Kind::free_product: {
      if (parts.size() < 2) throw config_error("free product needs at least two parts");
      for (auto& p : parts) {
        if (p.kind == Kind::free_product)
          throw config_error("nested free products are not supported; flatten the parts");
        p.validate();
      }
      return;
    }
  }
}

int GroupSpec::identity_index() const {
  if (kind != Kind::finite) throw config_error("identity_index on non-finite group");
  std::size_t m = table.size();
  for (std::size_t e = 0; e < m; ++e) {
    bool ok = true;
    for (std::size_t h = 0; h < m && ok; ++h)
      ok = table[e][h] == static_cast<int>(h) && table[h][e] == static_cast<int>(h);
    if (ok) return static_cast<int>(e);
  }
  throw config_error("finite group table has no identity");
}

El GroupSpec::identity() const {
  switch (kind) {
    case Kind::free:
      return {};
    case Kind::free_abelian:
      return El(static_cast<std::size_t>(rank), 0);
    case Kind::finite:
      return {identity_index()};
    case Kind::free_product:
      return {};
  }
  return {};
}

namespace {

// Syllable view of a free-product element.
struct Syllable {
  int part;
  El payload;
};

std::vector<Syllable> parse_syllables(const GroupSpec& g, const El& e) {
  std::vector<Syllable> out;
  std::size_t pos = 0;
  while (pos < e.size()) {
    if (pos + 2 > e.size()) throw config_error("malformed free product element");
    int part = e[pos];
    int len = e[pos + 1];
    if (part < 0 || static_cast<std::size_t>(part) >= g.parts.size() || len < 0 ||
        pos + 2 + static_cast<std::size_t>(len) > e.size())
      throw config_error("malformed free product element");
    out.push_back({part, El(e.begin() + static_cast<long>(pos) + 2,
                            e.begin() + static_cast<long>(pos) + 2 + len)});
    pos += 2 + static_cast<std::size_t>(len);
  }
  return out;
}

El flatten_syllables(const std::vector<Syllable>& syl) {
  El out;
  for (auto& s : syl) {
    out.push_back(s.part);
    out.push_back(static_cast<int>(s.payload.size()));
    out.insert(out.end(), s.payload.begin(), s.payload.end());
  }
  return out;
}

// Merge a canonical syllable list with one more canonical syllable on the right.
void push_syllable(const GroupSpec& g, std::vector<Syllable>& acc, Syllable s) {
  const GroupSpec& part = g.parts[static_cast<std::size_t>(s.part)];
  if (part.is_identity(s.payload)) return;
  if (!acc.empty() && acc.back().part == s.part) {
    El merged = part.mul(acc.back().payload, s.payload);
    acc.pop_back();
    if (!part.is_identity(merged)) acc.push_back({s.part, merged});
    return;
  }
  acc.push_back(std::move(s));
}

El reduce_free_word(const El& w, int rank, bool strict) {
  El out;
  for (int letter : w) {
    if (letter == 0 || std::abs(letter) > rank) {
      if (strict) throw config_error("free group letter out of range");
      continue;
    }
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

}  // namespace

El GroupSpec::canon(const El& raw) const {
  switch (kind) {
    case Kind::free:
      return reduce_free_word(raw, rank, true);
    case Kind::free_abelian:
      if (raw.size() != static_cast<std::size_t>(rank))
        throw config_error("free abelian element has wrong length");
      return raw;
    case Kind::finite:
      if (raw.size() != 1 || raw[0] < 0 ||
          static_cast<std::size_t>(raw[0]) >= table.size())
        throw config_error("finite group element index out of range");
      return raw;
    case Kind::free_product: {
      std::vector<Syllable> acc;
      for (auto& s : parse_syllables(*this, raw)) {
        Syllable c{s.part, parts[static_cast<std::size_t>(s.part)].canon(s.payload)};
        push_syllable(*this, acc, std::move(c));
      }
      return flatten_syllables(acc);
    }
  }
  return raw;
}

El GroupSpec::mul(const El& a, const El& b) const {
  switch (kind) {
    case Kind::free: {
      El out = a;
      for (int letter : b) {
        if (!out.empty() && out.back() == -letter)
          out.pop_back();
        else
          out.push_back(letter);
      }
      return out;
    }
    case Kind::free_abelian: {
      El out = a;
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
      return out;
    }
    case Kind::finite:
      return {table[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])]};
    case Kind::free_product: {
      std::vector<Syllable> acc = parse_syllables(*this, a);
      for (auto& s : parse_syllables(*this, b)) push_syllable(*this, acc, s);
      return flatten_syllables(acc);
    }
  }
  return {};
}

El GroupSpec::inv(const El& a) const {
  switch (kind) {
    case Kind::free: {
      El out;
      out.reserve(a.size());
      for (std::size_t k = a.size(); k-- > 0;) out.push_back(-a[k]);
      return out;
    }
    case Kind::free_abelian: {
      El out = a;
      for (auto& v : out) v = -v;
      return out;
    }
    case Kind::finite: {
      int id = identity_index();
      for (std::size_t h = 0; h < table.size(); ++h)
        if (table[static_cast<std::size_t>(a[0])][h] == id)
          return {static_cast<int>(h)};
      throw config_error("finite group element lacks an inverse");
    }
    case Kind::free_product: {
      auto syl = parse_syllables(*this, a);
      std::vector<Syllable> rev;
      for (std::size_t k = syl.size(); k-- > 0;)
        rev.push_back({syl[k].part,
                       parts[static_cast<std::size_t>(syl[k].part)].inv(syl[k].payload)});
      return flatten_syllables(rev);
    }
  }
  return {};
}

std::string GroupSpec::describe() const {
  switch (kind) {
    case Kind::free:
      if (rank == 0) return "1";
      if (rank == 1) return "Z";
      return "F_" + std::to_string(rank);
    case Kind::free_abelian:
      if (rank == 0) return "1";
      if (rank == 1) return "Z";
      return "Z^" + std::to_string(rank);
    case Kind::finite:
      return "finite(" + std::to_string(table.size()) + ")";
    case Kind::free_product: {
      std::string out;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += " * ";
        out += parts[k].describe();
      }
      return out;
    }
  }
  return "?";
}

std::string el_key(const El& e) {
  std::string out;
  out.reserve(e.size() * 4);
  for (int v : e) {
    auto u = static_cast<std::uint32_t>(v);
    out.push_back(static_cast<char>(u & 0xff));
    out.push_back(static_cast<char>((u >> 8) & 0xff));
    out.push_back(static_cast<char>((u >> 16) & 0xff));
    out.push_back(static_cast<char>((u >> 24) & 0xff));
  }
  return out;
}

std::string SubgroupInfo::describe() const {
  switch (kind) {
    case Kind::free:
      if (rank == 0) return "1";
      if (rank == 1) return "Z";
      return "F_" + std::to_string(rank);
    case Kind::free_abelian:
      if (rank == 0) return "1";
      if (rank == 1) return "Z";
      return "Z^" + std::to_string(rank);
    case Kind::finite:
      return order == 1 ? "1" : "finite(" + std::to_string(order) + ")";
  }
  return "?";
}

int Subgroup::find(int v) const {
  while (uf_[static_cast<std::size_t>(v)] != v) v = uf_[static_cast<std::size_t>(v)];
  return v;
}

void Subgroup::build_free(const std::vector<El>& gens) {
  // Stallings core graph: one loop at the base vertex per generator, folded.
  graph_.clear();
  uf_.clear();
  auto new_vertex = [&]() {
    graph_.emplace_back();
    uf_.push_back(static_cast<int>(graph_.size()) - 1);
    return static_cast<int>(graph_.size()) - 1;
  };
  base_ = new_vertex();

  std::vector<std::array<int, 3>> pending;  // (from, label, to), label > 0
  auto merge = [&](int a, int b, auto&& self) -> void {
    a = find(a);
    b = find(b);
    if (a == b) return;
    uf_[static_cast<std::size_t>(b)] = a;
    auto out_b = std::move(graph_[static_cast<std::size_t>(b)].out);
    auto in_b = std::move(graph_[static_cast<std::size_t>(b)].in);
    graph_[static_cast<std::size_t>(b)].out.clear();
    graph_[static_cast<std::size_t>(b)].in.clear();
    for (auto& [g, w] : out_b) pending.push_back({a, g, find(w)});
    for (auto& [g, v] : in_b) pending.push_back({find(v), g, a});
    (void)self;
  };
  auto drain = [&]() {
    while (!pending.empty()) {
      auto [x, g, y] = pending.back();
      pending.pop_back();
      x = find(x);
      y = find(y);
      auto& ex = graph_[static_cast<std::size_t>(x)].out;
      auto it = ex.find(g);
      if (it != ex.end()) {
        int t = find(it->second);
        it->second = t;
        if (t != y) merge(t, y, merge);
        continue;
      }
      auto& ey = graph_[static_cast<std::size_t>(y)].in;
      auto it2 = ey.find(g);
      if (it2 != ey.end()) {
        int s = find(it2->second);
        it2->second = s;
        if (s != x) {
          merge(s, x, merge);
          pending.push_back({find(x), g, find(y)});
        }
        continue;
      }
      ex[g] = y;
      ey[g] = x;
    }
  };

  for (const El& w : gens) {
    if (w.empty()) continue;
    int cur = base_;
    for (std::size_t k = 0; k < w.size(); ++k) {
      int next = k + 1 == w.size() ? base_ : new_vertex();
      int letter = w[k];
      if (letter > 0)
        pending.push_back({cur, letter, next});
      else
        pending.push_back({next, -letter, cur});
      drain();
      cur = find(next);
    }
  }

  // rank = edges - vertices + 1 on the folded core
  std::set<int> live;
  for (std::size_t v = 0; v < graph_.size(); ++v)
    if (find(static_cast<int>(v)) == static_cast<int>(v)) live.insert(static_cast<int>(v));
  std::size_t edges = 0;
  for (int v : live) edges += graph_[static_cast<std::size_t>(v)].out.size();
  info_.kind = SubgroupInfo::Kind::free;
  info_.rank = static_cast<int>(edges + 1 - live.size());
}

bool Subgroup::contains(const El& e) const {
  switch (parent_.kind) {
    case GroupSpec::Kind::free: {
      int cur = find(base_);
      for (int letter : e) {
        const auto& edge = graph_[static_cast<std::size_t>(cur)];
        if (letter > 0) {
          auto it = edge.out.find(letter);
          if (it == edge.out.end()) return false;
          cur = find(it->second);
        } else {
          auto it = edge.in.find(-letter);
          if (it == edge.in.end()) return false;
          cur = find(it->second);
        }
      }
      return cur == find(base_);
    }
    case GroupSpec::Kind::free_abelian: {
      std::vector<long long> v(e.begin(), e.end());
      for (const auto& row : rows_) {
        std::size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        if (v[p] % row[p] != 0) continue;  // cannot clear this pivot
        long long f = v[p] / row[p];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f * row[k];
      }
      return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
    }
    case GroupSpec::Kind::finite:
      return member_[static_cast<std::size_t>(e[0])] != 0;
    case GroupSpec::Kind::free_product:
      throw config_error("subgroup membership in free products is unsupported");
  }
  return false;
}

void Subgroup::build_abelian(const std::vector<El>& gens) {
  // integer row echelon form by repeated gcd elimination, pivots positive
  std::size_t r = static_cast<std::size_t>(parent_.rank);
  std::vector<std::vector<long long>> work;
  for (auto& g : gens) work.emplace_back(g.begin(), g.end());
  auto leading = [r](const std::vector<long long>& row) {
    std::size_t p = 0;
    while (p < r && row[p] == 0) ++p;
    return p;
  };
  std::vector<std::vector<long long>> ech;
  for (std::size_t col = 0; col < r; ++col) {
    for (;;) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < work.size(); ++k)
        if (leading(work[k]) == col) idx.push_back(k);
      if (idx.empty()) break;
      std::size_t best = idx[0];
      for (auto k : idx)
        if (std::llabs(work[k][col]) < std::llabs(work[best][col])) best = k;
      bool settled = true;
      for (auto k : idx) {
        if (k == best) continue;
        long long q = work[k][col] / work[best][col];
        for (std::size_t t = col; t < r; ++t) work[k][t] -= q * work[best][t];
        if (work[k][col] != 0) settled = false;
      }
      if (settled) {
        auto row = work[best];
        if (row[col] < 0)
          for (auto& x : row) x = -x;
        ech.push_back(std::move(row));
        work[best].assign(r, 0);
        break;
      }
    }
  }
  rows_ = std::move(ech);
  info_.kind = SubgroupInfo::Kind::free_abelian;
  info_.rank = static_cast<int>(rows_.size());
}

void Subgroup::build_finite(const std::vector<El>& gens) {
  std::size_t m = parent_.finite_order();
  member_.assign(m, 0);
  std::vector<int> stack;
  int id = parent_.identity_index();
  member_[static_cast<std::size_t>(id)] = 1;
  stack.push_back(id);
  while (!stack.empty()) {
    int g = stack.back();
    stack.pop_back();
    for (auto& h : gens) {
      for (int prod :
           {parent_.table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h[0])],
            parent_.table[static_cast<std::size_t>(g)]
                         [static_cast<std::size_t>(parent_.inv(h)[0])]}) {
        if (!member_[static_cast<std::size_t>(prod)]) {
          member_[static_cast<std::size_t>(prod)] = 1;
          stack.push_back(prod);
        }
      }
    }
  }
  info_.kind = SubgroupInfo::Kind::finite;
  info_.order = static_cast<std::size_t>(
      std::count(member_.begin(), member_.end(), static_cast<char>(1)));
}

Subgroup Subgroup::generated(const GroupSpec& parent, const std::vector<El>& gens) {
  Subgroup s;
  s.parent_ = parent;
  std::vector<El> canon;
  canon.reserve(gens.size());
  for (auto& g : gens) canon.push_back(parent.canon(g));
  switch (parent.kind) {
    case GroupSpec::Kind::free:
      s.build_free(canon);
      break;
    case GroupSpec::Kind::free_abelian:
      s.build_abelian(canon);
      break;
    case GroupSpec::Kind::finite:
      s.build_finite(canon);
      break;
    case GroupSpec::Kind::free_product:
      throw config_error(
          "subgroups of free products are unsupported; the tilde construction "
          "reports this case explicitly");
  }
  return s;
}

}  // namespace qlat
