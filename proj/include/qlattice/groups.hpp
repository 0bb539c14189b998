#pragma once

// Discrete groups underlying dual-group backends: free groups, free abelian
// groups, finite groups given by multiplication tables, and free products.
// Elements are stored in canonical normal form as flat integer vectors:
//   free(r)         reduced letter sequence, letters in {+-1..+-r}
//   free_abelian(r) exponent vector of length r
//   finite          single index {g}
//   free_product    flattened syllables [part, len, payload...], adjacent
//                   syllables in distinct parts, no identity syllables
// Finitely generated subgroups support membership testing (Stallings folding
// for free groups, Hermite-style reduction for free abelian ones, orbit
// closure for finite ones).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qlat {

struct GroupSpec {
  enum class Kind { free, free_abelian, finite, free_product };
  using El = std::vector<int>;

  Kind kind = Kind::free;
  int rank = 0;                          // free / free_abelian
  std::vector<std::vector<int>> table;   // finite: table[g][h] = g*h
  std::vector<GroupSpec> parts;          // free_product

  static GroupSpec free_group(int rank);
  static GroupSpec free_abelian(int rank);
  static GroupSpec finite(std::vector<std::vector<int>> table);
  static GroupSpec free_product(std::vector<GroupSpec> parts);

  // Checks structural well-formedness; for finite tables verifies the group
  // law (associativity, identity, inverses).  Throws config_error.
  void validate() const;

  El identity() const;
  bool is_identity(const El& e) const { return e == identity(); }
  // Canonicalizes raw element data (reduces free words, merges syllables);
  // throws config_error on malformed input.
  El canon(const El& raw) const;
  El mul(const El& a, const El& b) const;
  El inv(const El& a) const;

  int identity_index() const;        // finite only
  std::size_t finite_order() const { return table.size(); }
  std::string describe() const;      // "Z", "Z^2", "F_2", "finite(6)", "Z * F_2"
};

// Hashable key for DP state maps.
std::string el_key(const GroupSpec::El& e);

struct SubgroupInfo {
  enum class Kind { free, free_abelian, finite } kind = Kind::free;
  int rank = 0;
  std::size_t order = 0;
  std::string describe() const;
};

// Finitely generated subgroup of a parent group with membership testing.
// Free-product parents are not supported (tilde_group reports this case as
// unsupported, matching the representation-theoretic construction).
class Subgroup {
 public:
  static Subgroup generated(const GroupSpec& parent, const std::vector<GroupSpec::El>& gens);
  bool contains(const GroupSpec::El& e) const;
  const SubgroupInfo& info() const { return info_; }

 private:
  GroupSpec parent_;
  SubgroupInfo info_;
  // free parent: folded Stallings graph
  struct Edge { std::map<int, int> out, in; };
  std::vector<Edge> graph_;
  std::vector<int> uf_;
  int base_ = 0;
  int find(int v) const;
  // free_abelian parent: echelonized integer basis rows
  std::vector<std::vector<long long>> rows_;
  // finite parent: membership set
  std::vector<char> member_;

  void build_free(const std::vector<GroupSpec::El>& gens);
  void build_abelian(const std::vector<GroupSpec::El>& gens);
  void build_finite(const std::vector<GroupSpec::El>& gens);
};

}  // namespace qlat
