#include "qlattice/moments.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

#include "qlattice/runtime.hpp"

namespace qlat {

count_t MomentTable::at(const Word& w) const {
  auto it = entries.find(w);
  if (it == entries.end())
    throw config_error("moment table is missing entry for word '" + w.text() + "'");
  return it->second;
}

count_t CumulantTable::at(const Word& w) const {
  auto it = kappa.find(w);
  if (it == kappa.end())
    throw config_error("cumulant table is missing entry for word '" + w.text() + "'");
  return it->second;
}

MomentTable moments_from_backend(const Backend& b, int max_len) {
  if (max_len < 0) throw config_error("max_len must be nonnegative");
  MomentTable table;
  table.max_len = max_len;
  std::vector<Word> words = words_up_to(max_len);
  std::vector<count_t> values(words.size());
  parallel_for(words.size(),
               [&](std::size_t k) { values[k] = moment(b, words[k]); });
  for (std::size_t k = 0; k < words.size(); ++k) table.entries[words[k]] = values[k];
  return table;
}

const std::vector<NCPartition>& nc_partitions(int k) {
  if (k < 0 || k > 14)
    throw config_error("nc_partitions supports 0 <= k <= 14");
  static std::vector<std::vector<NCPartition>> cache(15);
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[static_cast<std::size_t>(k)];
  if (!slot.empty() || k == 0) {
    if (k == 0 && slot.empty()) slot.push_back(NCPartition{});
    return slot;
  }
  // scan positions keeping a stack of blocks that may still grow; joining a
  // block below the top permanently closes everything above it
  std::vector<std::vector<int>> stack, closed;
  std::vector<NCPartition> out;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      NCPartition p;
      p.blocks = closed;
      p.blocks.insert(p.blocks.end(), stack.begin(), stack.end());
      std::sort(p.blocks.begin(), p.blocks.end());
      out.push_back(std::move(p));
      return;
    }
    // new singleton block on top
    stack.push_back({pos});
    rec(pos + 1);
    stack.pop_back();
    // join an open block at depth t, closing the t blocks above it
    for (std::size_t t = 1; t <= stack.size(); ++t) {
      std::vector<std::vector<int>> moved(stack.end() - static_cast<long>(t) + 1,
                                          stack.end());
      stack.resize(stack.size() - t + 1);
      closed.insert(closed.end(), moved.begin(), moved.end());
      stack.back().push_back(pos);
      rec(pos + 1);
      stack.back().pop_back();
      closed.resize(closed.size() - moved.size());
      stack.insert(stack.end(), moved.begin(), moved.end());
    }
  };
  rec(0);
  slot = std::move(out);
  return slot;
}

namespace {

count_t catalan(int m) {
  count_t c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace

count_t haar_cumulant(const Word& pattern) {
  std::size_t len = pattern.size();
  if (len == 0 || len % 2 != 0) return 0;
  for (std::size_t t = 1; t < len; ++t)
    if (pattern.at(t) == pattern.at(t - 1)) return 0;
  int m = static_cast<int>(len) / 2;
  count_t value = catalan(m - 1);
  return m % 2 == 0 ? -value : value;
}

void validate_haar_cumulants(int max_k) {
  for (int k = 0; k <= max_k; ++k) {
    for (const Word& p : all_words(k)) {
      count_t recon = 0;
      for (const NCPartition& part : nc_partitions(k)) {
        count_t prod = 1;
        for (const auto& block : part.blocks) {
          std::string sub;
          for (int pos : block) sub.push_back(static_cast<char>(p.at(static_cast<std::size_t>(pos))));
          prod *= haar_cumulant(Word(sub));
          if (prod == 0) break;
        }
        recon += prod;
      }
      int balance = 0;
      for (std::size_t t = 0; t < p.size(); ++t)
        balance += p.at(t) == Letter::alpha ? 1 : -1;
      // tau(z^{e_1} ... z^{e_k}) = 1 iff the exponents cancel; z commutes
      // with itself so the product is z^balance
      count_t expected = balance == 0 ? 1 : 0;
      if (recon != expected)
        throw compute_error("haar cumulant self-check failed on pattern '" + p.text() +
                            "'");
    }
  }
}

CumulantTable moment_to_cumulant(const MomentTable& m) {
  CumulantTable out;
  out.max_len = m.max_len;
  for (int len = 0; len <= m.max_len; ++len) {
    for (const Word& w : all_words(len)) {
      count_t total = m.at(w);
      for (const NCPartition& part : nc_partitions(len)) {
        if (part.blocks.size() <= 1) continue;  // skip the full block
        count_t prod = 1;
        for (const auto& block : part.blocks) {
          std::string sub;
          for (int pos : block) sub.push_back(static_cast<char>(w.at(static_cast<std::size_t>(pos))));
          prod *= out.at(Word(sub));
          if (prod == 0) break;
        }
        total -= prod;
      }
      out.kappa[w] = total;
    }
  }
  return out;
}

namespace {

struct Slot {
  bool is_z;      // alphabet
  bool starred;
};

std::vector<Slot> expand_tilde_word(const Word& w) {
  std::vector<Slot> slots;
  slots.reserve(2 * w.size());
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (w.at(t) == Letter::alpha) {
      slots.push_back({true, false});   // z
      slots.push_back({false, false});  // x
    } else {
      slots.push_back({false, true});  // x*
      slots.push_back({true, true});   // z*
    }
  }
  return slots;
}

}  // namespace

MomentTable tilde_moments(const MomentTable& m) {
  static std::once_flag validated;
  std::call_once(validated, [] { validate_haar_cumulants(8); });

  if (m.max_len > 7)
    throw config_error("tilde_moments supports source tables up to length 7");
  CumulantTable kx = moment_to_cumulant(m);

  MomentTable out;
  out.max_len = m.max_len;
  for (int len = 0; len <= m.max_len; ++len) {
    const auto& parts = nc_partitions(2 * len);
    for (const Word& w : all_words(len)) {
      std::vector<Slot> slots = expand_tilde_word(w);
      count_t total = 0;
      for (const NCPartition& part : parts) {
        count_t prod = 1;
        for (const auto& block : part.blocks) {
          bool is_z = slots[static_cast<std::size_t>(block[0])].is_z;
          std::string sub;
          bool pure = true;
          for (int pos : block) {
            const Slot& s = slots[static_cast<std::size_t>(pos)];
            if (s.is_z != is_z) {
              pure = false;
              break;
            }
            sub.push_back(s.starred ? 'b' : 'a');
          }
          if (!pure) {
            prod = 0;
            break;
          }
          Word pattern(sub);
          prod *= is_z ? haar_cumulant(pattern) : kx.at(pattern);
          if (prod == 0) break;
        }
        total += prod;
      }
      out.entries[w] = total;
    }
  }
  return out;
}

MomentTable word_oracle_tilde(const Backend& b, int max_len) {
  Backend companion = tilde_companion_backend(b);
  return moments_from_backend(companion, max_len);
}

}  // namespace qlat
