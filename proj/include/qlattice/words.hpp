#pragma once

// Words over the two-letter alphabet {alpha, beta} used to label tensor
// products of the fundamental corepresentation H and its conjugate Hbar.
// Text encoding: 'a' for alpha, 'b' for beta, "" for the empty word.

#include <cstddef>
#include <string>
#include <vector>

namespace qlat {

enum class Letter : char { alpha = 'a', beta = 'b' };

inline Letter conjugate(Letter l) {
  return l == Letter::alpha ? Letter::beta : Letter::alpha;
}

// Word in the free monoid on {alpha, beta}.  Immutable value type.
class Word {
 public:
  Word() = default;
  // Parses the text encoding; throws std::invalid_argument on any character
  // outside {'a','b'}.
  explicit Word(const std::string& text);
  explicit Word(const char* text) : Word(std::string(text)) {}

  static Word letter(Letter l) { return Word(std::string(1, static_cast<char>(l))); }

  std::size_t size() const { return text_.size(); }
  bool empty() const { return text_.empty(); }
  Letter at(std::size_t pos) const;
  const std::string& text() const { return text_; }

  Word operator+(const Word& rhs) const;     // concatenation
  Word subword(std::size_t pos, std::size_t len) const;

  bool operator==(const Word& rhs) const { return text_ == rhs.text_; }
  bool operator!=(const Word& rhs) const { return text_ != rhs.text_; }
  // Length-then-lexicographic order; gives deterministic map iteration with
  // short words first.
  bool operator<(const Word& rhs) const;

 private:
  std::string text_;
};

// Reverses the word and conjugates every letter (the contragredient label).
Word hat(const Word& w);

// True when no two adjacent letters coincide (includes the empty word).
bool is_alternating(const Word& w);

// Word of the index interval [i, j]: one letter per index k in (i, j], alpha
// for odd k and beta for even k.  Closed form by parity of the endpoints:
//   i,j even -> (ab)^{(j-i)/2}        i,j odd  -> (ba)^{(j-i)/2}
//   i even, j odd -> (ab)^{...}a      i odd, j even -> b(ab)^{...}
// Requires 0 <= i <= j; throws std::invalid_argument otherwise.
Word interval(int i, int j);

// All words of length exactly len, in lexicographic order.
std::vector<Word> all_words(int len);
// All words of length <= max_len, shortest first.
std::vector<Word> words_up_to(int max_len);

}  // namespace qlat
