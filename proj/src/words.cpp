#include "qlattice/words.hpp"

#include <stdexcept>

namespace qlat {

Word::Word(const std::string& text) : text_(text) {
  for (char c : text_) {
    if (c != 'a' && c != 'b')
      throw std::invalid_argument("word text must contain only 'a' and 'b', got '" +
                                  std::string(1, c) + "'");
  }
}

Letter Word::at(std::size_t pos) const {
  if (pos >= text_.size()) throw std::out_of_range("word position out of range");
  return static_cast<Letter>(text_[pos]);
}

Word Word::operator+(const Word& rhs) const {
  Word out;
  out.text_ = text_ + rhs.text_;
  return out;
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  if (pos > text_.size() || pos + len > text_.size())
    throw std::out_of_range("subword range out of bounds");
  Word out;
  out.text_ = text_.substr(pos, len);
  return out;
}

bool Word::operator<(const Word& rhs) const {
  if (text_.size() != rhs.text_.size()) return text_.size() < rhs.text_.size();
  return text_ < rhs.text_;
}

Word hat(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (std::size_t k = w.size(); k-- > 0;)
    out.push_back(static_cast<char>(conjugate(w.at(k))));
  return Word(out);
}

bool is_alternating(const Word& w) {
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w.at(k) == w.at(k - 1)) return false;
  return true;
}

Word interval(int i, int j) {
  if (i < 0 || j < i) throw std::invalid_argument("interval requires 0 <= i <= j");
  std::string out;
  out.reserve(static_cast<std::size_t>(j - i));
  for (int k = i + 1; k <= j; ++k) out.push_back(k % 2 == 1 ? 'a' : 'b');
  return Word(out);
}

std::vector<Word> all_words(int len) {
  std::vector<Word> out;
  if (len < 0) return out;
  out.reserve(std::size_t(1) << len);
  std::string buf(static_cast<std::size_t>(len), 'a');
  for (std::size_t mask = 0; mask < (std::size_t(1) << len); ++mask) {
    for (int t = 0; t < len; ++t)
      buf[static_cast<std::size_t>(t)] = (mask >> (len - 1 - t)) & 1 ? 'b' : 'a';
    out.emplace_back(buf);
  }
  return out;
}

std::vector<Word> words_up_to(int max_len) {
  std::vector<Word> out;
  for (int len = 0; len <= max_len; ++len)
    for (auto& w : all_words(len)) out.push_back(w);
  return out;
}

}  // namespace qlat
