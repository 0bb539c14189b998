#include "doctest.h"

#include <algorithm>
#include <stdexcept>

#include "qlattice/words.hpp"

using namespace qlat;

TEST_CASE("words: construction accepts only the two-letter alphabet") {
  CHECK(Word("").empty());
  CHECK(Word("ab").size() == 2);
  CHECK(Word("ab").at(0) == Letter::alpha);
  CHECK(Word("ab").at(1) == Letter::beta);
  CHECK_THROWS_AS(Word("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Word("A"), std::invalid_argument);
}

TEST_CASE("words: concatenation and subword") {
  Word w = Word("ab") + Word("ba");
  CHECK(w == Word("abba"));
  CHECK(w.subword(1, 2) == Word("bb"));
  CHECK(w.subword(0, 0) == Word(""));
}

TEST_CASE("words: hat reverses and conjugates") {
  CHECK(hat(Word("")) == Word(""));
  CHECK(hat(Word("a")) == Word("b"));
  CHECK(hat(Word("aab")) == Word("abb"));
  CHECK(hat(Word("ab")) == Word("ab"));      // even alternating words are self-dual
  CHECK(hat(Word("aba")) == Word("bab"));
  for (const Word& w : words_up_to(5)) CHECK(hat(hat(w)) == w);
}

TEST_CASE("words: alternation predicate") {
  CHECK(is_alternating(Word("")));
  CHECK(is_alternating(Word("a")));
  CHECK(is_alternating(Word("abab")));
  CHECK(is_alternating(Word("baba")));
  CHECK(!is_alternating(Word("aab")));
  CHECK(!is_alternating(Word("abba")));
}

TEST_CASE("words: interval letters follow index parity") {
  // one letter per index k in (i, j], alpha for odd k, beta for even k
  CHECK(interval(0, 0) == Word(""));
  CHECK(interval(0, 1) == Word("a"));
  CHECK(interval(0, 4) == Word("abab"));
  CHECK(interval(1, 4) == Word("bab"));
  CHECK(interval(1, 3) == Word("ba"));
  CHECK(interval(2, 5) == Word("aba"));
  CHECK(interval(3, 3) == Word(""));
  CHECK_THROWS_AS(interval(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(interval(-1, 2), std::invalid_argument);
  // every interval word is alternating by construction
  for (int i = 0; i <= 5; ++i)
    for (int j = i; j <= 5; ++j) CHECK(is_alternating(interval(i, j)));
}

TEST_CASE("words: enumeration order is deterministic") {
  std::vector<Word> two = all_words(2);
  REQUIRE(two.size() == 4);
  CHECK(two[0] == Word("aa"));
  CHECK(two[1] == Word("ab"));
  CHECK(two[2] == Word("ba"));
  CHECK(two[3] == Word("bb"));

  std::vector<Word> upto = words_up_to(3);
  CHECK(upto.size() == 15);  // 1 + 2 + 4 + 8
  CHECK(std::is_sorted(upto.begin(), upto.end()));
  CHECK(upto.front() == Word(""));
  CHECK(upto.back() == Word("bbb"));
}

TEST_CASE("words: order is length-then-lexicographic") {
  CHECK(Word("b") < Word("aa"));
  CHECK(Word("ab") < Word("ba"));
  CHECK(!(Word("ba") < Word("ab")));
  CHECK(!(Word("a") < Word("a")));
}
