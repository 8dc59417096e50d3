#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "cgc/errors.hpp"

namespace cgc {

// A word over k marked generators and their inverses. Letter +j (1-based)
// stands for s_j, letter -j for s_j^{-1}.
using Word = std::vector<int>;

// Parses "a1 A2 a1" or the compact form "a1A2a1"; aj is a generator,
// Aj its inverse. Whitespace is ignored.
inline Word parse_word(const std::string& text, int k) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c != 'a' && c != 'A')
      throw AlphabetMismatch("unexpected character '" + std::string(1, c) +
                             "' in word \"" + text + "\"");
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i)
      throw AlphabetMismatch("letter without generator index in \"" + text + "\"");
    int j = std::stoi(text.substr(start, i - start));
    if (j < 1 || j > k)
      throw AlphabetMismatch("generator index " + std::to_string(j) +
                             " out of range 1.." + std::to_string(k));
    w.push_back(c == 'a' ? j : -j);
  }
  return w;
}

inline std::string format_word(const Word& w) {
  std::string s;
  for (int letter : w) {
    s += letter > 0 ? 'a' : 'A';
    s += std::to_string(letter > 0 ? letter : -letter);
  }
  return s;
}

}  // namespace cgc
