#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/marked_group.hpp"
#include "cgc/word.hpp"

namespace cgc {

using Json = nlohmann::ordered_json;

// Builds a group from a catalog entry:
//   {"kind": "cyclic", "m": 6}
//   {"kind": "sl2", "p": 5}
//   {"kind": "permutation", "perms": [[1,0,2],[0,2,1]], "label": "S3"}
//   {"kind": "product", "factors": [entry, entry]}
//   {"kind": "quotient", "base": entry, "normal_words": ["a1a1"]}
//   {"kind": "diagonal", "factors": [entry, ...]}
// Permutations use one-line image notation over {0..d-1}; normal generators
// of quotients are words in the base group's generators.
inline GroupPtr build_catalog_group(const Json& entry, int cap = kDefaultOrderCap) {
  if (!entry.is_object() || !entry.contains("kind"))
    throw IoError("catalog entry has no \"kind\"");
  const std::string kind = entry.at("kind");
  if (kind == "cyclic") return build_cyclic(entry.at("m").get<int>());
  if (kind == "sl2") return build_sl2(entry.at("p").get<int>(), cap);
  if (kind == "permutation") {
    auto perms = entry.at("perms").get<std::vector<std::vector<int>>>();
    std::string label = entry.value("label", std::string("perm"));
    return build_from_permutations(perms, label, cap);
  }
  if (kind == "product") {
    const Json& factors = entry.at("factors");
    if (factors.size() < 2) throw IoError("product needs at least two factors");
    GroupPtr g = build_catalog_group(factors[0], cap);
    for (std::size_t i = 1; i < factors.size(); ++i)
      g = build_product(g, build_catalog_group(factors[i], cap), cap);
    return g;
  }
  if (kind == "quotient") {
    GroupPtr base = build_catalog_group(entry.at("base"), cap);
    std::vector<int> normal_gens;
    if (entry.contains("normal_words"))
      for (const auto& w : entry.at("normal_words"))
        normal_gens.push_back(
            base->evaluate(parse_word(w.get<std::string>(), base->k())));
    if (entry.contains("normal_elements"))
      for (int g : entry.at("normal_elements").get<std::vector<int>>())
        normal_gens.push_back(g);
    return build_quotient(base, normal_gens).first;
  }
  if (kind == "diagonal") {
    std::vector<GroupPtr> factors;
    for (const auto& f : entry.at("factors"))
      factors.push_back(build_catalog_group(f, cap));
    return build_diagonal_product(factors, cap).first;
  }
  throw IoError("unknown catalog kind \"" + kind + "\"");
}

// A catalog file is a single entry, an array of entries, or an object with a
// "groups" array.
inline std::vector<GroupPtr> load_catalog(const std::string& path,
                                          int cap = kDefaultOrderCap) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw IoError("catalog parse error in " + path + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("groups")) doc = doc.at("groups");
  std::vector<GroupPtr> groups;
  if (doc.is_array())
    for (const auto& entry : doc) groups.push_back(build_catalog_group(entry, cap));
  else
    groups.push_back(build_catalog_group(doc, cap));
  return groups;
}

// Relator file: one word per line in letters a1..ak / A1..Ak; blank lines
// and lines starting with '#' are skipped.
inline std::vector<Word> load_relators(const std::string& path, int k) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open relator file " + path);
  std::vector<Word> words;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    words.push_back(parse_word(line, k));
  }
  return words;
}

}  // namespace cgc
