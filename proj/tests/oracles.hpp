#pragma once

// Test-only reference computations. None of these go through the library's
// own code paths for the quantity they check.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kcsim::oracle {

inline std::string data_path(const std::string& rel) {
  return std::string(KCSIM_DATA_DIR) + "/" + rel;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// "0100 1101 ..." text for the given nibble values.
inline std::string nibble_text(const std::vector<int>& nibbles) {
  std::string out;
  for (const int n : nibbles) {
    for (int b = 3; b >= 0; --b) out.push_back(((n >> b) & 1) ? '1' : '0');
    out.push_back(' ');
  }
  return out;
}

// Compressed length by counting: one bit per nibble plus four bits per
// distinct nibble.
inline std::size_t counted_length(const std::vector<int>& nibbles) {
  const std::set<int> distinct(nibbles.begin(), nibbles.end());
  return nibbles.size() + 4 * distinct.size();
}

// Documents as plain token lists.
using Docs = std::vector<std::vector<std::string>>;

inline bool contains(const std::vector<std::string>& doc, const std::string& t) {
  for (const auto& tok : doc) {
    if (tok == t) return true;
  }
  return false;
}

inline std::uint64_t doc_count(const Docs& docs, const std::string& x) {
  std::uint64_t n = 0;
  for (const auto& d : docs) n += contains(d, x) ? 1 : 0;
  return n;
}

inline std::uint64_t pair_count(const Docs& docs, const std::string& x,
                                const std::string& y) {
  std::uint64_t n = 0;
  for (const auto& d : docs) n += contains(d, x) && contains(d, y) ? 1 : 0;
  return n;
}

// Psi by the O(v^2) double loop over distinct vocabulary pairs.
inline std::uint64_t psi_brute_force(const Docs& docs) {
  std::set<std::string> vocab;
  for (const auto& d : docs) vocab.insert(d.begin(), d.end());
  const std::vector<std::string> v(vocab.begin(), vocab.end());
  std::uint64_t psi = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) psi += pair_count(docs, v[i], v[j]);
  }
  return psi;
}

inline Docs toy_docs() {
  return {{"k1", "k2", "k1", "k3", "k1", "k4", "k5", "k6", "k5", "k5"},
          {"k1", "k1", "k1", "k1", "k1", "k7", "k1", "k8"},
          {"k5", "k6", "k5", "k5", "k1", "k1", "k1", "k7"}};
}

// Hit-count formulas evaluated in long double with base-10 logs.
inline long double ngd_ld(long double fx, long double fy, long double fxy, long double n) {
  const long double lx = std::log10(fx), ly = std::log10(fy);
  return (std::max(lx, ly) - std::log10(fxy)) / (std::log10(n) - std::min(lx, ly));
}

inline long double metric_m_ld(long double fx, long double fy, long double fxy) {
  return std::log10(2.0L * fxy) / std::log10(fx + fy);
}

}  // namespace kcsim::oracle
