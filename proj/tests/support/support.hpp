#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shaprob/dataset.hpp"

namespace testing_support {

/// Gaussian classes; feature j shifts the positive mean by effects[j].
inline shaprob::Dataset synthetic(std::size_t rows, const std::vector<double>& effects, std::uint64_t seed,
                                  double positive_share = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution coin(positive_share);
  std::vector<shaprob::Label> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) labels[r] = coin(rng) ? 1 : 0;
  labels[0] = 0;
  labels[1] = 1;
  std::vector<std::vector<double>> cols(effects.size(), std::vector<double>(rows));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < effects.size(); ++j) {
    names.push_back("f" + std::to_string(j));
    for (std::size_t r = 0; r < rows; ++r) cols[j][r] = noise(rng) + (labels[r] ? effects[j] : 0.0);
  }
  return {std::move(cols), std::move(labels), std::move(names)};
}

/// (concordant + ties/2) / (pos * neg) by direct pair enumeration.
inline double rank_statistic(const std::vector<double>& scores, const std::vector<shaprob::Label>& labels) {
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) good += 1.0;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / pairs;
}

/// Shapley values as the average marginal contribution over all n! orders.
inline std::vector<double> permutation_oracle(const std::vector<double>& payoffs, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> phi(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    for (auto p : order) {
      const double before = payoffs[mask];
      mask |= std::uint64_t{1} << p;
      phi[p] += payoffs[mask] - before;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& v : phi) v /= count;
  return phi;
}

/// Random game with v(empty) = 0.
inline std::vector<double> random_game(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t m = 1; m < v.size(); ++m) v[m] = u(rng);
  return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("shaprob_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Minimal XML well-formedness check: balanced tags, quoted attributes,
/// known entities only.
inline bool well_formed_xml(const std::string& doc, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while (i < doc.size()) {
    if (doc[i] == '&') {
      const auto semi = doc.find(';', i);
      if (semi == std::string::npos) return fail("unterminated entity");
      const auto ent = doc.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
        return fail("unknown entity " + ent);
      i = semi + 1;
      continue;
    }
    if (doc[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(doc[i]))) return fail("text outside root");
      ++i;
      continue;
    }
    if (doc.compare(i, 5, "<?xml") == 0) {
      const auto end = doc.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    const auto end = doc.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (!tag.empty() && tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched close " + name);
      stack.pop_back();
      continue;
    }
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.pop_back();
    std::size_t quotes = 0;
    for (char c : tag)
      if (c == '"') ++quotes;
    if (quotes % 2 != 0) return fail("unbalanced quotes in <" + tag + ">");
    const auto name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return fail("empty tag name");
    if (stack.empty()) {
      if (root_seen) return fail("second root element");
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return root_seen ? true : fail("no root element");
}

}  // namespace testing_support
