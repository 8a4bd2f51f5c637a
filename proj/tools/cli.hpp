#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace shaprob::cli {

/// Everything needed to reproduce one run; written as manifest.json next to
/// the outputs.
struct RunManifest {
  std::string command;
  std::string input;
  std::string label = "class";
  std::string target = "auc";
  std::string strategy = "interpolation";
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  std::size_t grid = 101;
  std::optional<double> fpr;
  std::optional<double> recall;
  std::optional<double> imbalance;
  std::optional<std::size_t> sampled;
  std::size_t max_exact = 20;
  unsigned threads = 0;
  std::size_t iterations = 100;
  std::vector<std::string> drop;
  std::string feature;
  std::string name;
  std::string out = "out";

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

/// Runs the pipeline a manifest describes, writing artifacts into m.out.
/// Library errors propagate.
void execute(const RunManifest& m, std::ostream& out);

/// Parses argv-style arguments (without the program name), runs, and returns
/// the process exit status: 0 ok, 2 argument, 3 data, 4 computation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shaprob::cli
