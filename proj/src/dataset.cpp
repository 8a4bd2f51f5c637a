#include "shaprob/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "shaprob/error.hpp"
#include "shaprob/random.hpp"

namespace shaprob {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

void check_unique_names(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error(ErrorKind::DuplicateFeatureName, "feature names must be non-empty");
    if (!seen.insert(n).second)
      throw Error(ErrorKind::DuplicateFeatureName, "feature name '" + n + "' appears twice");
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::vector<double>> columns, std::vector<Label> labels,
                 std::vector<std::string> feature_names)
    : columns_(std::move(columns)), labels_(std::move(labels)), names_(std::move(feature_names)) {
  if (labels_.empty()) throw Error(ErrorKind::EmptyDataset, "dataset has no rows");
  if (names_.size() != columns_.size())
    throw Error(ErrorKind::InvalidArgument, "feature name count does not match column count");
  check_unique_names(names_);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != labels_.size())
      throw Error(ErrorKind::InvalidArgument, "column '" + names_[j] + "' length differs from label count");
    for (std::size_t r = 0; r < labels_.size(); ++r)
      if (!std::isfinite(columns_[j][r]))
        throw Error(ErrorKind::NonNumericCell,
                    "non-finite value at row " + std::to_string(r) + ", column '" + names_[j] + "'");
  }
  for (std::size_t r = 0; r < labels_.size(); ++r)
    if (labels_[r] > 1) throw Error(ErrorKind::NonBinaryLabel, "label at row " + std::to_string(r) + " is not 0/1");
}

bool Dataset::has_both_classes() const {
  const auto p = positives();
  return p > 0 && p < rows();
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label{1}));
}

std::size_t Dataset::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorKind::IndexOutOfRange, "no feature named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    cols[j].reserve(rows.size());
    for (auto r : rows) cols[j].push_back(columns_[j].at(r));
  }
  std::vector<Label> labels;
  labels.reserve(rows.size());
  for (auto r : rows) labels.push_back(labels_.at(r));
  return Dataset(std::move(cols), std::move(labels), names_);
}

Dataset parse_csv(const std::string& text, const std::string& label_column) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  // Skip a UTF-8 byte order mark and blank lines before the header.
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw Error(ErrorKind::EmptyDataset, "file has no header row");

  const auto header = split_fields(line);
  auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw Error(ErrorKind::MissingColumn, "label column '" + label_column + "' not found");
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) names.push_back(header[c]);
  check_unique_names(names);

  std::vector<std::vector<double>> cols(names.size());
  std::vector<Label> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorKind::NonNumericCell, "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                                 " fields, header has " + std::to_string(header.size()));
    std::size_t feature = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v) || !std::isfinite(v)) {
        if (c == label_idx) throw Error(ErrorKind::NonBinaryLabel, "row " + std::to_string(row) + ": label '" + fields[c] + "'");
        throw Error(ErrorKind::NonNumericCell,
                    "row " + std::to_string(row) + ", col " + std::to_string(c) + ": '" + fields[c] + "'");
      }
      if (c == label_idx) {
        if (v != 0.0 && v != 1.0)
          throw Error(ErrorKind::NonBinaryLabel, "row " + std::to_string(row) + ": label '" + fields[c] + "'");
        labels.push_back(static_cast<Label>(v));
      } else {
        cols[feature++].push_back(v);
      }
    }
    ++row;
  }
  if (labels.empty()) throw Error(ErrorKind::EmptyDataset, "file has a header but no data rows");
  Dataset d(std::move(cols), std::move(labels), std::move(names));
  if (!d.has_both_classes()) throw Error(ErrorKind::SingleClassLabels, "labels must contain both classes");
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::EmptyDataset, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column);
}

void write_csv(const Dataset& d, const std::filesystem::path& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  for (const auto& n : d.feature_names()) out << n << ',';
  out << label_column << '\n';
  out << std::setprecision(17);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t j = 0; j < d.features(); ++j) out << d.at(r, j) << ',';
    out << static_cast<int>(d.labels()[r]) << '\n';
  }
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s) {
  if (!(s.train_fraction > 0.0 && s.train_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "train_fraction must lie in (0,1)");
  const std::size_t n = d.rows();
  const auto n_train = static_cast<std::size_t>(std::floor(s.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw Error(ErrorKind::DegenerateSplit, "train fraction leaves a partition empty");

  auto order = shuffled_indices(n, s.seed);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  auto both_classes = [&](const std::vector<std::size_t>& rows) {
    bool has0 = false, has1 = false;
    for (auto r : rows) (d.labels()[r] ? has1 : has0) = true;
    return has0 && has1;
  };
  if (!both_classes(train) || !both_classes(test))
    throw Error(ErrorKind::DegenerateSplit, "seed " + std::to_string(s.seed) + " leaves a partition with one class");
  return {d.select_rows(train), d.select_rows(test)};
}

Dataset project(const Dataset& d, Coalition c) {
  if (!c.fits(d.features()))
    throw Error(ErrorKind::IndexOutOfRange, "coalition references a feature beyond " + std::to_string(d.features()));
  std::vector<std::vector<double>> cols;
  std::vector<std::string> names;
  for (auto j : c.members()) {
    auto col = d.column(j);
    cols.emplace_back(col.begin(), col.end());
    names.push_back(d.feature_names()[j]);
  }
  return Dataset(std::move(cols), std::vector<Label>(d.labels().begin(), d.labels().end()), std::move(names));
}

Dataset subsample_imbalance(const Dataset& d, const ImbalanceSpec& spec) {
  const double p = spec.positive_fraction;
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "positive_fraction must lie in (0,1)");

  std::vector<std::size_t> pos, neg;
  for (std::size_t r = 0; r < d.rows(); ++r) (d.labels()[r] ? pos : neg).push_back(r);
  const double current = static_cast<double>(pos.size()) / static_cast<double>(d.rows());

  std::size_t keep_pos = pos.size(), keep_neg = neg.size();
  if (p <= current) {
    keep_pos = static_cast<std::size_t>(std::llround(p * static_cast<double>(neg.size()) / (1.0 - p)));
  } else {
    keep_neg = static_cast<std::size_t>(std::llround((1.0 - p) * static_cast<double>(pos.size()) / p));
  }
  if (keep_pos < 1 || keep_neg < 1 || keep_pos > pos.size() || keep_neg > neg.size())
    throw Error(ErrorKind::InfeasibleProportion, "cannot reach positive fraction " + std::to_string(p) +
                                                     " from " + std::to_string(pos.size()) + " positives and " +
                                                     std::to_string(neg.size()) + " negatives");

  auto pick = [&](const std::vector<std::size_t>& rows, std::size_t keep) {
    auto order = shuffled_indices(rows.size(), spec.seed);
    std::vector<std::size_t> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) out.push_back(rows[order[k]]);
    return out;
  };
  std::vector<std::size_t> rows = keep_pos == pos.size() ? pos : pick(pos, keep_pos);
  auto negs = keep_neg == neg.size() ? neg : pick(neg, keep_neg);
  rows.insert(rows.end(), negs.begin(), negs.end());
  std::sort(rows.begin(), rows.end());
  return d.select_rows(rows);
}

Dataset duplicate_feature(const Dataset& d, std::size_t index, const std::string& new_name) {
  if (index >= d.features()) throw Error(ErrorKind::IndexOutOfRange, "feature index " + std::to_string(index));
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < d.features(); ++j) cols.emplace_back(d.column(j).begin(), d.column(j).end());
  cols.push_back(cols[index]);
  auto names = d.feature_names();
  names.push_back(new_name);
  return Dataset(std::move(cols), std::vector<Label>(d.labels().begin(), d.labels().end()), std::move(names));
}

Dataset drop_features(const Dataset& d, const std::vector<std::string>& names) {
  Coalition keep = Coalition::grand(d.features());
  for (const auto& n : names) keep = keep.without(d.index_of(n));
  return project(d, keep);
}

}  // namespace shaprob
