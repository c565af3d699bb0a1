// Copyright 2026 The rtc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rtc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rtc/random.hpp"

namespace rtc {

// ---------------------------------------------------------------------------
// LabeledDataset

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(covariates.rows()) != labels.size()) {
    throw ShapeError("dataset: covariate rows and labels disagree");
  }
  if (has_draws() && draws.size() != labels.size()) throw ShapeError("dataset: draws and labels disagree");
  if (!feature_names.empty() && feature_names.size() != dims()) {
    throw ShapeError("dataset: feature names and covariate columns disagree");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw SchemaError("dataset: labels must be 0 or 1");
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.covariates.resize(static_cast<Eigen::Index>(indices.size()), covariates.cols());
  out.labels.reserve(indices.size());
  if (has_draws()) out.draws.reserve(indices.size());
  out.feature_names = feature_names;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto row = indices[i];
    out.covariates.row(static_cast<Eigen::Index>(i)) = covariates.row(static_cast<Eigen::Index>(row));
    out.labels.push_back(labels[row]);
    if (has_draws()) out.draws.push_back(draws[row]);
  }
  return out;
}

std::vector<ScoredSample> LabeledDataset::scored(std::span<const double> scores) const {
  if (scores.size() != rows()) throw ShapeError("dataset: score count does not match rows");
  std::vector<ScoredSample> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = {scores[i], labels[i], has_draws() ? draws[i] : 0.0};
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_field(const std::string& text, std::size_t line, const std::string& column) {
  if (text.empty()) throw ParseError("missing value in column '" + column + "'", line);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("non-numeric value '" + text + "' in column '" + column + "'", line);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

LabeledDataset read_csv(std::istream& in, const std::string& label_column,
                        const std::optional<std::string>& draw_column) {
  std::string line;
  std::size_t line_no = 0;
  do {
    if (!std::getline(in, line)) throw ParseError("missing header row", line_no + 1);
    ++line_no;
  } while (!line.empty() && line.front() == '#');
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_fields(line);
  for (auto& h : header) h = trim(h);

  const auto find_column = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : std::distance(header.begin(), it);
  };
  const auto label_index = find_column(label_column);
  if (label_index < 0) throw SchemaError("label column '" + label_column + "' not found in header");
  std::ptrdiff_t draw_index = -1;
  if (draw_column) {
    draw_index = find_column(*draw_column);
    if (draw_index < 0) throw SchemaError("draw column '" + *draw_column + "' not found in header");
  }

  LabeledDataset ds;
  std::vector<std::ptrdiff_t> feature_columns;
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(header.size()); ++j) {
    if (j != label_index && j != draw_index) {
      feature_columns.push_back(j);
      ds.feature_names.push_back(header[static_cast<std::size_t>(j)]);
    }
  }

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (auto& f : fields) f = trim(f);
    const double label = parse_field(fields[static_cast<std::size_t>(label_index)], line_no, label_column);
    if (label != 0.0 && label != 1.0) {
      throw SchemaError("line " + std::to_string(line_no) + ": label '" +
                        fields[static_cast<std::size_t>(label_index)] + "' is not 0 or 1");
    }
    ds.labels.push_back(label == 1.0 ? 1 : 0);
    if (draw_index >= 0) {
      ds.draws.push_back(parse_field(fields[static_cast<std::size_t>(draw_index)], line_no, *draw_column));
    }
    for (auto j : feature_columns) {
      values.push_back(parse_field(fields[static_cast<std::size_t>(j)], line_no, header[static_cast<std::size_t>(j)]));
    }
  }

  const auto n = static_cast<Eigen::Index>(ds.labels.size());
  const auto d = static_cast<Eigen::Index>(feature_columns.size());
  ds.covariates = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, d);
  return ds;
}

LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                        const std::optional<std::string>& draw_column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_csv(in, label_column, draw_column);
}

void write_csv(std::ostream& out, const LabeledDataset& ds, const std::string& label_column) {
  ds.validate();
  for (std::size_t j = 0; j < ds.dims(); ++j) {
    out << (ds.feature_names.empty() ? "x" + std::to_string(j) : ds.feature_names[j]) << ',';
  }
  out << label_column;
  if (ds.has_draws()) out << ",draw";
  out << '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (std::size_t j = 0; j < ds.dims(); ++j) {
      out << format_double(ds.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << ',';
    }
    out << ds.labels[i];
    if (ds.has_draws()) out << ',' << format_double(ds.draws[i]);
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const LabeledDataset& ds, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(out, ds, label_column);
}

// ---------------------------------------------------------------------------
// Z-scoring

LabeledDataset ZScoreTransform::apply(const LabeledDataset& ds) const {
  if (ds.covariates.cols() != means.size()) throw ShapeError("zscore: feature count mismatch");
  LabeledDataset out = ds;
  out.covariates = (ds.covariates.rowwise() - means.transpose()).array().rowwise() / sds.transpose().array();
  return out;
}

ZScoreResult zscore(const LabeledDataset& ds) {
  if (ds.rows() == 0) throw DegenerateInputError("zscore: empty dataset");
  const double n = static_cast<double>(ds.rows());
  ZScoreTransform transform;
  transform.means = ds.covariates.colwise().mean().transpose();
  const Eigen::MatrixXd centered = ds.covariates.rowwise() - transform.means.transpose();
  transform.sds = (centered.array().square().colwise().sum() / n).sqrt().transpose();
  for (Eigen::Index j = 0; j < transform.sds.size(); ++j) {
    if (!(transform.sds(j) > 0.0)) {
      const std::string name = ds.feature_names.empty() ? "x" + std::to_string(j)
                                                        : ds.feature_names[static_cast<std::size_t>(j)];
      throw DegenerateFeatureError("zscore: feature '" + name + "' has zero variance");
    }
  }
  return {transform.apply(ds), transform};
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

enum SplitStream : std::uint64_t { kDownsample = 11, kShuffleAll = 12, kShuffleNegative = 13, kShufflePositive = 14 };

}  // namespace

void SplitSpec::validate() const {
  for (double f : {train, validation, test}) {
    if (!(f > 0.0)) throw DomainError("split: fractions must be positive");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) throw DomainError("split: fractions must sum to 1");
  if (downsample_negative_ratio && !(*downsample_negative_ratio > 0.0 && *downsample_negative_ratio <= 1.0)) {
    throw DomainError("split: downsample ratio must lie in (0, 1]");
  }
}

std::vector<std::size_t> allocate_counts(std::size_t count, const std::vector<double>& fractions) {
  std::vector<std::size_t> out(fractions.size());
  std::vector<double> remainder(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = static_cast<double>(count) * fractions[i];
    out[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < count; ++i, ++assigned) ++out[order[i % order.size()]];
  return out;
}

std::vector<std::size_t> downsample_indices(const LabeledDataset& ds, const SplitSpec& spec) {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < ds.rows(); ++i) (ds.labels[i] == 1 ? positives : negatives).push_back(i);
  if (spec.downsample_negative_ratio) {
    UniformStream stream(derive_seed(spec.seed, {kDownsample}));
    stream.shuffle(negatives);
    const auto keep = static_cast<std::size_t>(std::llround(*spec.downsample_negative_ratio *
                                                            static_cast<double>(negatives.size())));
    negatives.resize(keep);
  }
  std::vector<std::size_t> out = positives;
  out.insert(out.end(), negatives.begin(), negatives.end());
  std::sort(out.begin(), out.end());
  return out;
}

DatasetSplit split(const LabeledDataset& ds, const SplitSpec& spec) {
  spec.validate();
  ds.validate();
  const std::vector<double> fractions{spec.train, spec.validation, spec.test};
  const auto rows = downsample_indices(ds, spec);

  std::vector<std::size_t> parts[3];
  const auto deal = [&](std::vector<std::size_t> group, std::uint64_t tag) {
    UniformStream stream(derive_seed(spec.seed, {tag}));
    stream.shuffle(group);
    const auto counts = allocate_counts(group.size(), fractions);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), group.begin() + static_cast<std::ptrdiff_t>(offset),
                      group.begin() + static_cast<std::ptrdiff_t>(offset + counts[p]));
      offset += counts[p];
    }
  };
  if (spec.stratified) {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (auto i : rows) (ds.labels[i] == 1 ? positives : negatives).push_back(i);
    deal(negatives, kShuffleNegative);
    deal(positives, kShufflePositive);
  } else {
    deal(rows, kShuffleAll);
  }
  static const char* names[3] = {"train", "validation", "test"};
  for (std::size_t p = 0; p < 3; ++p) {
    if (parts[p].empty()) throw SizeError(std::string("split: ") + names[p] + " part would be empty");
    std::sort(parts[p].begin(), parts[p].end());
  }
  return {ds.subset(parts[0]), ds.subset(parts[1]), ds.subset(parts[2])};
}

}  // namespace rtc
