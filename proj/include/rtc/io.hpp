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

#ifndef RTC_IO_HPP
#define RTC_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtc/dataset.hpp"

namespace rtc {

/// Reads a header + numeric rows CSV; lines starting with `#` are skipped.
/// Every column except the label (and the optional draw column) becomes a
/// feature. Missing or malformed values raise ParseError with the line
/// number; labels other than 0/1 raise SchemaError.
LabeledDataset read_csv(std::istream& in, const std::string& label_column,
                        const std::optional<std::string>& draw_column = std::nullopt);
LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                        const std::optional<std::string>& draw_column = std::nullopt);

/// Writes features, then the label column, then "draw" if present. Values
/// use shortest round-trip formatting.
void write_csv(std::ostream& out, const LabeledDataset& ds, const std::string& label_column = "label");
void save_csv(const std::filesystem::path& path, const LabeledDataset& ds,
              const std::string& label_column = "label");

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Per-feature standardization with the population (divide-by-n) standard
/// deviation.
struct ZScoreTransform {
  Eigen::VectorXd means;
  Eigen::VectorXd sds;

  LabeledDataset apply(const LabeledDataset& ds) const;
};

struct ZScoreResult {
  LabeledDataset data;
  ZScoreTransform transform;
};

/// Fits and applies z-scoring. DegenerateFeatureError names any column with
/// zero variance.
ZScoreResult zscore(const LabeledDataset& ds);

struct SplitSpec {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
  std::uint64_t seed = 0;
  bool stratified = true;
  /// Keep round(ratio * negatives) negatives before splitting.
  std::optional<double> downsample_negative_ratio;

  void validate() const;
};

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

/// Largest-remainder allocation of `count` items over `fractions`.
std::vector<std::size_t> allocate_counts(std::size_t count, const std::vector<double>& fractions);

/// Row indices kept by negative downsampling (ascending), deterministic in
/// spec.seed.
std::vector<std::size_t> downsample_indices(const LabeledDataset& ds, const SplitSpec& spec);

/// Seeded train/validation/test partition of the (downsampled) rows. When
/// stratified, each class is allocated separately. SizeError if any part
/// would be empty.
DatasetSplit split(const LabeledDataset& ds, const SplitSpec& spec);

}  // namespace rtc

#endif  // RTC_IO_HPP
