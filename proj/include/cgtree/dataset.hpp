#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cgtree {

using Weight = std::int64_t;

struct Row {
  std::size_t id = 0;             // ordinal in the source file
  std::vector<double> features;   // indexed by feature
  int target = 0;                 // class index
  Weight weight = 1;
};

// Immutable after construction.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Row> rows, std::size_t num_features, std::size_t num_classes,
          std::vector<std::string> class_names = {});

  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  Weight total_weight() const;

  // Number of distinct classes that actually occur among the rows.
  std::size_t classes_present() const;

  // Throws DataError unless the dataset can be used for training (>= 2 classes present).
  void require_trainable() const;

  // New dataset over the given row positions, keeping ids, classes and names.
  Dataset subset(std::span<const std::size_t> positions) const;

  // Same rows with different weights (used by duplicate merging).
  Dataset with_rows(std::vector<Row> rows) const;

 private:
  std::vector<Row> rows_;
  std::size_t num_features_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<std::string> class_names_;
};

// Target column selector: a zero-based index, a header name, or the last column.
struct TargetColumn {
  std::variant<std::monostate, std::size_t, std::string> which;

  static TargetColumn last() { return {}; }
  static TargetColumn index(std::size_t i) { return {i}; }
  static TargetColumn name(std::string n) { return {std::move(n)}; }
  // "3" selects by index, anything else by header name, "" means last.
  static TargetColumn parse(const std::string& text);
};

struct CsvOptions {
  TargetColumn target = TargetColumn::last();
  // When false the file carries no target column; every row gets class 0.
  bool has_labels = true;
  // Pre-existing label map (e.g. a model's classes); unseen labels are appended.
  std::vector<std::string> class_names;
};

// Loads a numeric CSV. Labels are mapped to 0..|T|-1 in order of first appearance
// (after any provided class_names). Header is auto-detected: line 1 is a header iff
// one of its non-target cells does not parse as a number.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_positions;
  std::vector<std::size_t> test_positions;
};

// Seeded uniform permutation; the first floor(train_frac*|R|) positions form the
// training set, the next floor(test_frac*|R|) the test set. The rest is unused.
TrainTestSplit split_train_test(const Dataset& d, double train_frac, double test_frac,
                                std::uint64_t seed);

}  // namespace cgtree
