#include "cgtree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cgtree/errors.hpp"
#include "cgtree/rng.hpp"

namespace cgtree {

Dataset::Dataset(std::vector<Row> rows, std::size_t num_features, std::size_t num_classes,
                 std::vector<std::string> class_names)
    : rows_(std::move(rows)),
      num_features_(num_features),
      num_classes_(num_classes),
      class_names_(std::move(class_names)) {
  for (const Row& r : rows_) {
    if (r.features.size() != num_features_) {
      throw DataError("row " + std::to_string(r.id) + " has " +
                      std::to_string(r.features.size()) + " features, expected " +
                      std::to_string(num_features_));
    }
    if (r.weight < 1) throw DataError("row " + std::to_string(r.id) + " has weight < 1");
    if (r.target < 0 || static_cast<std::size_t>(r.target) >= num_classes_) {
      throw DataError("row " + std::to_string(r.id) + " has target outside 0.." +
                      std::to_string(num_classes_ == 0 ? 0 : num_classes_ - 1));
    }
  }
}

Weight Dataset::total_weight() const {
  Weight w = 0;
  for (const Row& r : rows_) w += r.weight;
  return w;
}

std::size_t Dataset::classes_present() const {
  std::vector<bool> seen(num_classes_, false);
  for (const Row& r : rows_) seen[r.target] = true;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

void Dataset::require_trainable() const {
  if (rows_.empty()) throw DataError("training set is empty");
  if (classes_present() < 2) {
    throw DataError("training set contains a single class; at least two are required");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
  std::vector<Row> rows;
  rows.reserve(positions.size());
  for (std::size_t p : positions) rows.push_back(rows_.at(p));
  return Dataset(std::move(rows), num_features_, num_classes_, class_names_);
}

Dataset Dataset::with_rows(std::vector<Row> rows) const {
  return Dataset(std::move(rows), num_features_, num_classes_, class_names_);
}

TargetColumn TargetColumn::parse(const std::string& text) {
  if (text.empty()) return last();
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), idx);
  if (ec == std::errc() && ptr == text.data() + text.size()) return index(idx);
  return name(text);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  if (e - b >= 2 && s[b] == '"' && s[e - 1] == '"') {
    ++b;
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<std::vector<std::string>> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      lines.push_back(split_line(line));
    }
  }
  if (lines.empty()) throw DataError("CSV contains no rows");

  const std::size_t columns = lines.front().size();
  if (options.has_labels && columns < 1) throw DataError("CSV has no columns");

  // Header detection needs the target index, which may itself need the header.
  auto target_index_for = [&](const std::vector<std::string>* header) -> std::size_t {
    return std::visit(
        [&](const auto& sel) -> std::size_t {
          using T = std::decay_t<decltype(sel)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            return columns - 1;
          } else if constexpr (std::is_same_v<T, std::size_t>) {
            if (sel >= columns) {
              throw DataError("target column index " + std::to_string(sel) +
                              " out of range (" + std::to_string(columns) + " columns)");
            }
            return sel;
          } else {
            if (header == nullptr) {
              throw DataError("target column '" + sel + "' requested but CSV has no header");
            }
            auto it = std::find(header->begin(), header->end(), sel);
            if (it == header->end()) throw DataError("no column named '" + sel + "'");
            return static_cast<std::size_t>(it - header->begin());
          }
        },
        options.target.which);
  };

  bool has_header = false;
  if (std::holds_alternative<std::string>(options.target.which)) {
    has_header = true;
  } else {
    const std::size_t t = options.has_labels ? target_index_for(nullptr) : columns;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c != t && !parse_number(lines.front()[c])) has_header = true;
    }
  }
  const std::size_t target =
      options.has_labels ? target_index_for(has_header ? &lines.front() : nullptr) : columns;

  std::vector<std::string> class_names = options.class_names;
  std::unordered_map<std::string, int> class_index;
  for (std::size_t i = 0; i < class_names.size(); ++i) {
    class_index.emplace(class_names[i], static_cast<int>(i));
  }

  const std::size_t num_features = options.has_labels ? columns - 1 : columns;
  std::vector<Row> rows;
  const std::size_t first = has_header ? 1 : 0;
  for (std::size_t li = first; li < lines.size(); ++li) {
    const auto& cells = lines[li];
    const std::size_t line_no = li + 1;
    if (cells.size() != columns) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " cells, found " + std::to_string(cells.size()));
    }
    Row r;
    r.id = rows.size();
    r.features.reserve(num_features);
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == target) continue;
      auto v = parse_number(cells[c]);
      if (!v) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                        ": non-numeric feature value '" + cells[c] + "'");
      }
      r.features.push_back(*v);
    }
    if (options.has_labels) {
      const std::string& label = cells[target];
      if (label.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": empty target cell");
      }
      auto [it, inserted] = class_index.emplace(label, static_cast<int>(class_names.size()));
      if (inserted) class_names.push_back(label);
      r.target = it->second;
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DataError("CSV contains a header but no data rows");
  if (!options.has_labels && class_names.empty()) class_names.push_back("?");
  const std::size_t num_classes = class_names.size();
  return Dataset(std::move(rows), num_features, num_classes, std::move(class_names));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

TrainTestSplit split_train_test(const Dataset& d, double train_frac, double test_frac,
                                std::uint64_t seed) {
  if (!(train_frac > 0.0) || !(test_frac > 0.0) || train_frac + test_frac > 1.0 + 1e-12) {
    throw ConfigError("split fractions must be positive and sum to at most 1");
  }
  std::vector<std::size_t> perm(d.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);
  const auto n = static_cast<double>(d.size());
  const auto n_train = static_cast<std::size_t>(std::floor(train_frac * n));
  const auto n_test = static_cast<std::size_t>(std::floor(test_frac * n));
  TrainTestSplit out;
  out.train_positions.assign(perm.begin(), perm.begin() + n_train);
  out.test_positions.assign(perm.begin() + n_train, perm.begin() + n_train + n_test);
  out.train = d.subset(out.train_positions);
  out.test = d.subset(out.test_positions);
  return out;
}

}  // namespace cgtree
