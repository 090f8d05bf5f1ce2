#include "mpmf/dataset.hpp"

#include "mpmf/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <string_view>

namespace mpmf {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

// Integer labels may be written as "2", "+1" or "2.000000".
bool parse_label(std::string_view token, int& out) {
  double value = 0.0;
  if (!parse_double(token, value)) return false;
  if (value != std::floor(value) || std::abs(value) > std::numeric_limits<int>::max()) return false;
  out = static_cast<int>(value);
  return true;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

void Dataset::validate() const {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw DataError("label count " + std::to_string(labels.size()) + " differs from row count " +
                    std::to_string(features.rows()));
  }
  if (!features.allFinite()) throw DataError("feature matrix contains non-finite values");
}

BinaryDataset BinaryDataset::from_parts(Eigen::MatrixXd features, std::vector<int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw DataError("label count differs from row count");
  }
  BinaryDataset out;
  for (int y : labels) {
    if (y == 1) {
      ++out.n_pos;
    } else if (y == -1) {
      ++out.n_neg;
    } else {
      throw DataError("binary labels must be +1 or -1, got " + std::to_string(y));
    }
  }
  out.features = std::move(features);
  out.labels = std::move(labels);
  return out;
}

Eigen::MatrixXd BinaryDataset::class_rows(int label) const {
  const auto count = static_cast<Eigen::Index>(label == 1 ? n_pos : n_neg);
  Eigen::MatrixXd rows_out(count, features.cols());
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) rows_out.row(r++) = features.row(static_cast<Eigen::Index>(i));
  }
  return rows_out;
}

Dataset parse_sparse(std::istream& in) {
  struct Row {
    int label;
    std::vector<std::pair<Eigen::Index, double>> entries;
  };
  std::vector<Row> rows;
  Eigen::Index dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(trim(line));
    if (tokens.empty()) continue;
    Row row{};
    if (!parse_label(tokens[0], row.label)) {
      throw ParseError(line_no, "invalid label '" + std::string(tokens[0]) + "'");
    }
    long long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tokens[t]) + "'");
      }
      const auto idx_text = tokens[t].substr(0, colon);
      long long index = 0;
      auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || index < 1) {
        throw ParseError(line_no, "invalid feature index '" + std::string(idx_text) + "'");
      }
      if (index == previous) {
        throw ParseError(line_no, "duplicate feature index " + std::to_string(index));
      }
      if (index < previous) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      double value = 0.0;
      if (!parse_double(tokens[t].substr(colon + 1), value)) {
        throw ParseError(line_no, "non-numeric value in '" + std::string(tokens[t]) + "'");
      }
      previous = index;
      row.entries.emplace_back(static_cast<Eigen::Index>(index - 1), value);
      dim = std::max<Eigen::Index>(dim, index);
    }
    rows.push_back(std::move(row));
  }

  Dataset out;
  out.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), dim);
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.labels.push_back(rows[r].label);
    for (const auto& [col, value] : rows[r].entries) {
      out.features(static_cast<Eigen::Index>(r), col) = value;
    }
  }
  return out;
}

Dataset parse_csv(std::istream& in, std::size_t label_column) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto cells = split_on(body, ',');
    if (rows.empty()) {
      width = cells.size();
      if (label_column >= width) {
        throw ParseError(line_no, "label column " + std::to_string(label_column) +
                                      " outside row of width " + std::to_string(width));
      }
    } else if (cells.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " cells, got " +
                                    std::to_string(cells.size()));
    }
    std::vector<double> values;
    values.reserve(width - 1);
    int label = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = trim(cells[c]);
      if (c == label_column) {
        if (!parse_label(cell, label)) {
          throw ParseError(line_no, "label cell '" + std::string(cell) + "' is not an integer");
        }
        continue;
      }
      double value = 0.0;
      if (!parse_double(cell, value)) {
        throw ParseError(line_no, "non-numeric cell '" + std::string(cell) + "'");
      }
      values.push_back(value);
    }
    rows.push_back(std::move(values));
    labels.push_back(label);
  }

  Dataset out;
  const auto cols = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(width - 1);
  out.features.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      out.features(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    }
  }
  out.labels = std::move(labels);
  return out;
}

Dataset load_sparse(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_sparse(in);
}

Dataset load_csv(const std::filesystem::path& path, std::size_t label_column) {
  auto in = open_or_throw(path);
  return parse_csv(in, label_column);
}

void write_sparse(std::ostream& out, const Dataset& data) {
  data.validate();
  char buf[64];
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    out << data.labels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < data.feature_dim(); ++c) {
      const double v = data.features(r, c);
      if (v == 0.0) continue;
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << (c + 1) << ':' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

BinaryDataset binarize_one_vs_all(const Dataset& data, int positive_label) {
  data.validate();
  if (std::find(data.labels.begin(), data.labels.end(), positive_label) == data.labels.end()) {
    throw DataError("positive label " + std::to_string(positive_label) + " does not occur");
  }
  std::vector<int> labels;
  labels.reserve(data.labels.size());
  for (int y : data.labels) labels.push_back(y == positive_label ? 1 : -1);
  return BinaryDataset::from_parts(data.features, std::move(labels));
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 engine(seed);
  for (std::size_t i = n; i > 1; --i) {
    // unbiased draw from [0, i) by rejection
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(draw % bound)]);
  }
  return perm;
}

std::pair<BinaryDataset, BinaryDataset> split(const BinaryDataset& data, double train_fraction,
                                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  if (data.n_pos == 0 || data.n_neg == 0) throw DataError("split needs both classes");

  std::vector<bool> in_train(data.labels.size(), false);
  std::uint64_t class_seed = seed;
  for (int label : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      if (data.labels[i] == label) members.push_back(i);
    }
    const auto n = members.size();
    // the epsilon keeps e.g. 0.3 * 10 from rounding up to 4
    auto take = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    take = std::min(take, n);
    const auto perm = seeded_permutation(n, class_seed++);
    for (std::size_t k = 0; k < take; ++k) in_train[members[perm[k]]] = true;
  }

  auto gather = [&](bool want_train) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < in_train.size(); ++i) {
      if (in_train[i] == want_train) idx.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), data.features.cols());
    std::vector<int> y;
    y.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      x.row(static_cast<Eigen::Index>(k)) = data.features.row(idx[k]);
      y.push_back(data.labels[static_cast<std::size_t>(idx[k])]);
    }
    return BinaryDataset::from_parts(std::move(x), std::move(y));
  };
  return {gather(true), gather(false)};
}

std::vector<int> distinct_labels(const std::vector<int>& labels) {
  std::set<int> unique(labels.begin(), labels.end());
  return {unique.begin(), unique.end()};
}

}  // namespace mpmf
