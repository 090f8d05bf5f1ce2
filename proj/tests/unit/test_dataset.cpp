#include <mpmf/dataset.hpp>
#include <mpmf/error.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace mpmf;

namespace {

Dataset parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_sparse(in);
}

Dataset parse_csv_text(const std::string& text, std::size_t col) {
  std::istringstream in(text);
  return parse_csv(in, col);
}

BinaryDataset counts(int pos, int neg) {
  Eigen::MatrixXd x(pos + neg, 1);
  std::vector<int> y;
  for (int i = 0; i < pos + neg; ++i) {
    x(i, 0) = i;
    y.push_back(i < pos ? 1 : -1);
  }
  return BinaryDataset::from_parts(x, y);
}

}  // namespace

TEST(ParseSparse, FillsAbsentIndicesWithZero) {
  const Dataset d = parse_text("1 1:0.5 3:2.0\n");
  ASSERT_EQ(d.rows(), 1);
  EXPECT_EQ(d.labels[0], 1);
  EXPECT_EQ(d.features.row(0), Eigen::RowVector3d(0.5, 0.0, 2.0));
}

TEST(ParseSparse, EmptyStreamGivesEmptyDataset) {
  const Dataset d = parse_text("");
  EXPECT_EQ(d.rows(), 0);
  EXPECT_TRUE(d.labels.empty());
}

TEST(ParseSparse, DimensionIsMaxIndexSeen) {
  const Dataset d = parse_text("2 2:1\n1 4:1\n");
  ASSERT_EQ(d.feature_dim(), 4);
  EXPECT_EQ(d.features.row(0), Eigen::RowVector4d(0, 1, 0, 0));
  EXPECT_EQ(d.features.row(1), Eigen::RowVector4d(0, 0, 0, 1));
  EXPECT_EQ(d.labels, (std::vector<int>{2, 1}));
}

TEST(ParseSparse, AcceptsCrlfAndBlankLinesAndSignedLabels) {
  const Dataset d = parse_text("+1 1:1\r\n\r\n-1 2:3\r\n");
  EXPECT_EQ(d.labels, (std::vector<int>{1, -1}));
  EXPECT_EQ(d.features(1, 1), 3.0);
}

TEST(ParseSparse, ErrorsCarryLineNumbers) {
  try {
    parse_text("1 1:1\n1 2:x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseSparse, RejectsMalformedLines) {
  EXPECT_THROW(parse_text("1 1:1 1:2\n"), ParseError);  // duplicate index
  EXPECT_THROW(parse_text("1 3:1 2:2\n"), ParseError);  // decreasing
  EXPECT_THROW(parse_text("1 0:1\n"), ParseError);      // zero-based
  EXPECT_THROW(parse_text("1 12\n"), ParseError);       // missing colon
  EXPECT_THROW(parse_text("a 1:1\n"), ParseError);
  EXPECT_THROW(parse_text("1.5 1:1\n"), ParseError);
  EXPECT_THROW(parse_text("1 1:nan\n"), ParseError);
}

TEST(ParseSparse, RoundTripIsExact) {
  Dataset d;
  d.features = Eigen::MatrixXd(3, 3);
  d.features << 0.1, 0, 1.0 / 3.0, -2.5e-300, 7, 0, 0, 0, 1e17;
  d.labels = {1, -1, 5};
  std::ostringstream out;
  write_sparse(out, d);
  const Dataset back = parse_text(out.str());
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.features, d.features);
}

TEST(ParseCsv, LabelColumnIsRemoved) {
  const Dataset d = parse_csv_text("0,1.0,2.0\n1,3.0,4.0\n", 0);
  ASSERT_EQ(d.rows(), 2);
  ASSERT_EQ(d.feature_dim(), 2);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1}));
  EXPECT_EQ(d.features(1, 0), 3.0);
}

TEST(ParseCsv, SingleRow) {
  const Dataset d = parse_csv_text("1.5,2,7\n", 2);
  EXPECT_EQ(d.rows(), 1);
  EXPECT_EQ(d.labels[0], 7);
  EXPECT_EQ(d.features.row(0), Eigen::RowVector2d(1.5, 2));
}

TEST(ParseCsv, RejectsHeaderRaggedAndNonNumeric) {
  EXPECT_THROW(parse_csv_text("label,x,y\n0,1,2\n", 0), ParseError);
  EXPECT_THROW(parse_csv_text("0,1,2\n1,3\n", 0), ParseError);
  EXPECT_THROW(parse_csv_text("0,1,abc\n", 0), ParseError);
  EXPECT_THROW(parse_csv_text("0,1,2\n", 3), ParseError);
}

TEST(Binarize, OneVsAll) {
  Dataset d;
  d.features = Eigen::MatrixXd::Zero(4, 1);
  d.labels = {1, 2, 3, 1};
  const BinaryDataset b = binarize_one_vs_all(d, 1);
  EXPECT_EQ(b.labels, (std::vector<int>{1, -1, -1, 1}));
  EXPECT_EQ(b.n_pos, 2u);
  EXPECT_EQ(b.n_neg, 2u);
}

TEST(Binarize, AbsentLabelThrows) {
  Dataset d;
  d.features = Eigen::MatrixXd::Zero(2, 1);
  d.labels = {1, 2};
  EXPECT_THROW(binarize_one_vs_all(d, 7), DataError);
}

TEST(Binarize, AllPositiveLeavesNoNegatives) {
  Dataset d;
  d.features = Eigen::MatrixXd::Zero(3, 1);
  d.labels = {4, 4, 4};
  EXPECT_EQ(binarize_one_vs_all(d, 4).n_neg, 0u);
}

TEST(Binarize, IdempotentOnSignedLabels) {
  Dataset d;
  d.features = Eigen::MatrixXd::Zero(3, 1);
  d.labels = {1, -1, 1};
  const BinaryDataset once = binarize_one_vs_all(d, 1);
  EXPECT_EQ(once.labels, d.labels);
  const BinaryDataset twice = binarize_one_vs_all(Dataset{once.features, once.labels}, 1);
  EXPECT_EQ(twice.labels, once.labels);
}

TEST(Split, HalvesBalancedClasses) {
  auto [train, test] = split(counts(10, 10), 0.5, 3);
  EXPECT_EQ(train.n_pos, 5u);
  EXPECT_EQ(train.n_neg, 5u);
  EXPECT_EQ(test.n_pos, 5u);
  EXPECT_EQ(test.n_neg, 5u);
}

TEST(Split, SameSeedSamePartition) {
  const BinaryDataset d = counts(13, 29);
  auto [a1, b1] = split(d, 0.37, 99);
  auto [a2, b2] = split(d, 0.37, 99);
  EXPECT_EQ(a1.features, a2.features);
  EXPECT_EQ(b1.features, b2.features);
  auto [a3, b3] = split(d, 0.37, 100);
  EXPECT_NE(a1.features, a3.features);
}

TEST(Split, MinorityRoundsUp) {
  // ceil rule enumerated on small counts
  for (int pos = 1; pos <= 6; ++pos) {
    for (double f : {0.1, 0.25, 0.5, 0.9}) {
      auto [train, test] = split(counts(pos, 100), f, 1);
      EXPECT_EQ(train.n_pos, static_cast<std::size_t>(std::ceil(f * pos - 1e-9))) << pos << " " << f;
      EXPECT_GE(train.n_pos, 1u);
      EXPECT_EQ(train.n_pos + test.n_pos, static_cast<std::size_t>(pos));
    }
  }
  auto [train, test] = split(counts(1, 100), 0.5, 0);
  EXPECT_EQ(train.n_pos, 1u);
  EXPECT_EQ(test.n_pos, 0u);
}

TEST(Split, ProportionWithinOneSamplePerClass) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto [train, test] = split(counts(37, 211), 0.7, seed);
    EXPECT_LE(std::abs(static_cast<double>(train.n_pos) - 0.7 * 37), 1.0);
    EXPECT_LE(std::abs(static_cast<double>(train.n_neg) - 0.7 * 211), 1.0);
  }
}

TEST(Split, PartsAreDisjointAndComplete) {
  auto [train, test] = split(counts(20, 30), 0.4, 5);
  std::set<double> seen;
  for (Eigen::Index i = 0; i < train.rows(); ++i) seen.insert(train.features(i, 0));
  for (Eigen::Index i = 0; i < test.rows(); ++i) EXPECT_TRUE(seen.insert(test.features(i, 0)).second);
  EXPECT_EQ(seen.size(), 50u);
}

TEST(Split, RejectsBadFractionOrMissingClass) {
  EXPECT_THROW(split(counts(5, 5), 0.0, 1), DataError);
  EXPECT_THROW(split(counts(5, 5), 1.0, 1), DataError);
  EXPECT_THROW(split(counts(0, 5), 0.5, 1), DataError);
}

TEST(SeededPermutation, IsAPermutationAndDeterministic) {
  auto a = seeded_permutation(50, 8);
  auto b = seeded_permutation(50, 8);
  EXPECT_EQ(a, b);
  std::sort(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], i);
}

TEST(DatasetValidate, RejectsMismatchAndNonFinite) {
  Dataset d;
  d.features = Eigen::MatrixXd::Zero(2, 1);
  d.labels = {1};
  EXPECT_THROW(d.validate(), DataError);
  d.labels = {1, 2};
  d.features(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(d.validate(), DataError);
}
