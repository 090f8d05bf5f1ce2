#include <mpmf/error.hpp>
#include <mpmf/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace mpmf;
namespace fs = std::filesystem;

TEST(MomentsJson, RoundTripIsExact) {
  ClassMoments m;
  m.mu_p = Eigen::Vector2d(3, 1.0 / 3.0);
  m.mu_n = Eigen::Vector2d(-1, -2);
  m.sigma_p = (Eigen::Matrix2d() << 1, .5, .5, 1).finished();
  m.sigma_n = (Eigen::Matrix2d() << 1, 1. / 3, 1. / 3, 1).finished();
  m.p = 0.1;
  const ClassMoments back = moments_from_json(moments_to_json(m));
  EXPECT_EQ(back.mu_p, m.mu_p);
  EXPECT_EQ(back.sigma_n, m.sigma_n);
  EXPECT_EQ(back.p, m.p);
}

TEST(MomentsJson, RejectsMissingFieldsAndBadShapes) {
  EXPECT_THROW(moments_from_json("{\"mu_p\": [1]}"), DataError);
  EXPECT_THROW(moments_from_json("not json"), DataError);
  EXPECT_THROW(moments_from_json(R"({"mu_p":[1,0],"mu_n":[0,0],"sigma_p":[[1,0],[0]],"sigma_n":[[1,0],[0,1]],"p":0.5})"),
               DataError);
  EXPECT_THROW(moments_from_json(R"({"mu_p":[1,0],"mu_n":[0,0],"sigma_p":[[1,0],[0,1]],"sigma_n":[[1,0],[0,1]],"p":1.5})"),
               DataError);
}

TEST(ModelJson, LinearAndMpmRoundTrip) {
  StoredModel m;
  m.measure = MeasureSpec::fbeta(2.5);
  m.linear.w = Eigen::Vector3d(0.1, -0.2, 1.0 / 7.0);
  m.linear.b = 0.3;
  StoredModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.type, ModelType::Linear);
  EXPECT_EQ(back.measure, m.measure);
  EXPECT_EQ(back.linear.w, m.linear.w);
  EXPECT_EQ(back.linear.b, m.linear.b);

  m.type = ModelType::Mpm;
  m.alpha_star = 0.42;
  back = model_from_json(model_to_json(m, 2));
  EXPECT_EQ(back.type, ModelType::Mpm);
  EXPECT_EQ(back.alpha_star, 0.42);
}

TEST(ModelJson, KernelRoundTrip) {
  StoredModel m;
  m.type = ModelType::Kernel;
  m.kernel.spec = KernelSpec::polynomial(3, 0.5);
  m.kernel.support_pos = Eigen::MatrixXd::Random(2, 3);
  m.kernel.support_neg = Eigen::MatrixXd::Random(3, 3);
  m.kernel.dual_weights = Eigen::VectorXd::Random(5).normalized();
  m.kernel.bias = -0.25;
  const StoredModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.kernel.spec.name(), m.kernel.spec.name());
  EXPECT_EQ(back.kernel.support_neg, m.kernel.support_neg);
  EXPECT_EQ(back.kernel.dual_weights, m.kernel.dual_weights);
  EXPECT_EQ(back.feature_dim(), 3);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 3);
  EXPECT_EQ(back.scores(x), m.kernel.scores(x));
}

TEST(ModelJson, RejectsUnknownType) {
  EXPECT_THROW(model_from_json(R"({"type":"tree","measure":"f1"})"), DataError);
  EXPECT_THROW(model_from_json(R"({"type":"linear","measure":"f1","w":[1]})"), DataError);
}

TEST(ResultJson, CarriesSolverFields) {
  SolverResult r;
  r.w = Eigen::Vector2d(0.6, 0.8);
  r.alpha_p = 0.1;
  r.reason = StopReason::QTolerance;
  const std::string text = result_to_json(r, MeasureSpec::fbeta(1));
  EXPECT_NE(text.find("\"stop_reason\":\"q_tolerance\""), std::string::npos);
  EXPECT_NE(text.find("\"measure\":\"f1\""), std::string::npos);
}

TEST(WriteAtomic, ReplacesContentAndLeavesNoTemporary) {
  const fs::path dir = fs::temp_directory_path() / "mpmf_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path file = dir / "out.txt";
  write_atomic(file, "first");
  write_atomic(file, "second");
  EXPECT_EQ(read_text(file), "second");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  EXPECT_THROW(read_text(dir / "missing"), DataError);
  EXPECT_THROW(write_atomic(dir / "no" / "such" / "dir.txt", "x"), DataError);
  fs::remove_all(dir);
}
