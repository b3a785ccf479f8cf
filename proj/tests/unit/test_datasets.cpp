#include "oracles.hpp"
#include "pwsgd/datasets.hpp"
#include "pwsgd/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace pwsgd;

TEST(Synthetic1, SpikesDominateLeverage) {
  const Dataset ds = gen_synthetic1(1000, 10, 5, 1);
  Vector lev = oracle::l2_leverage_svd(ds.a);
  std::vector<double> v(lev.data(), lev.data() + lev.size());
  const double med = oracle::median(v);
  std::sort(v.begin(), v.end(), std::greater<>());
  for (int k = 0; k < 5; ++k) EXPECT_GE(v[k], 10.0 * med);
  EXPECT_LT(v[5], 10.0 * med);
}

TEST(Synthetic1, NoSpikesIsFlat) {
  const Dataset ds = gen_synthetic1(1000, 10, 0, 2);
  const Vector lev = oracle::l2_leverage_svd(ds.a);
  std::vector<double> v(lev.data(), lev.data() + lev.size());
  EXPECT_LE(lev.maxCoeff() / oracle::median(v), 5.0);
}

TEST(Synthetic1, Reproducible) {
  const Dataset a = gen_synthetic1(200, 4, 5, 9, 5.0);
  const Dataset b = gen_synthetic1(200, 4, 5, 9, 5.0);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.b, b.b);
}

TEST(Synthetic1, ConditionTarget) {
  const Dataset ds = gen_synthetic1(1000, 10, 5, 3, 5.0);
  EXPECT_NEAR(oracle::cond_bdc(ds.a), 5.0, 1e-6);
  EXPECT_THROW(gen_synthetic1(10, 20, 0, 1), InvalidArgument);
}

TEST(Synthetic2, EqualityCase) {
  EXPECT_DOUBLE_EQ(synthetic2_q(6, 6.0), 0.0);
  const Dataset ds = gen_synthetic2(50, 6, 6.0, 1);
  const Vector sv = oracle::singular_values_eig(ds.a);
  EXPECT_LE((sv.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(Synthetic2, ClosedFormQ) { EXPECT_NEAR(synthetic2_q(2, 5.0), 1.0, 1e-14); }

TEST(Synthetic2, KappaBarMatchesSvdOracle) {
  for (double target : {20.0, 1e3, 1e5}) {
    const Dataset ds = gen_synthetic2(300, 10, target, 4);
    EXPECT_NEAR(oracle::kappa_bar_sq(ds.a), target, 1e-8 * target);
  }
  EXPECT_THROW(gen_synthetic2(300, 10, 5.0, 4), InvalidArgument);
}

TEST(Synthetic2, SharedFactorsAreBitwiseIdentical) {
  const Synthetic2Factors f1 = synthetic2_factors(80, 5, 42);
  const Synthetic2Factors f2 = synthetic2_factors(80, 5, 42);
  EXPECT_EQ(f1.u, f2.u);
  EXPECT_EQ(f1.v, f2.v);
  for (double target : {10.0, 1000.0}) {
    const Dataset ds = gen_synthetic2(80, 5, target, 42, 0.1, 7);
    const double q = synthetic2_q(5, target);
    Vector sigma(5);
    for (Index i = 0; i < 5; ++i) sigma(i) = 1.0 + static_cast<double>(i) * q;
    const DenseMatrix rebuilt = f1.u * sigma.asDiagonal() * f1.v.transpose();
    EXPECT_EQ(ds.a, rebuilt);
  }
}

TEST(SparseRegression, SupportSize) {
  const Dataset ds = gen_sparse_regression(100, 40, 7, 1);
  EXPECT_EQ((ds.x_true.array() != 0.0).count(), 7);
}

TEST(CsvDataset, LoadsWithResponseColumn) {
  std::filesystem::create_directories(PWSGD_TEST_TMP);
  const std::string path = std::string(PWSGD_TEST_TMP) + "/ds.csv";
  {
    std::ofstream out(path);
    out << "y,f1,f2\n1,2,3\n4,5,6\n7,8,9\n";
  }
  const Dataset ds = load_csv_dataset(path, 0);
  ASSERT_EQ(ds.a.rows(), 3);
  ASSERT_EQ(ds.a.cols(), 2);
  EXPECT_EQ(ds.b, (Vector(3) << 1, 4, 7).finished());
  EXPECT_EQ(ds.a(2, 1), 9.0);
  const Dataset last = load_csv_dataset(path, 2);
  EXPECT_EQ(last.b(0), 3.0);
  EXPECT_EQ(last.a(0, 1), 2.0);
  EXPECT_THROW(load_csv_dataset(path, 3), InvalidArgument);
  EXPECT_THROW(load_csv_dataset(path + ".none", 0), IoError);
}

TEST(CsvDataset, YearLikeSubsample) {
  // 1000 rows with a year response and 90 features.
  const std::string path = std::string(PWSGD_TEST_TMP) + "/year.csv";
  std::filesystem::create_directories(PWSGD_TEST_TMP);
  {
    std::ofstream out(path);
    Rng rng(1);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 1000; ++i) {
      out << 1950 + i % 60;
      for (int j = 0; j < 90; ++j) out << ',' << normal(rng);
      out << '\n';
    }
  }
  const Dataset ds = load_csv_dataset(path, 0);
  EXPECT_EQ(ds.a.rows(), 1000);
  EXPECT_EQ(ds.a.cols(), 90);
}

TEST(CsvDataset, BadRowReportsLine) {
  const std::string path = std::string(PWSGD_TEST_TMP) + "/bad.csv";
  std::filesystem::create_directories(PWSGD_TEST_TMP);
  {
    std::ofstream out(path);
    out << "1,2\n3,oops\n";
  }
  try {
    load_csv_dataset(path, 0);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}
