#include "pwsgd/error.hpp"
#include "pwsgd/matrix_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace pwsgd;

TEST(MatrixMarket, RoundTrip) {
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.5}, {1, 2, -2.0}, {3, 1, 1e-17}};
  SparseMatrix m(4, 3);
  m.setFromTriplets(trip.begin(), trip.end());
  std::stringstream ss;
  write_matrix_market(ss, m);
  const SparseMatrix back = read_matrix_market(ss);
  EXPECT_EQ(back.rows(), 4);
  EXPECT_EQ(back.cols(), 3);
  EXPECT_EQ(back.nonZeros(), 3);
  EXPECT_EQ(DenseMatrix(back), DenseMatrix(m));
}

TEST(MatrixMarket, SymmetricAndPattern) {
  std::stringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 4\n2 1 3\n");
  const DenseMatrix s(read_matrix_market(sym));
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
  std::stringstream pat("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 2\n");
  EXPECT_EQ(DenseMatrix(read_matrix_market(pat))(1, 1), 1.0);
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  std::stringstream dup("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n");
  try {
    read_matrix_market(dup);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
  std::stringstream range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  EXPECT_THROW(read_matrix_market(range), ParseError);
  std::stringstream bad("%%MatrixMarket matrix array real general\n1 1\n1\n");
  EXPECT_THROW(read_matrix_market(bad), ParseError);
}

TEST(DenseCsv, HeaderDetectionAndValues) {
  std::stringstream in("a,b,c\n1,2,3\n4,5,6\n7,8,9\n");
  const DenseMatrix m = read_dense_csv(in);
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 3);
  EXPECT_EQ(m(2, 1), 8.0);
  std::stringstream plain("1,2,3\n");
  EXPECT_EQ(read_dense_csv(plain).rows(), 1);
}

TEST(DenseCsv, RaggedAndNonNumericRowsRejected) {
  std::stringstream ragged("1,2\n3\n");
  try {
    read_dense_csv(ragged);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::stringstream word("1,2\n3,x\n");
  try {
    read_dense_csv(word);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos);
  }
}

TEST(DenseCsv, RoundTripIsLossless) {
  Rng rng(3);
  const DenseMatrix m = gaussian_matrix(6, 4, rng) * 1e-3;
  std::stringstream ss;
  write_dense_csv(ss, m);
  EXPECT_EQ(read_dense_csv(ss), m);
}

TEST(VectorCsv, RoundTrip) {
  std::filesystem::create_directories(PWSGD_TEST_TMP);
  const std::string path = std::string(PWSGD_TEST_TMP) + "/v.csv";
  Vector v(3);
  v << 1.0 / 3.0, -2.5, 1e300;
  write_vector_csv(path, v);
  EXPECT_EQ(read_vector_csv(path), v);
  EXPECT_THROW(read_vector_csv(path + ".missing"), IoError);
}
