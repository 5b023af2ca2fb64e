#include <gtest/gtest.h>

#include "mrecon/linalg.hpp"
#include "mrecon/tucker.hpp"
#include "support.hpp"

using namespace mrecon;
using namespace testing_support;

TEST(DenseTensor, ConstructionValidatesShape) {
  EXPECT_THROW(DenseTensor(Dims{}), std::invalid_argument);
  EXPECT_THROW(DenseTensor(Dims{3, 0, 2}), std::invalid_argument);
  EXPECT_THROW(DenseTensor(Dims{2, 2}, std::vector<cplx>(3)), std::invalid_argument);
  DenseTensor x(Dims{2, 3, 4});
  EXPECT_EQ(x.size(), 24u);
  EXPECT_EQ(x.norm(), 0.0);
}

TEST(DenseTensor, LinearOrderIsFirstIndexFastest) {
  DenseTensor x(Dims{2, 3, 4});
  x(1, 2, 3) = cplx(5.0, -1.0);
  EXPECT_EQ(x[1 + 2 * (2 + 3 * 3)], cplx(5.0, -1.0));
}

TEST(DenseTensor, InnerProductConjugatesFirstArgument) {
  DenseTensor a(Dims{2}, {cplx(0, 1), cplx(1, 0)});
  DenseTensor b(Dims{2}, {cplx(0, 1), cplx(2, 0)});
  EXPECT_EQ(inner(a, b), cplx(3.0, 0.0));
  EXPECT_DOUBLE_EQ(inner_real(a, a), a.squared_norm());
  EXPECT_THROW(inner(a, DenseTensor(Dims{3})), std::invalid_argument);
}

TEST(Matricize, MatchesIndexFormula) {
  Rng rng(1);
  const DenseTensor x = random_tensor({3, 4, 5}, rng);
  for (std::size_t mode = 0; mode < 3; ++mode)
    EXPECT_EQ((matricize(x, mode) - unfold_oracle(x, mode)).norm(), 0.0) << "mode " << mode;
}

TEST(Matricize, RoundTripProperty) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = uniform_int(rng, 1, 4);
    const Dims dims = random_dims(rng, d, 1, 5);
    const DenseTensor x = random_tensor(dims, rng);
    const std::size_t mode = uniform_int(rng, 0, d - 1);
    const Matrix m = matricize(x, mode);
    ASSERT_EQ(m.rows(), static_cast<Eigen::Index>(dims[mode]));
    ASSERT_EQ(dematricize(m, mode, dims), x) << "trial " << trial;
  }
}

TEST(ModeProduct, MatchesUnfoldingDefinition) {
  Rng rng(3);
  const DenseTensor x = random_tensor({4, 3, 5}, rng);
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const Matrix m = random_matrix(2, static_cast<Eigen::Index>(x.dim(mode)), rng);
    const DenseTensor y = mode_product(x, m, mode);
    EXPECT_EQ(y.dim(mode), 2u);
    EXPECT_LT((unfold_oracle(y, mode) - m * unfold_oracle(x, mode)).norm(), 1e-12);
  }
  EXPECT_THROW(mode_product(x, random_matrix(2, 7, rng), 0), std::invalid_argument);
  EXPECT_ANY_THROW(mode_product(x, random_matrix(2, 4, rng), 3));
}

TEST(ModeProduct, DistinctModesCommute) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims = random_dims(rng, 3, 2, 6);
    const DenseTensor x = random_tensor(dims, rng);
    const Matrix a = random_matrix(3, static_cast<Eigen::Index>(dims[0]), rng);
    const Matrix b = random_matrix(4, static_cast<Eigen::Index>(dims[1]), rng);
    const DenseTensor ab = mode_product(mode_product(x, a, 0), b, 1);
    const DenseTensor ba = mode_product(mode_product(x, b, 1), a, 0);
    EXPECT_LT(rel_diff(ab, ba), 1e-13);
  }
}

TEST(TruncatedSvd, TailMatchesEigenOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = static_cast<Eigen::Index>(uniform_int(rng, 2, 12));
    const auto cols = static_cast<Eigen::Index>(uniform_int(rng, 2, 12));
    const Matrix m = random_matrix(rows, cols, rng);
    const std::size_t k = uniform_int(rng, 1, static_cast<std::size_t>(std::min(rows, cols)));
    const SvdResult svd = truncated_svd(m, k);
    const Matrix approx = svd.u * svd.s.cast<cplx>().asDiagonal() * svd.v.adjoint();
    const double err2 = (m - approx).squaredNorm();
    const double tail = tail_energy(singular_values_oracle(m), k);
    EXPECT_NEAR(err2, tail, 1e-8 * std::max(tail, m.squaredNorm() * 1e-8)) << "trial " << trial;
  }
}

TEST(TruncatedSvd, OrthonormalAndSignConvention) {
  Rng rng(6);
  const Matrix m = random_matrix(9, 6, rng);
  const SvdResult svd = truncated_svd(m, 4);
  EXPECT_LT((svd.u.adjoint() * svd.u - Matrix::Identity(4, 4)).norm(), 1e-12);
  EXPECT_LT((svd.v.adjoint() * svd.v - Matrix::Identity(4, 4)).norm(), 1e-12);
  for (Eigen::Index j = 0; j < 4; ++j) {
    Eigen::Index arg = 0;
    svd.u.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(svd.u(arg, j).real(), 0.0);
    EXPECT_NEAR(svd.u(arg, j).imag(), 0.0, 1e-14);
    if (j > 0) EXPECT_GE(svd.s[j - 1], svd.s[j]);
  }
  const Eigen::VectorXd s_all = singular_values(m);
  const Eigen::VectorXd s_oracle = singular_values_oracle(m);
  EXPECT_LT((s_all - s_oracle).norm(), 1e-10 * s_oracle[0]);
}

TEST(TruncatedSvd, Deterministic) {
  Rng rng(7);
  const Matrix m = random_matrix(8, 8, rng);
  const SvdResult a = truncated_svd(m, 3), b = truncated_svd(m, 3);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_THROW(truncated_svd(m, 9), std::out_of_range);
}

TEST(FeasibleRank, Rules) {
  EXPECT_TRUE(is_feasible_rank({10, 10, 5}, {3, 3, 2}));
  EXPECT_FALSE(is_feasible_rank({10, 10, 5}, {3, 3, 6}));
  EXPECT_FALSE(is_feasible_rank({10, 10, 5}, {5, 2, 2}));  // 5 > 2 * 2
  EXPECT_FALSE(is_feasible_rank({10, 10, 5}, {0, 1, 1}));
  EXPECT_FALSE(is_feasible_rank({10, 10, 5}, {1, 1}));
  EXPECT_THROW(require_feasible_rank({4, 4, 4}, {4, 4, 5}), std::invalid_argument);
}

TEST(ParseSizeList, AcceptsAndRejects) {
  EXPECT_EQ(parse_size_list("4,4,3"), (std::vector<std::size_t>{4, 4, 3}));
  EXPECT_EQ(parse_size_list("13"), (std::vector<std::size_t>{13}));
  EXPECT_THROW(parse_size_list("4,x"), std::invalid_argument);
  EXPECT_THROW(parse_size_list("4,-1"), std::invalid_argument);
  EXPECT_THROW(parse_size_list(""), std::invalid_argument);
}

TEST(Hosvd, ExactRankIsRecovered) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims = random_dims(rng, 3, 3, 8);
    const RankTuple r = random_feasible_rank(rng, dims);
    const DenseTensor x = tucker_assemble(random_tucker(dims, r, rng));
    const TuckerTensor t = hosvd_truncate(x, r);
    EXPECT_LT(rel_diff(tucker_assemble(t), x), 1e-10) << "trial " << trial;
    EXPECT_LT(t.orthonormality_error(), 1e-10);
    EXPECT_EQ(t.ranks(), r);
  }
}

TEST(Hosvd, ZeroTensorGivesZeroCore) {
  const TuckerTensor t = hosvd_truncate(DenseTensor(Dims{5, 4, 3}), {2, 2, 1});
  EXPECT_EQ(t.core.norm(), 0.0);
  EXPECT_LT(t.orthonormality_error(), 1e-12);
}

TEST(Hosvd, QuasiOptimalityBound) {
  Rng rng(9);
  const RankTuple r{3, 3, 2};
  for (int trial = 0; trial < 20; ++trial) {
    const DenseTensor x = random_tensor({10, 10, 5}, rng);
    const TuckerTensor t = hosvd_truncate(x, r);
    const double err2 = (x - tucker_assemble(t)).squared_norm();
    double bound = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      bound += tail_energy(singular_values_oracle(unfold_oracle(x, i)), r[i]);
    EXPECT_LE(err2, bound * (1.0 + 1e-12)) << "trial " << trial;
  }
}

TEST(Hosvd, OutputRankBoundedProperty) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const Dims dims = random_dims(rng, 3, 2, 7);
    const RankTuple r = random_feasible_rank(rng, dims);
    const TuckerTensor t = hosvd_truncate(random_tensor(dims, rng), r);
    const RankTuple got = multilinear_rank(tucker_assemble(t), 1e-9);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(got[i], r[i]);
    EXPECT_LT(t.orthonormality_error(), 1e-10);
  }
}

TEST(Hosvd, FullRankModeUsesIdentityFactor) {
  Rng rng(11);
  const DenseTensor x = random_tensor({4, 5, 3}, rng);
  const TuckerTensor t = hosvd_truncate(x, {4, 2, 3});
  EXPECT_EQ(t.factors[0], Matrix(Matrix::Identity(4, 4)));
  EXPECT_EQ(t.factors[2], Matrix(Matrix::Identity(3, 3)));
  EXPECT_THROW(hosvd_truncate(x, {4, 5, 4}), std::invalid_argument);
}

TEST(MultilinearRank, OfStructuredTensor) {
  Rng rng(12);
  const DenseTensor x = tucker_assemble(random_tucker({6, 7, 5}, {2, 3, 2}, rng));
  EXPECT_EQ(multilinear_rank(x), (RankTuple{2, 3, 2}));
}

TEST(Tucker, ShapeValidation) {
  Rng rng(13);
  TuckerTensor t = random_tucker({5, 5, 4}, {2, 2, 2}, rng);
  EXPECT_NO_THROW(t.validate_shapes());
  t.factors[1] = random_matrix(5, 3, rng);
  EXPECT_THROW(t.validate_shapes(), std::invalid_argument);
}
