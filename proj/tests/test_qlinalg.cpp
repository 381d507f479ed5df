#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "workstats/qlinalg.hpp"
#include "workstats/random.hpp"

using namespace workstats;
using oracle::cd;

TEST(HermitianOperator, ReconstructsMatrixFromSpectrum) {
  Rng rng(1);
  for (Eigen::Index d = 1; d <= 6; ++d) {
    const ComplexMatrixd m = random_hermitian(d, rng, 3.0);
    const HermitianOperatord h(m);
    const ComplexMatrixd& u = h.eigenvectors();
    EXPECT_TRUE(is_orthonormal_basis(u));
    const ComplexMatrixd rebuilt = u * h.eigenvalues().cast<cd>().asDiagonal() * u.adjoint();
    EXPECT_LT(max_abs(rebuilt - m), 1e-12 * std::max(1.0, max_abs(m)));
    for (Eigen::Index n = 1; n < d; ++n) EXPECT_LE(h.eigenvalues()(n - 1), h.eigenvalues()(n));
  }
}

TEST(HermitianOperator, LargestComponentIsRealPositive) {
  Rng rng(2);
  const HermitianOperatord h(random_hermitian(5, rng));
  for (Eigen::Index c = 0; c < 5; ++c) {
    const auto col = h.eigenvectors().col(c);
    Eigen::Index pivot = 0;
    col.cwiseAbs().maxCoeff(&pivot);
    EXPECT_NEAR(col(pivot).imag(), 0.0, 1e-14);
    EXPECT_GT(col(pivot).real(), 0.0);
  }
}

TEST(HermitianOperator, PhaseConventionIsGaugeIndependent) {
  // The same operator written in a rephased basis must give rephased-back vectors.
  Rng rng(3);
  const ComplexMatrixd m = random_hermitian(4, rng);
  const HermitianOperatord a(m);
  const Eigen::VectorXd phases = random_phases(4, rng);
  Eigen::VectorXcd diag(4);
  for (int n = 0; n < 4; ++n) diag(n) = std::exp(cd(0.0, phases(n)));
  const ComplexMatrixd p = diag.asDiagonal();
  const HermitianOperatord b(ComplexMatrixd(p * m * p.adjoint()));
  EXPECT_LT((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
  // Rephasing can change which component is largest only through ties, not here.
  const ComplexMatrixd back = p.adjoint() * b.eigenvectors();
  for (int c = 0; c < 4; ++c) {
    const cd overlap = a.eigenvectors().col(c).dot(back.col(c));
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-10);
  }
}

TEST(HermitianOperator, FlagsDegenerateSpectrum) {
  ComplexMatrixd m = ComplexMatrixd::Zero(3, 3);
  m.diagonal() << 1.0, 1.0, 2.0;
  const HermitianOperatord h(m);
  EXPECT_TRUE(h.has_degenerate_spectrum());
  EXPECT_TRUE(h.eigenvectors().isApprox(ComplexMatrixd::Identity(3, 3), 1e-14));
  EXPECT_DOUBLE_EQ(h.spectral_range(), 1.0);

  m.diagonal() << 1.0, 1.5, 2.0;
  EXPECT_FALSE(HermitianOperatord(m).has_degenerate_spectrum());
}

TEST(HermitianOperator, RejectsInvalidInput) {
  ComplexMatrixd m(2, 2);
  m << 1.0, cd(0.0, 1.0), cd(0.0, 1.0), 1.0;
  EXPECT_THROW(HermitianOperatord{m}, NotHermitian);
  EXPECT_THROW(HermitianOperatord{ComplexMatrixd(2, 3)}, DimensionMismatch);
  EXPECT_THROW(HermitianOperatord{ComplexMatrixd(0, 0)}, DimensionMismatch);
  m << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0;
  EXPECT_THROW(HermitianOperatord{m}, InvalidArgument);
}

TEST(HermitianOperator, AcceptsRoundoffLevelAsymmetry) {
  Rng rng(4);
  ComplexMatrixd m = random_hermitian(3, rng, 1e3);
  m(0, 1) += cd(1e-13, 0.0);
  EXPECT_NO_THROW(HermitianOperatord{m});
}

TEST(HermitianOperator, ToEigenbasisDiagonalizes) {
  Rng rng(5);
  const HermitianOperatord h(random_hermitian(4, rng));
  const ComplexMatrixd diag = h.to_eigenbasis(h.matrix());
  EXPECT_LT(max_abs(ComplexMatrixd(diag - ComplexMatrixd(h.eigenvalues().cast<cd>().asDiagonal()))),
            1e-12);
}

TEST(MatrixFunction, MatchesEigenMatrixExponential) {
  Rng rng(6);
  for (Eigen::Index d = 2; d <= 5; ++d) {
    const ComplexMatrixd m = random_hermitian(d, rng, 2.0);
    const HermitianOperatord h(m);
    const double t = 0.7;
    const ComplexMatrixd ours =
        matrix_function(h, [t](double e) { return std::exp(cd(0.0, -t * e)); });
    const ComplexMatrixd reference = (cd(0.0, -t) * m).exp();
    EXPECT_LT(max_abs(ComplexMatrixd(ours - reference)), 1e-12);
    EXPECT_TRUE(is_unitary(ours));
  }
}

TEST(UnitaryOperator, ValidatesAndAdjoints) {
  Rng rng(7);
  const UnitaryOperatord v(haar_unitary(4, rng));
  EXPECT_LT(max_abs(ComplexMatrixd(v.matrix() * v.adjoint().matrix() -
                                   ComplexMatrixd::Identity(4, 4))),
            1e-12);
  ComplexMatrixd bad = v.matrix();
  bad(0, 0) *= 1.01;
  EXPECT_THROW(UnitaryOperatord{bad}, NotUnitary);
  EXPECT_THROW(UnitaryOperatord{ComplexMatrixd(2, 3)}, DimensionMismatch);
  EXPECT_TRUE(UnitaryOperatord::identity(3).matrix().isIdentity());
}

TEST(TransitionAmplitudes, AreUnitaryAndMatchBasisChange) {
  Rng rng(8);
  const HermitianOperatord h0(random_hermitian(3, rng));
  const HermitianOperatord h1(random_hermitian(3, rng));
  const UnitaryOperatord v(haar_unitary(3, rng));
  const ComplexMatrixd a = transition_amplitudes(v, h0, h1);
  EXPECT_TRUE(is_unitary(a));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(a(j, i) - h1.eigenvectors().col(j).dot(v.matrix() * h0.eigenvectors().col(i))),
                  0.0, 1e-13);
  EXPECT_THROW(transition_amplitudes(v, h0, HermitianOperatord(random_hermitian(2, rng))),
               DimensionMismatch);
}

TEST(QLinalg, TemplatedOnScalar) {
  using Mf = ComplexMatrix<long double>;
  Mf m(2, 2);
  m << 1.0L, std::complex<long double>(0.0L, 0.5L), std::complex<long double>(0.0L, -0.5L), -1.0L;
  const HermitianOperator<long double> h(m);
  EXPECT_NEAR(static_cast<double>(h.eigenvalues()(1)), std::sqrt(1.25), 1e-15);
}
