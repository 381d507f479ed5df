#pragma once

// Dense complex linear algebra for small Hilbert spaces.
//
// Everything here is templated on the real scalar type; the rest of the
// library works with the double-precision aliases at the bottom.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "workstats/errors.hpp"

namespace workstats {

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double orthonormal = 1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double degenerate_gap = 1e-10;
inline constexpr double positivity = 1e-12;
inline constexpr double rank_one = 1e-10;
} // namespace tol

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Largest entrywise modulus.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::RealScalar(0);
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j)))) return false;
  return true;
}

/// Hermiticity defect scaled so that O(1) operators use the absolute 1e-12 bound.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tolerance = tol::hermitian) {
  if (m.rows() != m.cols()) return false;
  using Real = typename Derived::RealScalar;
  const Real scale = std::max(Real(1), max_abs(m));
  return max_abs(m - m.adjoint()) <= Real(tolerance) * scale;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tolerance = tol::unitary) {
  if (m.rows() != m.cols()) return false;
  using Matrix = ComplexMatrix<typename Derived::RealScalar>;
  const Matrix defect = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return max_abs(defect) <= tolerance;
}

/// Columns orthonormal within `tolerance`.
template <typename Derived>
bool is_orthonormal_basis(const Eigen::MatrixBase<Derived>& columns,
                          double tolerance = tol::orthonormal) {
  if (columns.rows() != columns.cols()) return false;
  using Matrix = ComplexMatrix<typename Derived::RealScalar>;
  const Matrix gram = columns.adjoint() * columns;
  return max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) <= tolerance;
}

/// Rotate a column so its largest-magnitude entry is real and positive. The first
/// entry within 1e-10 of the maximum wins, so roundoff cannot flip the choice.
template <typename Real>
Eigen::Index fix_phase(ComplexMatrix<Real>& vectors, Eigen::Index column) {
  auto v = vectors.col(column);
  const Real largest = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= largest - Real(1e-10)) {
      pivot = i;
      break;
    }
  }
  if (largest > Real(0)) v *= std::conj(v(pivot)) / std::abs(v(pivot));
  return pivot;
}

/// Energy observable with its spectral decomposition.
///
/// Eigenvalues are ascending. Each eigenvector has its largest-magnitude
/// component real and positive. Within a degenerate cluster the vectors are
/// ordered by the index of that component, then by solver order.
template <typename Real>
class HermitianOperator {
public:
  using Matrix = ComplexMatrix<Real>;
  using Vector = RealVector<Real>;

  explicit HermitianOperator(const Matrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols())
      throw DimensionMismatch("HermitianOperator: matrix must be square and non-empty");
    if (!all_finite(m)) throw InvalidArgument("HermitianOperator: non-finite entry");
    if (!is_hermitian(m))
      throw NotHermitian("HermitianOperator: max |M - M^dagger| = " +
                         std::to_string(static_cast<double>(max_abs(m - m.adjoint()))));
    matrix_ = (m + m.adjoint()) / Real(2);

    const Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
    if (solver.info() != Eigen::Success)
      throw NumericalError("HermitianOperator: eigensolver did not converge");

    const Eigen::Index d = matrix_.rows();
    Matrix vectors = solver.eigenvectors();
    std::vector<Eigen::Index> pivots(static_cast<std::size_t>(d));
    for (Eigen::Index c = 0; c < d; ++c)
      pivots[static_cast<std::size_t>(c)] = fix_phase<Real>(vectors, c);

    const Vector& values = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    // Values are already ascending; only clusters closer than the degeneracy
    // tolerance get reordered.
    for (std::size_t start = 0; start < order.size();) {
      std::size_t stop = start + 1;
      while (stop < order.size() &&
             values(order[stop]) - values(order[stop - 1]) < Real(tol::degenerate_gap))
        ++stop;
      if (stop - start > 1) {
        degenerate_ = true;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop),
                         [&](Eigen::Index a, Eigen::Index b) {
                           return pivots[static_cast<std::size_t>(a)] <
                                  pivots[static_cast<std::size_t>(b)];
                         });
      }
      start = stop;
    }

    eigenvalues_.resize(d);
    eigenvectors_.resize(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      eigenvalues_(c) = values(order[static_cast<std::size_t>(c)]);
      eigenvectors_.col(c) = vectors.col(order[static_cast<std::size_t>(c)]);
    }
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  /// Column c is the eigenvector of eigenvalues()(c).
  const Matrix& eigenvectors() const { return eigenvectors_; }
  /// Some pair of eigenvalues is closer than 1e-10.
  bool has_degenerate_spectrum() const { return degenerate_; }

  Real spectral_range() const { return eigenvalues_(dim() - 1) - eigenvalues_(0); }

  /// A expressed in this operator's eigenbasis: <e_i|A|e_k>.
  template <typename Derived>
  Matrix to_eigenbasis(const Eigen::MatrixBase<Derived>& a) const {
    return eigenvectors_.adjoint() * a * eigenvectors_;
  }

private:
  Matrix matrix_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
  bool degenerate_ = false;
};

template <typename Real>
HermitianOperator<Real> spectral_decompose(const ComplexMatrix<Real>& m) {
  return HermitianOperator<Real>(m);
}

/// sum_i f(e_i) |e_i><e_i| for any callable f: Real -> complex-or-real.
template <typename Real, typename F>
ComplexMatrix<Real> matrix_function(const HermitianOperator<Real>& h, F&& f) {
  const Eigen::Index d = h.dim();
  ComplexVector<Real> values(d);
  for (Eigen::Index i = 0; i < d; ++i)
    values(i) = std::complex<Real>(f(h.eigenvalues()(i)));
  return h.eigenvectors() * values.asDiagonal() * h.eigenvectors().adjoint();
}

template <typename Real>
class UnitaryOperator {
public:
  using Matrix = ComplexMatrix<Real>;

  explicit UnitaryOperator(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
      throw DimensionMismatch("UnitaryOperator: matrix must be square and non-empty");
    if (!all_finite(matrix_)) throw InvalidArgument("UnitaryOperator: non-finite entry");
    if (!is_unitary(matrix_))
      throw NotUnitary("UnitaryOperator: |U^dagger U - 1| exceeds 1e-10");
  }

  static UnitaryOperator identity(Eigen::Index d) { return UnitaryOperator(Matrix::Identity(d, d)); }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  UnitaryOperator adjoint() const { return UnitaryOperator(matrix_.adjoint()); }

private:
  Matrix matrix_;
};

/// <e^out_j| V |e^in_i>, the drive between the initial and final energy bases.
template <typename Real>
ComplexMatrix<Real> transition_amplitudes(const UnitaryOperator<Real>& v,
                                          const HermitianOperator<Real>& h_in,
                                          const HermitianOperator<Real>& h_out) {
  if (v.dim() != h_in.dim() || v.dim() != h_out.dim())
    throw DimensionMismatch("transition_amplitudes: dimensions disagree");
  return h_out.eigenvectors().adjoint() * v.matrix() * h_in.eigenvectors();
}

using ComplexMatrixd = ComplexMatrix<double>;
using ComplexVectord = ComplexVector<double>;
using HermitianOperatord = HermitianOperator<double>;
using UnitaryOperatord = UnitaryOperator<double>;

} // namespace workstats
