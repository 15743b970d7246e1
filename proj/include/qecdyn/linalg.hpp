#pragma once

// Dense complex linear algebra shared by every module: matrix aliases,
// Kronecker products, column-stacking vectorization and a few state checks.
//
// Conventions used across the library:
//  * qubit 0 is the most-significant tensor factor (leftmost in a Kronecker
//    chain, highest bit of a basis index);
//  * vectorization is column stacking, so |ABC>> = (C^T (x) A)|B>>.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace qecdyn {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = CMatrixT<double>;
using Vector = CVectorT<double>;

/// 2^N x 2^N Hermitian, unit-trace, positive semidefinite matrix.
using DensityMatrix = Matrix;
/// Unit-norm state vector of dimension 2^N.
using PureState = Vector;
/// Linear map on column-stacked density matrices, 4^N x 4^N.
using Superoperator = Matrix;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr int kMaxQubits = 10;

/// Kronecker product a (x) b; a occupies the most-significant index.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor_product(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

/// Column-stacking vectorization of a square matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vectorize(
    const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("vectorize: matrix must be square");
  }
  return m.derived().eval().reshaped();
}

/// Inverse of vectorize; the length must be a perfect square.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> devectorize(
    const Eigen::MatrixBase<Derived>& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) {
    throw std::invalid_argument("devectorize: length is not a perfect square");
  }
  return v.derived().eval().reshaped(n, n);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(
    const Eigen::MatrixBase<Derived>& m) {
  return (0.5 * (m + m.adjoint())).eval();
}

/// Number of qubits for a register of dimension `dim`; throws unless dim = 2^N.
int qubit_count(Eigen::Index dim);

/// Returns <psi|rho|psi>. Throws on dimension mismatch or when the imaginary
/// part exceeds 1e-10 (rho not Hermitian).
double fidelity(const PureState& psi, const DensityMatrix& rho);

/// Outer product |psi><psi|.
DensityMatrix projector(const PureState& psi);

/// Trace distance 1/2 ||a - b||_1 for Hermitian arguments.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Largest entrywise modulus of (a - b).
template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Embeds an operator on `qubits` (ordered, first = most significant in `op`)
/// into an n-qubit register by tensoring identities on the other qubits.
Matrix embed_operator(const Matrix& op, std::span<const int> qubits, int n_qubits);

struct DensityMatrixCheck {
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double trace_error = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;
};

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho);

/// True when all three invariants hold within the given tolerances.
bool is_density_matrix(const DensityMatrix& rho, double hermiticity_tol = 1e-10,
                       double trace_tol = 1e-8, double positivity_tol = 1e-8);

}  // namespace qecdyn
