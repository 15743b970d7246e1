#include "qecdyn/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace qecdyn {

int qubit_count(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim && n <= kMaxQubits) {
    d *= 2;
    ++n;
  }
  if (d != dim || n > kMaxQubits) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not 2^N with N <= 10");
  }
  return n;
}

double fidelity(const PureState& psi, const DensityMatrix& rho) {
  if (rho.rows() != psi.size() || rho.cols() != psi.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Complex f = psi.dot(rho * psi);
  if (std::abs(f.imag()) > 1e-10) {
    throw std::domain_error("fidelity: <psi|rho|psi> has imaginary part " +
                            std::to_string(f.imag()));
  }
  return f.real();
}

DensityMatrix projector(const PureState& psi) { return psi * psi.adjoint(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const Matrix diff = hermitian_part(a - b);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Matrix embed_operator(const Matrix& op, std::span<const int> qubits, int n_qubits) {
  const auto k = static_cast<int>(qubits.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw std::invalid_argument("embed_operator: operator size does not match qubit list");
  }
  std::uint32_t support = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw std::invalid_argument("embed_operator: qubit index out of range");
    }
    const std::uint32_t bit = 1u << (n_qubits - 1 - q);
    if (support & bit) {
      throw std::invalid_argument("embed_operator: repeated qubit index");
    }
    support |= bit;
  }

  const std::uint32_t dim = 1u << n_qubits;
  const auto local_index = [&](std::uint32_t global) {
    std::uint32_t idx = 0;
    for (int q : qubits) {
      idx = (idx << 1) | ((global >> (n_qubits - 1 - q)) & 1u);
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint32_t c = 0; c < dim; ++c) {
    const std::uint32_t lc = local_index(c);
    for (std::uint32_t r = 0; r < dim; ++r) {
      if ((r & ~support) != (c & ~support)) continue;
      out(r, c) = op(local_index(r), lc);
    }
  }
  return out;
}

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho) {
  DensityMatrixCheck check;
  check.hermiticity_error = max_abs_diff(rho, rho.adjoint());
  check.trace_error = std::abs(rho.trace() - Complex{1.0, 0.0});
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(rho), Eigen::EigenvaluesOnly);
  check.min_eigenvalue = solver.eigenvalues().minCoeff();
  return check;
}

bool is_density_matrix(const DensityMatrix& rho, double hermiticity_tol, double trace_tol,
                       double positivity_tol) {
  if (rho.rows() != rho.cols()) return false;
  const auto check = check_density_matrix(rho);
  return check.hermiticity_error <= hermiticity_tol && check.trace_error <= trace_tol &&
         check.min_eigenvalue >= -positivity_tol;
}

}  // namespace qecdyn
