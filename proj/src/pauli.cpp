#include "qecdyn/pauli.hpp"

#include "qecdyn/errors.hpp"

#include <bit>

namespace qecdyn {

namespace {

Matrix single_qubit_pauli(char letter) {
  Matrix m = Matrix::Zero(2, 2);
  switch (letter) {
    case 'I':
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 'X':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'Y':
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw ValidationError(std::string("invalid Pauli letter '") + letter + "'");
  }
  return m;
}

// (-1)^popcount(index & mask)
inline double parity_sign(std::uint32_t index, std::uint32_t mask) {
  return (std::popcount(index & mask) & 1) ? -1.0 : 1.0;
}

}  // namespace

PauliString::PauliString(std::string_view letters) : letters_(letters) {
  const int n = size();
  if (n > kMaxQubits) {
    throw ValidationError("Pauli string longer than 10 qubits");
  }
  for (int q = 0; q < n; ++q) {
    const std::uint32_t bit = 1u << (n - 1 - q);
    switch (letters_[static_cast<std::size_t>(q)]) {
      case 'I':
        break;
      case 'X':
        x_mask_ |= bit;
        break;
      case 'Y':
        x_mask_ |= bit;
        z_mask_ |= bit;
        break;
      case 'Z':
        z_mask_ |= bit;
        break;
      default:
        throw ValidationError("invalid Pauli string '" + letters_ + "'");
    }
  }
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(std::string(static_cast<std::size_t>(n_qubits), 'I'));
}

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw ValidationError("qubit index out of range");
  }
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  s[static_cast<std::size_t>(qubit)] = letter;
  return PauliString(s);
}

PauliString PauliString::from_masks(int n, std::uint32_t x, std::uint32_t z) {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) {
    const std::uint32_t bit = 1u << (n - 1 - q);
    const bool has_x = x & bit;
    const bool has_z = z & bit;
    s[static_cast<std::size_t>(q)] = has_x ? (has_z ? 'Y' : 'X') : (has_z ? 'Z' : 'I');
  }
  return PauliString(s);
}

int PauliString::weight() const { return std::popcount(x_mask_ | z_mask_); }

bool PauliString::commutes_with(const PauliString& other) const {
  if (size() != other.size()) {
    throw ValidationError("Pauli strings of different length");
  }
  const auto overlap = (x_mask_ & other.z_mask_) ^ (z_mask_ & other.x_mask_);
  return (std::popcount(overlap) & 1) == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (size() != other.size()) {
    throw ValidationError("Pauli strings of different length");
  }
  return from_masks(size(), x_mask_ ^ other.x_mask_, z_mask_ ^ other.z_mask_);
}

Matrix pauli_matrix(const PauliString& p) {
  Matrix m = Matrix::Identity(1, 1);
  for (char c : p.str()) {
    m = tensor_product(m, single_qubit_pauli(c));
  }
  return m;
}

Vector apply_pauli(const PauliString& p, const Vector& psi) {
  const Eigen::Index dim = Eigen::Index{1} << p.size();
  if (psi.size() != dim) {
    throw std::invalid_argument("apply_pauli: dimension mismatch");
  }
  // Y|b> = i (-1)^b |b^1>, so sigma|c> = i^{#Y} (-1)^{c . z} |c ^ x>.
  const int n_y = std::popcount(p.x_mask() & p.z_mask());
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = kIPowers[n_y % 4];
  Vector out(dim);
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(dim); ++c) {
    out(c ^ p.x_mask()) = global * parity_sign(c, p.z_mask()) * psi(c);
  }
  return out;
}

Matrix conjugate_by_pauli(const PauliString& p, const Matrix& rho) {
  const Eigen::Index dim = Eigen::Index{1} << p.size();
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("conjugate_by_pauli: dimension mismatch");
  }
  const std::uint32_t x = p.x_mask();
  const std::uint32_t z = p.z_mask();
  Matrix out(dim, dim);
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(dim); ++c) {
    const double sc = parity_sign(c, z);
    for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(dim); ++r) {
      out(r ^ x, c ^ x) = (sc * parity_sign(r, z)) * rho(r, c);
    }
  }
  return out;
}

}  // namespace qecdyn
