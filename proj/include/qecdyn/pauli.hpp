#pragma once

#include "qecdyn/linalg.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qecdyn {

/// N-qubit Pauli operator without phase, e.g. "XZZXI". Letter i acts on qubit i.
class PauliString {
 public:
  PauliString() = default;
  /// Throws ValidationError on letters outside {I,X,Y,Z} or length > 10.
  explicit PauliString(std::string_view letters);

  static PauliString identity(int n_qubits);
  /// Identity everywhere except `letter` on `qubit`.
  static PauliString single(int n_qubits, int qubit, char letter);

  int size() const { return static_cast<int>(letters_.size()); }
  char operator[](int qubit) const { return letters_[static_cast<std::size_t>(qubit)]; }
  const std::string& str() const { return letters_; }

  // Basis-index masks; qubit q maps to bit (N - 1 - q). Y sets both.
  std::uint32_t x_mask() const { return x_mask_; }
  std::uint32_t z_mask() const { return z_mask_; }

  int weight() const;
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }
  bool commutes_with(const PauliString& other) const;

  /// Product up to phase.
  PauliString operator*(const PauliString& other) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_;
  }
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  static PauliString from_masks(int n, std::uint32_t x, std::uint32_t z);

  std::string letters_;
  std::uint32_t x_mask_ = 0;
  std::uint32_t z_mask_ = 0;
};

/// Dense 2^N x 2^N matrix of the Pauli string.
Matrix pauli_matrix(const PauliString& p);

/// sigma |psi>, including the i phases of Y letters.
Vector apply_pauli(const PauliString& p, const Vector& psi);

/// sigma rho sigma, computed by index permutation and sign flips.
Matrix conjugate_by_pauli(const PauliString& p, const Matrix& rho);

}  // namespace qecdyn
