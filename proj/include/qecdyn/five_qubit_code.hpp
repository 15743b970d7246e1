#pragma once

// The [[5,1,3]] code: stabilizers, logical states, syndrome projectors and the
// lookup-table decoders.

#include "qecdyn/linalg.hpp"
#include "qecdyn/pauli.hpp"

#include <array>
#include <bitset>
#include <string>
#include <string_view>
#include <vector>

namespace qecdyn::code5 {

inline constexpr int kQubits = 5;

/// Bit i is the outcome of S_{i+1} (0: +1, 1: -1). Printed with S1 leftmost.
struct Syndrome {
  std::bitset<4> bits;

  /// Table index with S1 as the most-significant bit ("0001" -> 1).
  int index() const;
  static Syndrome from_index(int index);
  /// Parses "0101"-style strings, S1 first.
  static Syndrome parse(std::string_view s);
  std::string str() const;
  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

/// S1..S4 = XZZXI, IXZZX, XIXZZ, ZXIXZ.
const std::array<PauliString, 4>& stabilizers();
std::vector<PauliString> stabilizer_list();
const PauliString& logical_x();
const PauliString& logical_z();
/// ZZZZZ XXXXX, up to phase.
const PauliString& logical_y();

/// Outcome pattern of an error: bit i set when it anticommutes with S_{i+1}.
Syndrome syndrome_of(const PauliString& error);

enum class LogicalState { Zero, One, Plus, Minus, PlusI, MinusI };

inline constexpr std::array<LogicalState, 6> kAllLogicalStates = {
    LogicalState::Zero, LogicalState::One,   LogicalState::Plus,
    LogicalState::Minus, LogicalState::PlusI, LogicalState::MinusI};

/// "0L", "1L", "+L", "-L", "+iL", "-iL".
std::string label(LogicalState s);
/// Accepts the labels above (also the unicode minus variants "−L", "−iL").
LogicalState parse_logical_state(std::string_view label);

/// |0>_L = Pi|00000>/||.|| with the largest-modulus amplitude real positive
/// (lowest basis index on ties); |1>_L = X_L|0>_L; |+-> = (|0> +- |1>)/sqrt2;
/// |+-i> = (|0> +- i|1>)/sqrt2.
const PureState& logical_state(LogicalState s);

/// The code-space state orthogonal to psi: first of X_L psi, Z_L psi, Y_L psi
/// with a non-negligible component orthogonal to psi, Gram-Schmidt reduced and
/// normalized.
PureState orthogonal_logical_state(const PureState& psi);

/// prod_i (I + (-1)^{s_i} S_i)/2.
Matrix syndrome_projector(const Syndrome& s);
/// (I + S1)(I + S2)(I + S3)(I + S4)/16.
const Matrix& code_projector();

enum class DecoderKind { Standard, FullConnectivityZZ, Ring };

/// "standard", "fc_zz", "ring".
DecoderKind parse_decoder_kind(std::string_view name);
std::string decoder_name(DecoderKind kind);

class Decoder {
 public:
  /// Cached immutable instance; the table is checked against the stabilizers
  /// on first construction.
  static const Decoder& get(DecoderKind kind);

  DecoderKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const PauliString& recovery(const Syndrome& s) const {
    return table_[static_cast<std::size_t>(s.index())];
  }
  /// Recovery operators ordered by syndrome index 0000..1111.
  const std::array<PauliString, 16>& table() const { return table_; }

  /// C_s P_s for every syndrome, in table order.
  const std::vector<Matrix>& correction_operators() const { return kraus_; }

 private:
  Decoder(DecoderKind kind, std::array<PauliString, 16> table);

  DecoderKind kind_;
  std::string name_;
  std::array<PauliString, 16> table_;
  std::vector<Matrix> kraus_;
};

/// Throws NumericalError if any recovery's syndrome differs from its table key.
void check_decoder_consistency(const std::array<PauliString, 16>& table);

/// The 16 recovery operators; each is the error it undoes.
std::vector<PauliString> correctable_set(const Decoder& decoder);

/// rho^P = sum_s C_s P_s rho P_s C_s.
DensityMatrix correction_cycle(const DensityMatrix& rho, const Decoder& decoder);

/// Column-stacked superoperator of correction_cycle.
Superoperator correction_superoperator(const Decoder& decoder);

}  // namespace qecdyn::code5
