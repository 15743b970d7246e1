#include "qecdyn/five_qubit_code.hpp"

#include "qecdyn/errors.hpp"

#include <cmath>
#include <map>

namespace qecdyn::code5 {

namespace {

// Single-letter-per-qubit shorthand used by the recovery tables below: "X0"
// is X on qubit 0, "Z1Z4" is Z on qubits 1 and 4.
PauliString recovery_string(std::string_view spec) {
  std::string s(kQubits, 'I');
  for (std::size_t i = 0; i + 1 < spec.size(); i += 2) {
    const int q = spec[i + 1] - '0';
    if (q < 0 || q >= kQubits) throw ValidationError("bad recovery operator " + std::string(spec));
    s[static_cast<std::size_t>(q)] = spec[i];
  }
  return PauliString(s);
}

std::array<PauliString, 16> make_table(const std::array<std::string_view, 16>& specs) {
  std::array<PauliString, 16> table;
  for (std::size_t i = 0; i < 16; ++i) table[i] = specs[i] == "I" ? PauliString::identity(kQubits)
                                                                  : recovery_string(specs[i]);
  return table;
}

// Recovery tables indexed by syndrome 0000..1111 (S1 leftmost).
constexpr std::array<std::string_view, 16> kStandard = {
    "I",  "X0", "Z2", "X4", "Z4", "Z1", "X3", "Y4",
    "X1", "Z3", "Z0", "Y0", "X2", "Y1", "Y2", "Y3"};
constexpr std::array<std::string_view, 16> kFullConnectivityZZ = {
    "I",    "Z1Z4", "Z2",   "Z0Z3", "Z4",   "Z1",   "Z2Z4", "Z1Z2",
    "Z0Z2", "Z3",   "Z0",   "Z2Z3", "Z1Z3", "Z3Z4", "Z0Z4", "Z0Z1"};
constexpr std::array<std::string_view, 16> kRing = {
    "I",  "X0", "Z2", "X4", "Z4", "Z1",   "X3",   "Z1Z2",
    "X1", "Z3", "Z0", "Z2Z3", "X2", "Z3Z4", "Z0Z4", "Z0Z1"};

PureState normalized(const PureState& v) { return v / v.norm(); }

std::array<PureState, 6> build_logical_states() {
  PureState zeros = PureState::Zero(1 << kQubits);
  zeros(0) = 1.0;
  PureState zero = normalized(code_projector() * zeros);
  Eigen::Index largest = 0;
  for (Eigen::Index i = 1; i < zero.size(); ++i) {
    if (std::abs(zero(i)) > std::abs(zero(largest)) + 1e-12) largest = i;
  }
  zero *= std::conj(zero(largest)) / std::abs(zero(largest));
  const PureState one = apply_pauli(logical_x(), zero);
  const double r = 1.0 / std::sqrt(2.0);
  return {zero,
          one,
          normalized(r * (zero + one)),
          normalized(r * (zero - one)),
          normalized(r * (zero + kI * one)),
          normalized(r * (zero - kI * one))};
}

}  // namespace

int Syndrome::index() const {
  return (bits[0] ? 8 : 0) | (bits[1] ? 4 : 0) | (bits[2] ? 2 : 0) | (bits[3] ? 1 : 0);
}

Syndrome Syndrome::from_index(int index) {
  if (index < 0 || index > 15) throw ValidationError("syndrome index out of range");
  Syndrome s;
  for (int i = 0; i < 4; ++i) s.bits[static_cast<std::size_t>(i)] = (index >> (3 - i)) & 1;
  return s;
}

Syndrome Syndrome::parse(std::string_view text) {
  if (text.size() != 4) throw ValidationError("syndrome must have 4 bits: " + std::string(text));
  Syndrome s;
  for (std::size_t i = 0; i < 4; ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw ValidationError("syndrome must be a 0/1 string: " + std::string(text));
    }
    s.bits[i] = text[i] == '1';
  }
  return s;
}

std::string Syndrome::str() const {
  std::string out(4, '0');
  for (std::size_t i = 0; i < 4; ++i) out[i] = bits[i] ? '1' : '0';
  return out;
}

const std::array<PauliString, 4>& stabilizers() {
  static const std::array<PauliString, 4> s = {PauliString("XZZXI"), PauliString("IXZZX"),
                                               PauliString("XIXZZ"), PauliString("ZXIXZ")};
  return s;
}

std::vector<PauliString> stabilizer_list() {
  return {stabilizers().begin(), stabilizers().end()};
}

const PauliString& logical_x() {
  static const PauliString p("XXXXX");
  return p;
}

const PauliString& logical_z() {
  static const PauliString p("ZZZZZ");
  return p;
}

const PauliString& logical_y() {
  static const PauliString p("YYYYY");
  return p;
}

Syndrome syndrome_of(const PauliString& error) {
  if (error.size() != kQubits) throw ValidationError("error must act on 5 qubits");
  Syndrome s;
  for (std::size_t i = 0; i < 4; ++i) s.bits[i] = !stabilizers()[i].commutes_with(error);
  return s;
}

std::string label(LogicalState s) {
  switch (s) {
    case LogicalState::Zero: return "0L";
    case LogicalState::One: return "1L";
    case LogicalState::Plus: return "+L";
    case LogicalState::Minus: return "-L";
    case LogicalState::PlusI: return "+iL";
    case LogicalState::MinusI: return "-iL";
  }
  return "?";
}

LogicalState parse_logical_state(std::string_view text) {
  static const std::map<std::string, LogicalState, std::less<>> names = {
      {"0L", LogicalState::Zero},    {"1L", LogicalState::One},
      {"+L", LogicalState::Plus},    {"-L", LogicalState::Minus},
      {"−L", LogicalState::Minus}, {"+iL", LogicalState::PlusI},
      {"-iL", LogicalState::MinusI}, {"−iL", LogicalState::MinusI}};
  const auto it = names.find(text);
  if (it == names.end()) throw ValidationError("unknown logical state '" + std::string(text) + "'");
  return it->second;
}

const PureState& logical_state(LogicalState s) {
  static const std::array<PureState, 6> states = build_logical_states();
  return states[static_cast<std::size_t>(s)];
}

PureState orthogonal_logical_state(const PureState& psi) {
  for (const auto* p : {&logical_x(), &logical_z(), &logical_y()}) {
    PureState v = apply_pauli(*p, psi);
    v -= psi.dot(v) * psi;
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  throw NumericalError("no logical state orthogonal to the given state");
}

Matrix syndrome_projector(const Syndrome& s) {
  const Eigen::Index d = Eigen::Index{1} << kQubits;
  Matrix p = Matrix::Identity(d, d);
  for (std::size_t i = 0; i < 4; ++i) {
    const double sign = s.bits[i] ? -1.0 : 1.0;
    const Matrix factor = 0.5 * (Matrix::Identity(d, d) + sign * pauli_matrix(stabilizers()[i]));
    p = p * factor;
  }
  return p;
}

const Matrix& code_projector() {
  static const Matrix p = syndrome_projector(Syndrome{});
  return p;
}

DecoderKind parse_decoder_kind(std::string_view name) {
  if (name == "standard") return DecoderKind::Standard;
  if (name == "fc_zz") return DecoderKind::FullConnectivityZZ;
  if (name == "ring") return DecoderKind::Ring;
  throw ValidationError("unknown decoder '" + std::string(name) +
                        "' (expected standard, fc_zz or ring)");
}

std::string decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::Standard: return "standard";
    case DecoderKind::FullConnectivityZZ: return "fc_zz";
    case DecoderKind::Ring: return "ring";
  }
  return "?";
}

void check_decoder_consistency(const std::array<PauliString, 16>& table) {
  for (int i = 0; i < 16; ++i) {
    const auto& r = table[static_cast<std::size_t>(i)];
    const Syndrome expected = Syndrome::from_index(i);
    if (!(syndrome_of(r) == expected)) {
      throw NumericalError("recovery " + r.str() + " has syndrome " + syndrome_of(r).str() +
                           " but is listed under " + expected.str());
    }
  }
}

Decoder::Decoder(DecoderKind kind, std::array<PauliString, 16> table)
    : kind_(kind), name_(decoder_name(kind)), table_(std::move(table)) {
  check_decoder_consistency(table_);
  for (int i = 0; i < 16; ++i) {
    const Matrix projector = syndrome_projector(Syndrome::from_index(i));
    kraus_.push_back(pauli_matrix(table_[static_cast<std::size_t>(i)]) * projector);
  }
}

const Decoder& Decoder::get(DecoderKind kind) {
  static const Decoder standard(DecoderKind::Standard, make_table(kStandard));
  static const Decoder fc(DecoderKind::FullConnectivityZZ, make_table(kFullConnectivityZZ));
  static const Decoder ring(DecoderKind::Ring, make_table(kRing));
  switch (kind) {
    case DecoderKind::Standard: return standard;
    case DecoderKind::FullConnectivityZZ: return fc;
    case DecoderKind::Ring: return ring;
  }
  throw ValidationError("invalid decoder kind");
}

std::vector<PauliString> correctable_set(const Decoder& decoder) {
  return {decoder.table().begin(), decoder.table().end()};
}

DensityMatrix correction_cycle(const DensityMatrix& rho, const Decoder& decoder) {
  const Eigen::Index d = Eigen::Index{1} << kQubits;
  if (rho.rows() != d || rho.cols() != d) {
    throw ValidationError("correction_cycle: expected a 5-qubit density matrix");
  }
  DensityMatrix out = DensityMatrix::Zero(d, d);
  Matrix tmp;
  for (const auto& k : decoder.correction_operators()) {
    tmp.noalias() = k * rho;
    out.noalias() += tmp * k.adjoint();
  }
  return out;
}

Superoperator correction_superoperator(const Decoder& decoder) {
  const Eigen::Index d = Eigen::Index{1} << kQubits;
  Superoperator s = Superoperator::Zero(d * d, d * d);
  for (const auto& k : decoder.correction_operators()) s += tensor_product(k.conjugate(), k);
  return s;
}

}  // namespace qecdyn::code5
