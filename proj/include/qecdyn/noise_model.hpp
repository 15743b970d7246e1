#pragma once

// Physical noise parameters of an idle qubit register and the Lindblad
// generator they define.
//
// Units: angular frequencies in rad/us, rates in 1/us, times in us. Values
// quoted as nu in kHz convert with khz_to_angular (2 pi nu 1e-3).

#include "qecdyn/linalg.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace qecdyn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// nu [kHz] -> 2 pi nu [rad/us].
constexpr double khz_to_angular(double khz) { return kTwoPi * khz * 1e-3; }
constexpr double angular_to_khz(double omega) { return omega / (kTwoPi * 1e-3); }

enum class CouplingKind { ZZ, XY };

/// Reference frame of the crosstalk Hamiltonian.
///  Symmetric:        H_i = h/2 (I - Z_i),   V_ij = zeta/2 Z_i Z_j
///  NonSym2QAdjusted: h holds h~, V~_ij = zeta/2 (I - Z_i)(I - Z_j)
///  NonSym1QAdjusted: h holds h~, represented as Symmetric with
///                    h_i = h~_i + sum_j zeta_ij (see to_symmetric_frame).
enum class Frame { Symmetric, NonSym2QAdjusted, NonSym1QAdjusted };

enum class Connectivity { AllToAll, Ring };

struct Coupling {
  int a = 0;
  int b = 1;
  double strength = 0.0;  // zeta or J, rad/us
  CouplingKind kind = CouplingKind::ZZ;
};

struct QubitParams {
  double h = 0.0;   // detuning, rad/us
  double g0 = 0.0;  // amplitude damping rate, 1/us
  double g2 = 0.0;  // pure dephasing rate, 1/us
};

struct DeviceModel {
  int n_qubits = 0;
  std::vector<double> h;
  std::vector<double> g0;
  std::vector<double> g2;
  std::vector<Coupling> edges;
  Frame frame = Frame::Symmetric;

  /// Throws ValidationError on size mismatches, negative rates, invalid or
  /// duplicate edges.
  void validate() const;

  QubitParams qubit(int q) const;
  /// Number of coupled neighbours of each qubit.
  std::vector<int> degrees() const;
  bool has_crosstalk() const;
};

/// Unordered qubit pairs of a preset connectivity, lexicographically sorted.
/// Ring couples i with i+1 mod n.
std::vector<std::pair<int, int>> connectivity_edges(Connectivity connectivity, int n_qubits);

/// Identical parameters on every qubit and every edge of `connectivity`.
DeviceModel make_uniform_model(int n_qubits, const QubitParams& qubit, double coupling,
                               Connectivity connectivity = Connectivity::AllToAll,
                               CouplingKind kind = CouplingKind::ZZ);

/// Rewrites a NonSym1QAdjusted model as the equivalent Symmetric one.
/// Other frames are returned unchanged.
DeviceModel to_symmetric_frame(const DeviceModel& model);

/// Coherence times; kInfinity means the process is absent.
struct RateSpec {
  double t1 = kInfinity;
  double t2 = kInfinity;
};

struct Rates {
  double g0 = 0.0;
  double g2 = 0.0;
};

/// g0 = 1/T1, g2 = 1/(2 T_phi) with 1/T_phi = 1/T2 - 1/(2 T1).
/// Throws ValidationError unless T1, T2 > 0 and T2 <= 2 T1.
Rates rates_from_t1_t2(const RateSpec& spec);
RateSpec t1_t2_from_rates(const Rates& rates);

Matrix build_hamiltonian(const DeviceModel& model);

/// Precomputed right-hand side of the master equation
///   d rho/dt = -i[H, rho] + sum_q g0_q D[sigma+_q] rho + sum_q g2_q (Z_q rho Z_q - rho),
/// with sigma+ = |0><1| driving towards |0>.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const DeviceModel& model);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return dim_; }

  /// out = L(rho). `out` is resized as needed and must not alias rho.
  void apply(const Matrix& rho, Matrix& out) const;
  Matrix operator()(const Matrix& rho) const;

  /// Column-stacked matrix of L, 4^N x 4^N.
  Superoperator superoperator() const;

 private:
  int n_qubits_;
  Eigen::Index dim_;
  bool diagonal_hamiltonian_;
  Matrix hamiltonian_;
  // Diagonal part of L acting entrywise: -i(E_r - E_c) (when H is diagonal)
  // minus the anticommutator and dephasing decay.
  Matrix entrywise_;
  std::vector<std::pair<std::uint32_t, double>> jumps_;  // (bit mask, g0)
};

DensityMatrix lindblad_action(const DeviceModel& model, const DensityMatrix& rho);

/// Parameter distributions for inhomogeneous devices (defaults: T1 ~ U[50,150] us,
/// T_phi ~ 20 + Exp(mean 50) us, h/2pi ~ N(0, 10) kHz, zeta/2pi ~ N(-30, 10) kHz).
struct InhomogeneousSpec {
  int n_qubits = 5;
  Connectivity connectivity = Connectivity::AllToAll;
  double t1_min_us = 50.0;
  double t1_max_us = 150.0;
  double tphi_offset_us = 20.0;
  double tphi_exp_mean_us = 50.0;
  double h_mean_khz = 0.0;
  double h_std_khz = 10.0;
  double zeta_mean_khz = -30.0;
  double zeta_std_khz = 10.0;
};

/// Deterministic in `seed` on every platform; see random.hpp for the generator.
DeviceModel sample_inhomogeneous(std::uint64_t seed, const InhomogeneousSpec& spec = {});

}  // namespace qecdyn
