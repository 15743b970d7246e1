#pragma once

// Pauli channels and the Pauli approximation of composite channels, including
// single-qubit surrogates for ZZ crosstalk.

#include "qecdyn/channels.hpp"
#include "qecdyn/noise_model.hpp"
#include "qecdyn/pauli.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qecdyn {

/// rho -> sum_sigma p_sigma sigma rho sigma, with Pauli strings on `acts_on`.
struct PauliChannel {
  std::vector<int> acts_on;
  std::map<PauliString, double> probs;

  int arity() const { return static_cast<int>(acts_on.size()); }
  /// 0 for strings absent from the map.
  double probability(const PauliString& p) const;
  double total() const;
};

/// Clamps entries in [-1e-12, 0) to zero, then checks lengths, non-negativity
/// and normalization (1 +- 1e-10). Throws NumericalError on violation.
PauliChannel make_pauli_channel(std::vector<int> acts_on, std::map<PauliString, double> probs);

/// All 4^n strings in lexicographic I < X < Y < Z order.
std::vector<PauliString> all_pauli_strings(int n_qubits);

/// Diagonal of the Pauli-basis expansion: p_sigma = sum_k |tr(sigma E_k)/2^n|^2.
PauliChannel pauli_project(const KrausChannel& c);
/// Identity map for Pauli channels (already diagonal).
PauliChannel pauli_project(const PauliChannel& c);

/// {II: cos^2(zeta t/2), ZZ: sin^2(zeta t/2)}.
PauliChannel pauli_2q_zz(double zeta, double t, int a = 0, int b = 1);
/// c_x = c_y = p_ad/4, c_z = 1/2 - gamma cos(ht)/2 - p_ad/4,
/// gamma = sqrt(1 - p_pd) sqrt(1 - p_ad).
PauliChannel pauli_1q(double h, double g0, double g2, double t, int qubit = 0);

/// `second` o `first` on the union of their qubits.
PauliChannel compose(const PauliChannel& first, const PauliChannel& second);

/// (whole, split^2) for U = diag(1, e^{i phi}): projecting U directly versus
/// projecting U^{1/2} and applying the result twice.
std::pair<PauliChannel, PauliChannel> split_vs_whole_demo(double phi);

/// K~^(n): weights C(n,k)/2^n on diag(e^{-i zeta t (n-2k)/2}, e^{i zeta t (n-2k)/2}).
KrausChannel one_q_crosstalk_channel(double zeta, double t, int n, int qubit = 0);
/// Closed-form Pauli channel of combined_1q o K~^(n).
PauliChannel pauli_1q_with_crosstalk(double h, double g0, double g2, double zeta, double t, int n,
                                     int qubit = 0);

/// True iff sigma and nu have the same commutation pattern with every stabilizer.
bool surviving_pair(const std::vector<PauliString>& stabilizers, const PauliString& sigma,
                    const PauliString& nu);

KrausChannel to_kraus(const PauliChannel& c);
DensityMatrix apply_pauli_channel(const PauliChannel& c, const DensityMatrix& rho);
Superoperator pauli_channel_superoperator(const PauliChannel& c, int n_qubits);

/// Per-channel Pauli approximation of the composite channels of `model`: the
/// 1Q closed form on every qubit and the projected 2Q channel on every edge,
/// with each 2Q coupling multiplied by `crosstalk_scale`.
std::vector<PauliChannel> pauli_channels(const DeviceModel& model, double t,
                                         double crosstalk_scale = 1.0);
DensityMatrix pauli_apply(const DeviceModel& model, double t, const DensityMatrix& rho0,
                          double crosstalk_scale = 1.0);

/// Symmetric-frame model with the same dynamics (both nonsymmetric frames
/// rewritten with h_i = h~_i + sum_j zeta_ij).
DeviceModel symmetric_equivalent(const DeviceModel& model);

/// 1Q surrogate: combined 1Q channel followed by K~^(1)(zeta_e) on both ends of
/// every ZZ edge (K~^(n) for a uniform coupling of degree n). XY edges are rejected.
std::vector<KrausChannel> one_q_surrogate_channels(const DeviceModel& model, double t);
/// Pauli projection of each qubit's surrogate channel.
std::vector<PauliChannel> one_q_surrogate_pauli_channels(const DeviceModel& model, double t);

}  // namespace qecdyn
