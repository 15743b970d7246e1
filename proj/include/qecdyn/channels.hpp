#pragma once

// Kraus channels for the individual Lindblad terms and the composite-channel
// approximation built from them.

#include "qecdyn/linalg.hpp"
#include "qecdyn/noise_model.hpp"

#include <utility>
#include <vector>

namespace qecdyn {

/// rho -> sum_k E_k rho E_k^dagger on the ordered qubits `acts_on`
/// (acts_on[0] is the most-significant factor of each E_k).
struct KrausChannel {
  std::vector<Matrix> operators;
  std::vector<int> acts_on;
  double duration = 0.0;

  int arity() const { return static_cast<int>(acts_on.size()); }
  /// max |sum_k E_k^dagger E_k - I|.
  double completeness_error() const;
};

/// diag(1, e^{-iht}).
KrausChannel unitary_phase_channel_1q(double h, double t, int qubit = 0);
/// diag(e^{-i zeta t/2}, e^{i zeta t/2}, e^{i zeta t/2}, e^{-i zeta t/2}).
KrausChannel zz_channel_2q(double zeta, double t, int a = 0, int b = 1);
/// exp(-i t zeta/2 (I - Z_a)(I - Z_b)) = diag(1, 1, 1, e^{-2 i zeta t}).
KrausChannel nonsym_zz_channel_2q(double zeta, double t, int a = 0, int b = 1);
/// exp(-i t J/2 (XX + YY)): cos(Jt), -i sin(Jt) on the {|01>, |10>} block.
KrausChannel xy_channel_2q(double j, double t, int a = 0, int b = 1);
/// Amplitude plus phase damping with p_ad = 1 - e^{-g0 t}, p_pd = 1 - e^{-4 g2 t}.
KrausChannel damping_channel(double g0, double g2, double t, int qubit = 0);
/// U1 composed with damping (the two commute).
KrausChannel combined_1q_channel(double h, double g0, double g2, double t, int qubit = 0);

/// The channel `second` o `first`, acting on the union of both qubit lists
/// (first's qubits in order, then any new qubits of second).
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

/// Kraus operators of `c` embedded on the ordered qubit list `qubits`, which
/// must contain all of c.acts_on.
KrausChannel embed(const KrausChannel& c, const std::vector<int>& qubits);

/// Applies `c` to an n-qubit density matrix (n inferred from rho).
DensityMatrix apply_channel(const KrausChannel& c, const DensityMatrix& rho);

/// sum_k conj(E_k) (x) E_k on the channel's own qubits, column stacking.
Superoperator channel_to_superoperator(const KrausChannel& c);
/// Same, embedded on an n-qubit register.
Superoperator channel_to_superoperator(const KrausChannel& c, int n_qubits);

/// Commutation test through Kraus products on the union of acted qubits:
/// || sum conj(A_a B_b) (x) A_a B_b - sum conj(B_b A_a) (x) B_b A_a ||_max <= tol.
bool channels_commute(const KrausChannel& a, const KrausChannel& b, double tol = 1e-10);
/// max-norm of the superoperator commutator [A^, B^] on the union of acted qubits.
double superoperator_commutator_norm(const KrausChannel& a, const KrausChannel& b);

/// Application order of the composite approximation.
struct CompositeOrder {
  bool one_qubit_first = true;
  /// Explicit edge permutation (unordered pairs); empty means lexicographic.
  std::vector<std::pair<int, int>> edge_order;

  /// 1Q channels then 2Q channels ("composite 1").
  static CompositeOrder order1() { return {true, {}}; }
  /// 2Q channels then 1Q channels ("composite 2").
  static CompositeOrder order2() { return {false, {}}; }
  /// 1Q channels first, then edge groups in `group_order`. Group g holds the
  /// edges (g, m) with m > g, applied by increasing m.
  static CompositeOrder edge_groups(const std::vector<int>& group_order, int n_qubits);
};

/// Channels of the composite approximation in application order: the combined
/// 1Q channel on every qubit and the 2Q channel on every edge. NonSym1QAdjusted
/// models are first rewritten in the symmetric frame; NonSym2QAdjusted models
/// use nonsym_zz_channel_2q.
std::vector<KrausChannel> composite_channels(const DeviceModel& model, double t,
                                             const CompositeOrder& order = CompositeOrder::order1());

DensityMatrix composite_apply(const DeviceModel& model, double t, const CompositeOrder& order,
                              const DensityMatrix& rho0);

/// Applies the ordered channel list once.
DensityMatrix apply_channels(const std::vector<KrausChannel>& channels, const DensityMatrix& rho);

}  // namespace qecdyn
