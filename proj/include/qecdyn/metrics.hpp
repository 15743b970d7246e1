#pragma once

// Logical failure metrics, approximation dispatch, pseudo-thresholds and
// repeated syndrome-cycle series.

#include "qecdyn/channels.hpp"
#include "qecdyn/five_qubit_code.hpp"
#include "qecdyn/noise_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qecdyn {

/// p_C = sum_j <psi0| C_j rho C_j |psi0> over the decoder's correctable set.
double success_probability(const DensityMatrix& rho, const code5::Decoder& decoder,
                           const PureState& psi0);
/// eta = 1 - p_C.
double failure_eta(const DensityMatrix& rho, const code5::Decoder& decoder, const PureState& psi0);

struct AlphaBeta {
  double alpha = 0.0;
  Complex beta = 0.0;
};

/// alpha = 1 - <psi0|rho|psi0>, beta = <psi0|rho|psi0_perp> for a state already
/// in the code space.
AlphaBeta logical_alpha_beta(const DensityMatrix& corrected, const PureState& psi0);
/// Applies correction_cycle, then logical_alpha_beta.
AlphaBeta corrected_alpha_beta(const DensityMatrix& rho, const code5::Decoder& decoder,
                               const PureState& psi0);

/// |0>, |1>, |+>, |->, |+i>, |-i>.
const std::vector<PureState>& one_qubit_basis_states();

enum class PhysicalNoise { Exact, Pauli };

/// 1 - <psi|E(|psi><psi|)|psi> for a single idle qubit under its 1Q terms only.
double physical_infidelity(const QubitParams& qubit, double t, const PureState& psi,
                           PhysicalNoise noise = PhysicalNoise::Exact);
/// Mean over the six 1Q basis states.
double physical_infidelity_average(const QubitParams& qubit, double t,
                                   PhysicalNoise noise = PhysicalNoise::Exact);
/// physical_infidelity_average averaged over the qubits of `model`.
double model_physical_infidelity(const DeviceModel& model, double t,
                                 PhysicalNoise noise = PhysicalNoise::Exact);

/// A noise approximation. Canonical names: dynamical, composite_order1,
/// composite_order2, composite_xy_order1, composite_xy_order2, trotter(n),
/// pauli, pauli_scaled(f), pauli_scaled(auto), oneq_v1, oneq_pauli.
struct Approximation {
  enum class Kind { Dynamical, Composite, Trotter, Pauli, OneQKraus, OneQPauli };

  Kind kind = Kind::Dynamical;
  CompositeOrder order = CompositeOrder::order1();
  int trotter_steps = 1;
  double crosstalk_scale = 1.0;
  bool auto_scale = false;
  std::string label = "dynamical";

  static Approximation parse(std::string_view text);
  static Approximation dynamical() { return parse("dynamical"); }
  static Approximation composite_order1() { return parse("composite_order1"); }
  static Approximation composite_order2() { return parse("composite_order2"); }
  static Approximation pauli(double scale = 1.0);

  /// Noise on a bare physical qubit under this approximation.
  PhysicalNoise physical_noise() const {
    return kind == Kind::Pauli || kind == Kind::OneQPauli ? PhysicalNoise::Pauli
                                                          : PhysicalNoise::Exact;
  }
};

/// rho(t) for each of the ascending `times` (one integration for dynamical).
/// pauli_scaled(auto) must be resolved to a number before calling.
std::vector<DensityMatrix> evolve_approx(const Approximation& approx, const DeviceModel& model,
                                         std::span<const double> times, const DensityMatrix& rho0,
                                         double tol = 1e-8);
DensityMatrix evolve_approx(const Approximation& approx, const DeviceModel& model, double t,
                            const DensityMatrix& rho0, double tol = 1e-8);

/// Linear map applied to an arbitrary (not necessarily Hermitian) operator.
Matrix evolve_operator(const Approximation& approx, const DeviceModel& model, double t,
                       const Matrix& x, double tol = 1e-8);

/// eta(t) for each state and time: result[s][k].
std::vector<std::vector<double>> eta_curves(const Approximation& approx, const DeviceModel& model,
                                            const code5::Decoder& decoder,
                                            std::span<const code5::LogicalState> states,
                                            std::span<const double> times, double tol = 1e-8);

enum class PhysicalMode { SameApprox, DynamicalPhysical };

struct PseudoThresholdOptions {
  double t_min = 0.01;
  double t_max = 50.0;
  int grid_points = 160;  // log-spaced scan before bisection
  double t_tol = 1e-3;
  double ode_tol = 1e-8;
};

struct PseudoThresholdResult {
  std::optional<double> t_star;  // empty: no sign change on the scan interval
  int crossings = 0;
  std::vector<std::string> warnings;
};

/// Crossing of the six-state mean eta with the physical-qubit infidelity.
PseudoThresholdResult pseudo_threshold(const DeviceModel& model, const Approximation& approx,
                                       const code5::Decoder& decoder, PhysicalMode mode,
                                       const PseudoThresholdOptions& options = {});

/// alpha after one noise cycle of length `cycle_time` followed by correction.
AlphaBeta first_cycle_alpha_beta(const Approximation& approx, const DeviceModel& model,
                                 const code5::Decoder& decoder, double cycle_time,
                                 const PureState& psi0, double tol = 1e-8);

/// Factor f in [1, 2] for which the Pauli approximation with zeta -> f zeta
/// reproduces the dynamical alpha after one cycle (bisection, 60 iterations,
/// tolerance 1e-6 on f). Returns 1 for models without crosstalk and throws
/// NumericalError when [1, 2] does not bracket the match.
double crosstalk_scale_factor(const DeviceModel& model, const code5::Decoder& decoder,
                              double cycle_time, const PureState& psi0, double tol = 1e-8);

struct CycleRecord {
  long cycle = 0;
  double alpha = 0.0;
  double beta_abs = 0.0;
};

enum class CycleMethod { LogicalTransfer, FullSuperoperator };

struct CycleOptions {
  long record_every = 1;  // the final cycle is always recorded
  CycleMethod method = CycleMethod::LogicalTransfer;
  double ode_tol = 1e-8;
  int threads = 1;
};

/// Repeated (noise, syndrome projection, recovery) cycles starting from psi0.
/// LogicalTransfer evolves the four logical matrix units once and iterates the
/// resulting 4x4 map; FullSuperoperator iterates correction o evolution on the
/// full 1024-dimensional vectorized state.
std::vector<CycleRecord> cycle_series(const DeviceModel& model, const code5::Decoder& decoder,
                                      double cycle_time, long n_cycles, const PureState& psi0,
                                      const Approximation& approx, const CycleOptions& options = {});

}  // namespace qecdyn
