#pragma once

#include "qecdyn/channels.hpp"
#include "qecdyn/noise_model.hpp"
#include "qecdyn/ode.hpp"

#include <span>
#include <vector>

namespace qecdyn {

/// rho(t) under the master equation, integrated with DOPRI5 at rtol = atol = tol
/// and max step t/10. The result is symmetrized (rho + rho^dagger)/2.
/// t = 0 returns rho0 unchanged.
DensityMatrix evolve_dynamical(const DensityMatrix& rho0, const DeviceModel& model, double t,
                               double tol = 1e-8);

/// One integration through ascending `times`; max step is times.back()/10.
std::vector<DensityMatrix> evolve_dynamical(const DensityMatrix& rho0, const DeviceModel& model,
                                            std::span<const double> times, double tol = 1e-8);

/// Same, with a prebuilt generator.
std::vector<DensityMatrix> evolve_dynamical(const DensityMatrix& rho0,
                                            const LindbladGenerator& generator,
                                            std::span<const double> times, double tol = 1e-8);

/// Column-stacked propagator exp(L t), built by integrating every matrix unit
/// E_rc. Columns are independent and computed on up to `threads` workers.
Superoperator evolve_superoperator(const DeviceModel& model, double t, double tol = 1e-8,
                                   int threads = 1);

/// Applies the ordered channel list n_steps times; each channel is expected to
/// be parameterized with duration t / n_steps.
DensityMatrix trotter_evolve(const std::vector<KrausChannel>& channels, int n_steps,
                             const DensityMatrix& rho0);

/// First-order Trotterization of the composite approximation over [0, t].
DensityMatrix trotter_apply(const DeviceModel& model, double t, int n_steps,
                            const CompositeOrder& order, const DensityMatrix& rho0);

}  // namespace qecdyn
