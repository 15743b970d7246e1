#include "qecdyn/dynamics.hpp"

#include "qecdyn/errors.hpp"
#include "qecdyn/parallel.hpp"

#include <string>

namespace qecdyn {

namespace {

void check_tolerance(double tol) {
  if (!(tol > 0.0)) throw ValidationError("integration tolerance must be positive");
}

OdeOptions options_for(double tol) {
  OdeOptions options;
  options.rtol = tol;
  options.atol = tol;
  return options;
}

}  // namespace

std::vector<DensityMatrix> evolve_dynamical(const DensityMatrix& rho0,
                                            const LindbladGenerator& generator,
                                            std::span<const double> times, double tol) {
  check_tolerance(tol);
  if (rho0.rows() != generator.dim() || rho0.cols() != generator.dim()) {
    throw ValidationError("evolve_dynamical: density matrix dimension does not match model");
  }
  for (double t : times) {
    if (!(t >= 0.0)) throw ValidationError("evolution time must be non-negative");
  }
  auto rhs = [&generator](double, const Matrix& y, Matrix& dydt) { generator.apply(y, dydt); };
  auto states = integrate_dopri5(rhs, Matrix(rho0), 0.0, times, options_for(tol));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (times[i] > 0.0) states[i] = hermitian_part(states[i]);
  }
  return states;
}

std::vector<DensityMatrix> evolve_dynamical(const DensityMatrix& rho0, const DeviceModel& model,
                                            std::span<const double> times, double tol) {
  return evolve_dynamical(rho0, LindbladGenerator(model), times, tol);
}

DensityMatrix evolve_dynamical(const DensityMatrix& rho0, const DeviceModel& model, double t,
                               double tol) {
  const double times[] = {t};
  return std::move(evolve_dynamical(rho0, model, times, tol).front());
}

Superoperator evolve_superoperator(const DeviceModel& model, double t, double tol, int threads) {
  check_tolerance(tol);
  if (!(t >= 0.0)) throw ValidationError("evolution time must be non-negative");
  const LindbladGenerator generator(model);
  const Eigen::Index d = generator.dim();
  if (t == 0.0) return Superoperator::Identity(d * d, d * d);

  Superoperator s(d * d, d * d);
  const double times[] = {t};
  const OdeOptions options = options_for(tol);
  auto rhs = [&generator](double, const Matrix& y, Matrix& dydt) { generator.apply(y, dydt); };
  parallel_for(static_cast<std::size_t>(d * d), threads, [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    Matrix unit = Matrix::Zero(d, d);
    unit(col % d, col / d) = 1.0;
    const auto result = integrate_dopri5(rhs, unit, 0.0, times, options);
    s.col(col) = result.front().reshaped();
  });
  return s;
}

DensityMatrix trotter_evolve(const std::vector<KrausChannel>& channels, int n_steps,
                             const DensityMatrix& rho0) {
  if (n_steps < 1) throw ValidationError("trotter_evolve: n_steps must be >= 1");
  DensityMatrix rho = rho0;
  for (int step = 0; step < n_steps; ++step) rho = apply_channels(channels, rho);
  return rho;
}

DensityMatrix trotter_apply(const DeviceModel& model, double t, int n_steps,
                            const CompositeOrder& order, const DensityMatrix& rho0) {
  if (n_steps < 1) throw ValidationError("trotter_apply: n_steps must be >= 1");
  return trotter_evolve(composite_channels(model, t / n_steps, order), n_steps, rho0);
}

}  // namespace qecdyn
