#pragma once

// Adaptive Dormand-Prince 5(4) integrator for Eigen-valued ODEs dy/dt = f(t, y).
//
// The state may be any dense Eigen matrix or vector type. Error control uses
// the RMS norm of err_i / (atol + rtol max(|y_i|, |y_new_i|)), step size
// control follows Hairer, Norsett & Wanner (safety 0.9, factor in [0.2, 10]).

#include "qecdyn/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qecdyn {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  double max_step = 0.0;  // 0: (t_end - t0) / 10
  double first_step = 0.0;  // 0: automatic
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

namespace ode_detail {

// Butcher tableau of DOPRI5.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename Derived>
double scaled_rms(const Eigen::MatrixBase<Derived>& err, const Eigen::MatrixBase<Derived>& y0,
                  const Eigen::MatrixBase<Derived>& y1, double rtol, double atol) {
  const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  const double sum = (err.cwiseAbs().array() / scale).square().sum();
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace ode_detail

/// Integrates from t0 through the ascending output times, returning y at each.
/// `f(t, y, dydt)` writes the derivative into dydt (which never aliases y).
/// Output times equal to t0 return y0 unchanged. Throws IntegrationError when
/// the step size underflows or max_steps is exceeded.
template <typename State, typename Rhs>
std::vector<State> integrate_dopri5(Rhs&& f, const State& y0, double t0,
                                    std::span<const double> output_times,
                                    const OdeOptions& options = {}, OdeStats* stats = nullptr) {
  using namespace ode_detail;
  std::vector<State> out;
  out.reserve(output_times.size());
  if (output_times.empty()) return out;
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (!(output_times[i] >= t0) || (i > 0 && output_times[i] < output_times[i - 1])) {
      throw std::invalid_argument("integrate_dopri5: output times must be ascending and >= t0");
    }
  }
  const double t_end = output_times.back();
  const double span = t_end - t0;
  const double max_step = options.max_step > 0.0 ? options.max_step : span / 10.0;

  OdeStats local;
  OdeStats& st = stats ? *stats : local;

  State y = y0;
  State k1, k2, k3, k4, k5, k6, k7, tmp, y_new;
  double t = t0;
  std::size_t next = 0;
  while (next < output_times.size() && output_times[next] <= t0) {
    out.push_back(y0);
    ++next;
  }
  if (next == output_times.size()) return out;

  f(t, y, k1);
  ++st.evaluations;

  double h = options.first_step;
  if (h <= 0.0) {
    // Initial step estimate (Hairer, Norsett & Wanner, II.4).
    const auto scale = (options.atol + options.rtol * y.cwiseAbs().array()).eval();
    const double n = static_cast<double>(y.size());
    const double d0 = std::sqrt((y.cwiseAbs().array() / scale).square().sum() / n);
    const double d1 = std::sqrt((k1.cwiseAbs().array() / scale).square().sum() / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    tmp = y + h0 * k1;
    f(t + h0, tmp, k2);
    ++st.evaluations;
    const double d2 =
        std::sqrt(((k2 - k1).cwiseAbs().array() / scale).square().sum() / n) / h0;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1, d2), 1.0 / 5);
    h = std::min(100 * h0, h1);
  }
  h = std::min(h, max_step);

  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 10.0;
  long steps = 0;

  while (next < output_times.size()) {
    const double target = output_times[next];
    const double min_step = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_step) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
    }
    if (++steps > options.max_steps) {
      throw IntegrationError("maximum number of steps exceeded at t = " + std::to_string(t), t);
    }
    bool hits_target = false;
    double step = h;
    if (t + step >= target) {
      step = target - t;
      hits_target = true;
    }

    tmp = y + step * (a21 * k1);
    f(t + c2 * step, tmp, k2);
    tmp = y + step * (a31 * k1 + a32 * k2);
    f(t + c3 * step, tmp, k3);
    tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * step, tmp, k4);
    tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * step, tmp, k5);
    tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + step, tmp, k6);
    y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + step, y_new, k7);
    st.evaluations += 6;

    tmp = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = scaled_rms(tmp, y, y_new, options.rtol, options.atol);

    if (!std::isfinite(err)) {
      ++st.rejected;
      h = 0.2 * step;
      continue;
    }
    if (err <= 1.0) {
      ++st.accepted;
      t = hits_target ? target : t + step;
      y.swap(y_new);
      k1.swap(k7);
      while (next < output_times.size() && output_times[next] <= t) {
        out.push_back(y);
        ++next;
      }
      const double factor =
          err == 0.0 ? kMaxFactor
                     : std::clamp(kSafety * std::pow(err, -1.0 / 5), kMinFactor, kMaxFactor);
      // A step shortened to land on an output time does not shrink h.
      h = std::min(max_step, hits_target ? std::max(h, step * factor) : step * factor);
    } else {
      ++st.rejected;
      h = step * std::max(kMinFactor, kSafety * std::pow(err, -1.0 / 5));
    }
  }
  return out;
}

}  // namespace qecdyn
