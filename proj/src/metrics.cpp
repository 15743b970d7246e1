#include "qecdyn/metrics.hpp"

#include "qecdyn/dynamics.hpp"
#include "qecdyn/errors.hpp"
#include "qecdyn/pauli_channels.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qecdyn {

using code5::Decoder;
using code5::LogicalState;

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

int parse_int(std::string_view s, const std::string& what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  require(ec == std::errc() && ptr == s.data() + s.size(), "invalid integer in " + what);
  return value;
}

double parse_double(std::string_view s, const std::string& what) {
  try {
    std::size_t used = 0;
    const std::string text(s);
    const double value = std::stod(text, &used);
    require(used == text.size(), "invalid number in " + what);
    return value;
  } catch (const std::logic_error&) {
    throw ValidationError("invalid number in " + what);
  }
}

// "name(arg)" -> arg, or nullopt when text is not of that form.
std::optional<std::string_view> call_argument(std::string_view text, std::string_view name) {
  if (text.size() < name.size() + 2 || text.substr(0, name.size()) != name ||
      text[name.size()] != '(' || text.back() != ')') {
    return std::nullopt;
  }
  return text.substr(name.size() + 1, text.size() - name.size() - 2);
}

}  // namespace

double success_probability(const DensityMatrix& rho, const Decoder& decoder,
                           const PureState& psi0) {
  double p = 0.0;
  for (const auto& c : decoder.table()) {
    const PureState v = apply_pauli(c, psi0);
    p += fidelity(v, rho);
  }
  return p;
}

double failure_eta(const DensityMatrix& rho, const Decoder& decoder, const PureState& psi0) {
  return 1.0 - success_probability(rho, decoder, psi0);
}

AlphaBeta logical_alpha_beta(const DensityMatrix& corrected, const PureState& psi0) {
  const PureState perp = code5::orthogonal_logical_state(psi0);
  AlphaBeta out;
  out.alpha = 1.0 - fidelity(psi0, corrected);
  out.beta = psi0.dot(corrected * perp);
  return out;
}

AlphaBeta corrected_alpha_beta(const DensityMatrix& rho, const Decoder& decoder,
                               const PureState& psi0) {
  return logical_alpha_beta(code5::correction_cycle(rho, decoder), psi0);
}

const std::vector<PureState>& one_qubit_basis_states() {
  static const std::vector<PureState> states = [] {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<PureState> out(6, PureState::Zero(2));
    out[0] << 1.0, 0.0;
    out[1] << 0.0, 1.0;
    out[2] << r, r;
    out[3] << r, -r;
    out[4] << r, r * kI;
    out[5] << r, -r * kI;
    return out;
  }();
  return states;
}

double physical_infidelity(const QubitParams& qubit, double t, const PureState& psi,
                           PhysicalNoise noise) {
  require(psi.size() == 2, "physical_infidelity expects a single-qubit state");
  const DensityMatrix rho = projector(psi);
  const DensityMatrix out =
      noise == PhysicalNoise::Exact
          ? apply_channel(combined_1q_channel(qubit.h, qubit.g0, qubit.g2, t), rho)
          : apply_pauli_channel(pauli_1q(qubit.h, qubit.g0, qubit.g2, t), rho);
  return 1.0 - fidelity(psi, out);
}

double physical_infidelity_average(const QubitParams& qubit, double t, PhysicalNoise noise) {
  double sum = 0.0;
  for (const auto& psi : one_qubit_basis_states()) sum += physical_infidelity(qubit, t, psi, noise);
  return sum / 6.0;
}

double model_physical_infidelity(const DeviceModel& input, double t, PhysicalNoise noise) {
  const DeviceModel model = symmetric_equivalent(input);
  double sum = 0.0;
  for (int q = 0; q < model.n_qubits; ++q) {
    sum += physical_infidelity_average(model.qubit(q), t, noise);
  }
  return sum / model.n_qubits;
}

Approximation Approximation::parse(std::string_view text) {
  Approximation a;
  a.label = std::string(text);
  if (text == "dynamical") {
    a.kind = Kind::Dynamical;
  } else if (text == "composite_order1") {
    a.kind = Kind::Composite;
    a.order = CompositeOrder::order1();
  } else if (text == "composite_order2") {
    a.kind = Kind::Composite;
    a.order = CompositeOrder::order2();
  } else if (text == "composite_xy_order1") {
    a.kind = Kind::Composite;
    a.order = CompositeOrder::edge_groups({0, 1, 2, 3}, 5);
  } else if (text == "composite_xy_order2") {
    a.kind = Kind::Composite;
    a.order = CompositeOrder::edge_groups({1, 2, 0, 3}, 5);
  } else if (auto n = call_argument(text, "trotter")) {
    a.kind = Kind::Trotter;
    a.trotter_steps = parse_int(*n, "trotter(n)");
    require(a.trotter_steps >= 1, "trotter(n) needs n >= 1");
  } else if (text == "pauli") {
    a.kind = Kind::Pauli;
  } else if (auto f = call_argument(text, "pauli_scaled")) {
    a.kind = Kind::Pauli;
    if (*f == "auto") {
      a.auto_scale = true;
    } else {
      a.crosstalk_scale = parse_double(*f, "pauli_scaled(f)");
      require(std::isfinite(a.crosstalk_scale) && a.crosstalk_scale > 0.0,
              "pauli_scaled(f) needs a positive factor");
    }
  } else if (text == "oneq_v1") {
    a.kind = Kind::OneQKraus;
  } else if (text == "oneq_pauli") {
    a.kind = Kind::OneQPauli;
  } else {
    throw ValidationError("unknown approximation '" + std::string(text) + "'");
  }
  return a;
}

Approximation Approximation::pauli(double scale) {
  if (scale == 1.0) return parse("pauli");
  std::ostringstream os;
  os.precision(12);
  os << "pauli_scaled(" << scale << ")";
  Approximation a = parse("pauli");
  a.crosstalk_scale = scale;
  a.label = os.str();
  return a;
}

namespace {

// Non-dynamical approximations: a linear map applied to x at a single time.
Matrix apply_discrete(const Approximation& approx, const DeviceModel& model, double t,
                      const Matrix& x) {
  using Kind = Approximation::Kind;
  switch (approx.kind) {
    case Kind::Composite:
      return apply_channels(composite_channels(model, t, approx.order), x);
    case Kind::Trotter:
      return trotter_apply(model, t, approx.trotter_steps, approx.order, x);
    case Kind::Pauli: {
      require(!approx.auto_scale, "pauli_scaled(auto) must be resolved before evolution");
      Matrix out = x;
      for (const auto& c : pauli_channels(model, t, approx.crosstalk_scale)) {
        out = apply_pauli_channel(c, out);
      }
      return out;
    }
    case Kind::OneQKraus:
      return apply_channels(one_q_surrogate_channels(model, t), x);
    case Kind::OneQPauli: {
      Matrix out = x;
      for (const auto& c : one_q_surrogate_pauli_channels(model, t)) {
        out = apply_pauli_channel(c, out);
      }
      return out;
    }
    case Kind::Dynamical:
      break;
  }
  throw ValidationError("apply_discrete: dynamical evolution is not a channel list");
}

}  // namespace

std::vector<DensityMatrix> evolve_approx(const Approximation& approx, const DeviceModel& model,
                                         std::span<const double> times, const DensityMatrix& rho0,
                                         double tol) {
  require(rho0.rows() == (Eigen::Index{1} << model.n_qubits),
          "density matrix dimension does not match model");
  if (approx.kind == Approximation::Kind::Dynamical) {
    return evolve_dynamical(rho0, model, times, tol);
  }
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  for (double t : times) {
    require(t >= 0.0, "evolution time must be non-negative");
    out.push_back(hermitian_part(apply_discrete(approx, model, t, rho0)));
  }
  return out;
}

DensityMatrix evolve_approx(const Approximation& approx, const DeviceModel& model, double t,
                            const DensityMatrix& rho0, double tol) {
  const double times[] = {t};
  return std::move(evolve_approx(approx, model, times, rho0, tol).front());
}

Matrix evolve_operator(const Approximation& approx, const DeviceModel& model, double t,
                       const Matrix& x, double tol) {
  require(t >= 0.0, "evolution time must be non-negative");
  if (approx.kind != Approximation::Kind::Dynamical) return apply_discrete(approx, model, t, x);
  if (t == 0.0) return x;
  const LindbladGenerator generator(model);
  require(x.rows() == generator.dim() && x.cols() == generator.dim(),
          "operator dimension does not match model");
  OdeOptions options;
  options.rtol = tol;
  options.atol = tol;
  const double times[] = {t};
  auto rhs = [&generator](double, const Matrix& y, Matrix& dydt) { generator.apply(y, dydt); };
  return std::move(integrate_dopri5(rhs, x, 0.0, times, options).front());
}

std::vector<std::vector<double>> eta_curves(const Approximation& approx, const DeviceModel& model,
                                            const Decoder& decoder,
                                            std::span<const LogicalState> states,
                                            std::span<const double> times, double tol) {
  std::vector<std::vector<double>> out;
  for (auto s : states) {
    const PureState& psi = code5::logical_state(s);
    const auto rhos = evolve_approx(approx, model, times, projector(psi), tol);
    std::vector<double> etas;
    etas.reserve(rhos.size());
    for (const auto& rho : rhos) etas.push_back(failure_eta(rho, decoder, psi));
    out.push_back(std::move(etas));
  }
  return out;
}

PseudoThresholdResult pseudo_threshold(const DeviceModel& model, const Approximation& approx,
                                       const Decoder& decoder, PhysicalMode mode,
                                       const PseudoThresholdOptions& options) {
  require(options.t_min > 0.0 && options.t_max > options.t_min, "invalid scan interval");
  require(options.grid_points >= 2, "scan needs at least two grid points");
  require(options.t_tol > 0.0, "bisection tolerance must be positive");
  require(!approx.auto_scale, "pauli_scaled(auto) must be resolved before a threshold scan");

  const PhysicalNoise physical =
      mode == PhysicalMode::DynamicalPhysical ? PhysicalNoise::Exact : approx.physical_noise();
  const auto& states = code5::kAllLogicalStates;

  auto gap_on = [&](std::span<const double> times) {
    const auto curves = eta_curves(approx, model, decoder, states, times, options.ode_tol);
    std::vector<double> gap(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
      double mean = 0.0;
      for (const auto& c : curves) mean += c[k];
      mean /= static_cast<double>(curves.size());
      gap[k] = mean - model_physical_infidelity(model, times[k], physical);
    }
    return gap;
  };
  auto gap_at = [&](double t) {
    const double times[] = {t};
    return gap_on(times).front();
  };

  std::vector<double> grid(static_cast<std::size_t>(options.grid_points));
  const double log_lo = std::log(options.t_min);
  const double log_hi = std::log(options.t_max);
  for (int i = 0; i < options.grid_points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::exp(log_lo + (log_hi - log_lo) * i / (options.grid_points - 1));
  }
  grid.back() = options.t_max;
  const auto gap = gap_on(grid);

  // |gap| <= 1e-12 counts as non-negative.
  constexpr double kGapFloor = 1e-12;
  auto below = [](double g) { return g < -kGapFloor; };

  PseudoThresholdResult result;
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (below(gap[i]) != below(gap[i + 1])) {
      ++result.crossings;
      if (!first) first = i;
    }
  }
  if (!first) return result;
  if (result.crossings > 1) {
    result.warnings.push_back(std::to_string(result.crossings) +
                              " crossings on the scan interval; reporting the smallest");
  }

  double lo = grid[*first];
  double hi = grid[*first + 1];
  const bool lo_negative = below(gap[*first]);
  while (hi - lo > options.t_tol) {
    const double mid = 0.5 * (lo + hi);
    if (below(gap_at(mid)) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.t_star = 0.5 * (lo + hi);
  return result;
}

AlphaBeta first_cycle_alpha_beta(const Approximation& approx, const DeviceModel& model,
                                 const Decoder& decoder, double cycle_time, const PureState& psi0,
                                 double tol) {
  const DensityMatrix rho = evolve_approx(approx, model, cycle_time, projector(psi0), tol);
  return corrected_alpha_beta(rho, decoder, psi0);
}

double crosstalk_scale_factor(const DeviceModel& model, const Decoder& decoder, double cycle_time,
                              const PureState& psi0, double tol) {
  require(cycle_time > 0.0, "cycle time must be positive");
  if (!model.has_crosstalk()) return 1.0;
  const double target =
      first_cycle_alpha_beta(Approximation::dynamical(), model, decoder, cycle_time, psi0, tol)
          .alpha;
  auto mismatch = [&](double f) {
    return first_cycle_alpha_beta(Approximation::pauli(f), model, decoder, cycle_time, psi0, tol)
               .alpha -
           target;
  };
  double lo = 1.0;
  double hi = 2.0;
  double g_lo = mismatch(lo);
  const double g_hi = mismatch(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo < 0.0) == (g_hi < 0.0)) {
    throw NumericalError("crosstalk scale factor: [1, 2] does not bracket the dynamical alpha");
  }
  for (int iter = 0; iter < 60 && hi - lo > 1e-6; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = mismatch(mid);
    if (g == 0.0) return mid;
    if ((g < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

struct LogicalFrame {
  PureState zero;
  PureState one;
  Eigen::Vector2cd psi;   // coordinates of psi0
  Eigen::Vector2cd perp;  // coordinates of psi0_perp
};

LogicalFrame logical_frame(const PureState& psi0) {
  LogicalFrame f;
  f.zero = code5::logical_state(LogicalState::Zero);
  f.one = code5::logical_state(LogicalState::One);
  const PureState perp = code5::orthogonal_logical_state(psi0);
  f.psi << f.zero.dot(psi0), f.one.dot(psi0);
  f.perp << f.zero.dot(perp), f.one.dot(perp);
  require(std::abs(f.psi.squaredNorm() - 1.0) < 1e-9,
          "cycle_series: initial state must lie in the code space");
  return f;
}

CycleRecord record_from_logical(long cycle, const Eigen::Matrix2cd& rho, const LogicalFrame& f) {
  CycleRecord r;
  r.cycle = cycle;
  r.alpha = 1.0 - f.psi.dot(rho * f.psi).real();
  r.beta_abs = std::abs(f.psi.dot(rho * f.perp));
  return r;
}

bool should_record(long cycle, long n_cycles, long every) {
  return cycle == n_cycles || cycle % every == 0;
}

}  // namespace

std::vector<CycleRecord> cycle_series(const DeviceModel& model, const Decoder& decoder,
                                      double cycle_time, long n_cycles, const PureState& psi0,
                                      const Approximation& input,
                                      const CycleOptions& options) {
  require(cycle_time > 0.0, "cycle time must be positive");
  require(n_cycles >= 1, "n_cycles must be >= 1");
  require(options.record_every >= 1, "record_every must be >= 1");
  require(model.n_qubits == code5::kQubits, "cycle_series needs a 5-qubit model");

  Approximation approx = input;
  if (approx.auto_scale) {
    approx.crosstalk_scale =
        crosstalk_scale_factor(model, decoder, cycle_time, psi0, options.ode_tol);
    approx.auto_scale = false;
  }
  const LogicalFrame frame = logical_frame(psi0);
  std::vector<CycleRecord> out;

  if (options.method == CycleMethod::LogicalTransfer) {
    // T maps vec(rho_L) to vec(rho_L') for code-space rho = sum rho_L(c,d) |c_L><d_L|.
    const PureState* basis[2] = {&frame.zero, &frame.one};
    Eigen::Matrix4cd transfer;
    for (int d = 0; d < 2; ++d) {
      for (int c = 0; c < 2; ++c) {
        const Matrix unit = *basis[c] * basis[d]->adjoint();
        const Matrix image = code5::correction_cycle(
            evolve_operator(approx, model, cycle_time, unit, options.ode_tol), decoder);
        for (int b = 0; b < 2; ++b) {
          for (int a = 0; a < 2; ++a) {
            transfer(a + 2 * b, c + 2 * d) = basis[a]->dot(image * *basis[b]);
          }
        }
      }
    }
    const Eigen::Matrix2cd rho0 = frame.psi * frame.psi.adjoint();
    Eigen::Vector4cd state = rho0.reshaped();
    for (long k = 1; k <= n_cycles; ++k) {
      state = transfer * state;
      if (should_record(k, n_cycles, options.record_every)) {
        const Eigen::Matrix2cd rho = state.reshaped(2, 2);
        out.push_back(record_from_logical(k, rho, frame));
      }
    }
    return out;
  }

  const Eigen::Index d = Eigen::Index{1} << model.n_qubits;
  Superoperator evolution;
  if (approx.kind == Approximation::Kind::Dynamical) {
    evolution = evolve_superoperator(model, cycle_time, options.ode_tol, options.threads);
  } else {
    evolution.resize(d * d, d * d);
    Matrix unit = Matrix::Zero(d, d);
    for (Eigen::Index col = 0; col < d * d; ++col) {
      unit(col % d, col / d) = 1.0;
      evolution.col(col) = apply_discrete(approx, model, cycle_time, unit).reshaped();
      unit(col % d, col / d) = 0.0;
    }
  }
  const Superoperator step = code5::correction_superoperator(decoder) * evolution;
  Vector state = vectorize(projector(psi0));
  const PureState perp = code5::orthogonal_logical_state(psi0);
  for (long k = 1; k <= n_cycles; ++k) {
    state = step * state;
    if (should_record(k, n_cycles, options.record_every)) {
      const Matrix rho = devectorize(state);
      CycleRecord r;
      r.cycle = k;
      r.alpha = 1.0 - psi0.dot(rho * psi0).real();
      r.beta_abs = std::abs(psi0.dot(rho * perp));
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace qecdyn
