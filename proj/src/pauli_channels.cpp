#include "qecdyn/pauli_channels.hpp"

#include "qecdyn/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qecdyn {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Local string on `acts_on` written into an n-qubit identity string.
PauliString expand(const PauliString& local, const std::vector<int>& acts_on, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (std::size_t i = 0; i < acts_on.size(); ++i) {
    const int q = acts_on[i];
    require(q >= 0 && q < n_qubits, "Pauli channel qubit index out of range");
    s[static_cast<std::size_t>(q)] = local[static_cast<int>(i)];
  }
  return PauliString(s);
}

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  for (int q : b) {
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  return out;
}

// Restates a channel on a superset of its qubits.
PauliChannel widen(const PauliChannel& c, const std::vector<int>& qubits) {
  if (c.acts_on == qubits) return c;
  PauliChannel out;
  out.acts_on = qubits;
  std::vector<int> positions;
  for (int q : c.acts_on) {
    positions.push_back(
        static_cast<int>(std::find(qubits.begin(), qubits.end(), q) - qubits.begin()));
  }
  for (const auto& [p, w] : c.probs) {
    out.probs[expand(p, positions, static_cast<int>(qubits.size()))] += w;
  }
  return out;
}

// tr(sigma E) = sum_c <c^x| ... : sigma(c, c^x) = i^{#Y} (-1)^{|(c^x) & z|}.
Complex pauli_trace(const PauliString& p, const Matrix& e) {
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::uint32_t x = p.x_mask();
  const std::uint32_t z = p.z_mask();
  const Complex phase = kIPowers[std::popcount(x & z) % 4];
  Complex sum = 0.0;
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(e.rows()); ++c) {
    const std::uint32_t r = c ^ x;
    const double sign = (std::popcount(r & z) & 1) ? -1.0 : 1.0;
    sum += sign * e(r, c);
  }
  return phase * sum;
}

}  // namespace

double PauliChannel::probability(const PauliString& p) const {
  const auto it = probs.find(p);
  return it == probs.end() ? 0.0 : it->second;
}

double PauliChannel::total() const {
  double sum = 0.0;
  for (const auto& [p, w] : probs) sum += w;
  return sum;
}

PauliChannel make_pauli_channel(std::vector<int> acts_on, std::map<PauliString, double> probs) {
  PauliChannel c;
  c.acts_on = std::move(acts_on);
  double sum = 0.0;
  for (auto& [p, w] : probs) {
    if (p.size() != c.arity()) {
      throw ValidationError("Pauli channel string length does not match its qubit list");
    }
    if (w < 0.0) {
      if (w < -1e-12) {
        throw NumericalError("Pauli channel probability " + std::to_string(w) + " for " + p.str() +
                             " is negative beyond rounding");
      }
      w = 0.0;
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw NumericalError("Pauli channel probabilities sum to " + std::to_string(sum));
  }
  c.probs = std::move(probs);
  return c;
}

std::vector<PauliString> all_pauli_strings(int n_qubits) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<PauliString> out;
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  out.reserve(count);
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (std::size_t k = 0; k < count; ++k) {
    for (int q = 0; q < n_qubits; ++q) {
      s[static_cast<std::size_t>(q)] = kLetters[(k >> (2 * (n_qubits - 1 - q))) & 3u];
    }
    out.emplace_back(s);
  }
  return out;
}

PauliChannel pauli_project(const KrausChannel& c) {
  const int n = c.arity();
  const double norm = std::ldexp(1.0, -n);
  std::map<PauliString, double> probs;
  double sum = 0.0;
  for (const auto& sigma : all_pauli_strings(n)) {
    double w = 0.0;
    for (const auto& e : c.operators) w += std::norm(pauli_trace(sigma, e) * norm);
    if (w > 0.0) {
      probs[sigma] = w;
      sum += w;
    }
  }
  for (auto& [p, w] : probs) w /= sum;
  return make_pauli_channel(c.acts_on, std::move(probs));
}

PauliChannel pauli_project(const PauliChannel& c) { return c; }

PauliChannel pauli_2q_zz(double zeta, double t, int a, int b) {
  const double s = std::sin(0.5 * zeta * t);
  const double c = std::cos(0.5 * zeta * t);
  return make_pauli_channel({a, b}, {{PauliString("II"), c * c}, {PauliString("ZZ"), s * s}});
}

PauliChannel pauli_1q(double h, double g0, double g2, double t, int qubit) {
  return pauli_1q_with_crosstalk(h, g0, g2, 0.0, t, 0, qubit);
}

PauliChannel pauli_1q_with_crosstalk(double h, double g0, double g2, double zeta, double t, int n,
                                     int qubit) {
  require(g0 >= 0.0 && g2 >= 0.0, "damping rates must be non-negative");
  require(n >= 0, "neighbour count must be non-negative");
  const double keep_ad = std::exp(-g0 * t);
  const double keep_pd = std::exp(-4.0 * g2 * t);
  const double p_ad = 1.0 - keep_ad;
  const double gamma = std::sqrt(keep_pd) * std::sqrt(keep_ad);
  double mean_cos = 0.0;
  for (int k = 0; k <= n; ++k) {
    mean_cos += std::ldexp(binomial(n, k), -n) * std::cos((h + (n - 2 * k) * zeta) * t);
  }
  const double cx = 0.25 * p_ad;
  const double cz = 0.5 - 0.5 * gamma * mean_cos - 0.25 * p_ad;
  return make_pauli_channel({qubit}, {{PauliString("I"), 1.0 - 2.0 * cx - cz},
                                      {PauliString("X"), cx},
                                      {PauliString("Y"), cx},
                                      {PauliString("Z"), cz}});
}

PauliChannel compose(const PauliChannel& first, const PauliChannel& second) {
  const auto qubits = union_of(first.acts_on, second.acts_on);
  const PauliChannel a = widen(first, qubits);
  const PauliChannel b = widen(second, qubits);
  std::map<PauliString, double> probs;
  for (const auto& [pa, wa] : a.probs) {
    for (const auto& [pb, wb] : b.probs) probs[pb * pa] += wa * wb;
  }
  return make_pauli_channel(qubits, std::move(probs));
}

std::pair<PauliChannel, PauliChannel> split_vs_whole_demo(double phi) {
  const auto phase_channel = [](double angle) {
    KrausChannel c;
    Matrix u = Matrix::Identity(2, 2);
    u(1, 1) = std::exp(kI * angle);
    c.operators.push_back(u);
    c.acts_on = {0};
    return c;
  };
  const PauliChannel whole = pauli_project(phase_channel(phi));
  const PauliChannel half = pauli_project(phase_channel(0.5 * phi));
  return {whole, compose(half, half)};
}

KrausChannel one_q_crosstalk_channel(double zeta, double t, int n, int qubit) {
  require(n >= 0, "neighbour count must be non-negative");
  KrausChannel c;
  c.acts_on = {qubit};
  c.duration = t;
  for (int k = 0; k <= n; ++k) {
    const double weight = std::sqrt(std::ldexp(binomial(n, k), -n));
    const double angle = 0.5 * zeta * t * (n - 2 * k);
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = weight * std::exp(-kI * angle);
    u(1, 1) = weight * std::exp(kI * angle);
    c.operators.push_back(u);
  }
  return c;
}

bool surviving_pair(const std::vector<PauliString>& stabilizers, const PauliString& sigma,
                    const PauliString& nu) {
  require(sigma.size() == nu.size(), "Pauli strings of different length");
  for (const auto& s : stabilizers) {
    if (s.commutes_with(sigma) != s.commutes_with(nu)) return false;
  }
  return true;
}

KrausChannel to_kraus(const PauliChannel& c) {
  KrausChannel k;
  k.acts_on = c.acts_on;
  for (const auto& [p, w] : c.probs) {
    if (w > 0.0) k.operators.push_back(std::sqrt(w) * pauli_matrix(p));
  }
  return k;
}

DensityMatrix apply_pauli_channel(const PauliChannel& c, const DensityMatrix& rho) {
  const int n = qubit_count(rho.rows());
  DensityMatrix out = DensityMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& [p, w] : c.probs) {
    if (w == 0.0) continue;
    if (p.is_identity()) {
      out += w * rho;
    } else {
      out += w * conjugate_by_pauli(expand(p, c.acts_on, n), rho);
    }
  }
  return out;
}

Superoperator pauli_channel_superoperator(const PauliChannel& c, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Superoperator s = Superoperator::Zero(d * d, d * d);
  for (const auto& [p, w] : c.probs) {
    if (w == 0.0) continue;
    const Matrix m = pauli_matrix(expand(p, c.acts_on, n_qubits));
    s += w * tensor_product(m.conjugate(), m);
  }
  return s;
}

DeviceModel symmetric_equivalent(const DeviceModel& model) {
  DeviceModel out = model;
  if (model.frame == Frame::NonSym2QAdjusted) out.frame = Frame::NonSym1QAdjusted;
  return to_symmetric_frame(out);
}

std::vector<PauliChannel> pauli_channels(const DeviceModel& input, double t,
                                         double crosstalk_scale) {
  input.validate();
  require(t >= 0.0, "duration must be non-negative");
  require(std::isfinite(crosstalk_scale), "crosstalk scale must be finite");
  const DeviceModel model = to_symmetric_frame(input);
  std::vector<PauliChannel> out;
  for (int q = 0; q < model.n_qubits; ++q) {
    const auto p = model.qubit(q);
    out.push_back(pauli_1q(p.h, p.g0, p.g2, t, q));
  }
  auto edges = model.edges;
  std::sort(edges.begin(), edges.end(), [](const Coupling& x, const Coupling& y) {
    return std::minmax(x.a, x.b) < std::minmax(y.a, y.b);
  });
  for (const auto& e : edges) {
    const double strength = crosstalk_scale * e.strength;
    if (e.kind == CouplingKind::XY) {
      out.push_back(pauli_project(xy_channel_2q(strength, t, e.a, e.b)));
    } else if (model.frame == Frame::NonSym2QAdjusted) {
      out.push_back(pauli_project(nonsym_zz_channel_2q(strength, t, e.a, e.b)));
    } else {
      out.push_back(pauli_2q_zz(strength, t, e.a, e.b));
    }
  }
  return out;
}

DensityMatrix pauli_apply(const DeviceModel& model, double t, const DensityMatrix& rho0,
                          double crosstalk_scale) {
  require(rho0.rows() == (Eigen::Index{1} << model.n_qubits),
          "pauli_apply: density matrix dimension does not match model");
  DensityMatrix rho = rho0;
  for (const auto& c : pauli_channels(model, t, crosstalk_scale)) {
    rho = apply_pauli_channel(c, rho);
  }
  return rho;
}

namespace {

// combined_1q o prod_e K~^(1)(zeta_e) for every qubit.
std::vector<KrausChannel> surrogate_per_qubit(const DeviceModel& input, double t) {
  input.validate();
  require(t >= 0.0, "duration must be non-negative");
  const DeviceModel model = symmetric_equivalent(input);
  std::vector<std::vector<double>> couplings(static_cast<std::size_t>(model.n_qubits));
  for (const auto& e : model.edges) {
    require(e.kind == CouplingKind::ZZ, "1Q surrogate channels are defined for ZZ coupling only");
    couplings[static_cast<std::size_t>(e.a)].push_back(e.strength);
    couplings[static_cast<std::size_t>(e.b)].push_back(e.strength);
  }
  std::vector<KrausChannel> out;
  for (int q = 0; q < model.n_qubits; ++q) {
    const auto p = model.qubit(q);
    KrausChannel c = combined_1q_channel(p.h, p.g0, p.g2, t, q);
    const auto& zetas = couplings[static_cast<std::size_t>(q)];
    const bool uniform =
        std::all_of(zetas.begin(), zetas.end(), [&](double z) { return z == zetas.front(); });
    if (!zetas.empty() && uniform) {
      c = compose(c, one_q_crosstalk_channel(zetas.front(), t, static_cast<int>(zetas.size()), q));
    } else {
      for (double z : zetas) c = compose(c, one_q_crosstalk_channel(z, t, 1, q));
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<KrausChannel> one_q_surrogate_channels(const DeviceModel& model, double t) {
  return surrogate_per_qubit(model, t);
}

std::vector<PauliChannel> one_q_surrogate_pauli_channels(const DeviceModel& model, double t) {
  std::vector<PauliChannel> out;
  for (const auto& c : surrogate_per_qubit(model, t)) out.push_back(pauli_project(c));
  return out;
}

}  // namespace qecdyn
