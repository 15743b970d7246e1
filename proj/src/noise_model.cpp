#include "qecdyn/noise_model.hpp"

#include "qecdyn/errors.hpp"
#include "qecdyn/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace qecdyn {

namespace {

inline std::uint32_t qubit_bit(int n_qubits, int q) { return 1u << (n_qubits - 1 - q); }

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace

void DeviceModel::validate() const {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, "n_qubits must be in [1, 10]");
  const auto n = static_cast<std::size_t>(n_qubits);
  require(h.size() == n && g0.size() == n && g2.size() == n,
          "per-qubit parameter arrays must have n_qubits entries");
  for (int q = 0; q < n_qubits; ++q) {
    const auto i = static_cast<std::size_t>(q);
    require(std::isfinite(h[i]), "h must be finite on qubit " + std::to_string(q));
    require(std::isfinite(g0[i]) && g0[i] >= 0.0,
            "g0 must be finite and >= 0 on qubit " + std::to_string(q));
    require(std::isfinite(g2[i]) && g2[i] >= 0.0,
            "g2 must be finite and >= 0 on qubit " + std::to_string(q));
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    require(e.a >= 0 && e.a < n_qubits && e.b >= 0 && e.b < n_qubits,
            "edge references a qubit out of range");
    require(e.a != e.b, "edge must join two distinct qubits");
    require(std::isfinite(e.strength), "coupling strength must be finite");
    const auto key = std::minmax(e.a, e.b);
    require(seen.insert(key).second, "duplicate edge (" + std::to_string(key.first) + "," +
                                         std::to_string(key.second) + ")");
  }
}

QubitParams DeviceModel::qubit(int q) const {
  const auto i = static_cast<std::size_t>(q);
  return {h.at(i), g0.at(i), g2.at(i)};
}

std::vector<int> DeviceModel::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_qubits), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.a)];
    ++deg[static_cast<std::size_t>(e.b)];
  }
  return deg;
}

bool DeviceModel::has_crosstalk() const {
  return std::any_of(edges.begin(), edges.end(),
                     [](const Coupling& e) { return e.strength != 0.0; });
}

std::vector<std::pair<int, int>> connectivity_edges(Connectivity connectivity, int n_qubits) {
  std::vector<std::pair<int, int>> out;
  if (connectivity == Connectivity::AllToAll) {
    for (int a = 0; a < n_qubits; ++a) {
      for (int b = a + 1; b < n_qubits; ++b) out.emplace_back(a, b);
    }
  } else {
    std::set<std::pair<int, int>> ring;
    if (n_qubits >= 2) {
      for (int a = 0; a < n_qubits; ++a) ring.insert(std::minmax(a, (a + 1) % n_qubits));
    }
    out.assign(ring.begin(), ring.end());
  }
  return out;
}

DeviceModel make_uniform_model(int n_qubits, const QubitParams& qubit, double coupling,
                               Connectivity connectivity, CouplingKind kind) {
  DeviceModel model;
  model.n_qubits = n_qubits;
  const auto n = static_cast<std::size_t>(n_qubits);
  model.h.assign(n, qubit.h);
  model.g0.assign(n, qubit.g0);
  model.g2.assign(n, qubit.g2);
  for (const auto& [a, b] : connectivity_edges(connectivity, n_qubits)) {
    model.edges.push_back({a, b, coupling, kind});
  }
  model.validate();
  return model;
}

DeviceModel to_symmetric_frame(const DeviceModel& model) {
  if (model.frame != Frame::NonSym1QAdjusted) return model;
  // zeta/2 (I-Zi)(I-Zj) = zeta/2 ZiZj + zeta/2 (I-Zi) + zeta/2 (I-Zj) - zeta/2 I,
  // so each ZZ neighbour adds zeta to the 1Q detuning (global phase dropped).
  DeviceModel out = model;
  out.frame = Frame::Symmetric;
  for (const auto& e : model.edges) {
    if (e.kind != CouplingKind::ZZ) continue;
    out.h[static_cast<std::size_t>(e.a)] += e.strength;
    out.h[static_cast<std::size_t>(e.b)] += e.strength;
  }
  return out;
}

Rates rates_from_t1_t2(const RateSpec& spec) {
  require(spec.t1 > 0.0 && spec.t2 > 0.0, "T1 and T2 must be positive");
  require(spec.t2 <= 2.0 * spec.t1, "unphysical coherence times: T2 > 2 T1");
  Rates rates;
  rates.g0 = std::isinf(spec.t1) ? 0.0 : 1.0 / spec.t1;
  const double inv_t2 = std::isinf(spec.t2) ? 0.0 : 1.0 / spec.t2;
  const double inv_tphi = std::max(0.0, inv_t2 - 0.5 * rates.g0);
  rates.g2 = 0.5 * inv_tphi;
  return rates;
}

RateSpec t1_t2_from_rates(const Rates& rates) {
  require(rates.g0 >= 0.0 && rates.g2 >= 0.0, "rates must be non-negative");
  RateSpec spec;
  spec.t1 = rates.g0 > 0.0 ? 1.0 / rates.g0 : kInfinity;
  const double inv_t2 = 0.5 * rates.g0 + 2.0 * rates.g2;
  spec.t2 = inv_t2 > 0.0 ? 1.0 / inv_t2 : kInfinity;
  return spec;
}

namespace {

// Diagonal energies of the ZZ/1Q part and the dense XY part, per frame.
struct HamiltonianParts {
  Eigen::VectorXd diagonal;
  Matrix off_diagonal;
  bool has_off_diagonal = false;
};

HamiltonianParts hamiltonian_parts(const DeviceModel& input) {
  input.validate();
  const DeviceModel model = to_symmetric_frame(input);
  const int n = model.n_qubits;
  const std::uint32_t dim = 1u << n;
  HamiltonianParts parts;
  parts.diagonal = Eigen::VectorXd::Zero(dim);
  parts.off_diagonal = Matrix::Zero(dim, dim);

  for (std::uint32_t r = 0; r < dim; ++r) {
    double e = 0.0;
    for (int q = 0; q < n; ++q) {
      if (r & qubit_bit(n, q)) e += model.h[static_cast<std::size_t>(q)];  // h/2 (1 - z)
    }
    for (const auto& c : model.edges) {
      if (c.kind != CouplingKind::ZZ) continue;
      const bool ba = r & qubit_bit(n, c.a);
      const bool bb = r & qubit_bit(n, c.b);
      if (model.frame == Frame::NonSym2QAdjusted) {
        if (ba && bb) e += 2.0 * c.strength;  // zeta/2 (1-za)(1-zb)
      } else {
        e += 0.5 * c.strength * ((ba == bb) ? 1.0 : -1.0);
      }
    }
    parts.diagonal(r) = e;
  }

  for (const auto& c : model.edges) {
    if (c.kind != CouplingKind::XY || c.strength == 0.0) continue;
    parts.has_off_diagonal = true;
    // J/2 (XX + YY) = J (|01><10| + |10><01|) on the pair.
    const std::uint32_t flip = qubit_bit(n, c.a) | qubit_bit(n, c.b);
    for (std::uint32_t r = 0; r < dim; ++r) {
      const bool ba = r & qubit_bit(n, c.a);
      const bool bb = r & qubit_bit(n, c.b);
      if (ba != bb) parts.off_diagonal(r ^ flip, r) += c.strength;
    }
  }
  return parts;
}

}  // namespace

Matrix build_hamiltonian(const DeviceModel& model) {
  auto parts = hamiltonian_parts(model);
  Matrix h = parts.off_diagonal;
  h.diagonal() += parts.diagonal.cast<Complex>();
  return h;
}

LindbladGenerator::LindbladGenerator(const DeviceModel& model)
    : n_qubits_(model.n_qubits), dim_(Eigen::Index{1} << model.n_qubits) {
  auto parts = hamiltonian_parts(model);
  diagonal_hamiltonian_ = !parts.has_off_diagonal;
  hamiltonian_ = parts.off_diagonal;
  hamiltonian_.diagonal() += parts.diagonal.cast<Complex>();

  const int n = n_qubits_;
  entrywise_.resize(dim_, dim_);
  for (Eigen::Index c = 0; c < dim_; ++c) {
    for (Eigen::Index r = 0; r < dim_; ++r) {
      double decay = 0.0;
      for (int q = 0; q < n; ++q) {
        const auto i = static_cast<std::size_t>(q);
        const std::uint32_t bit = qubit_bit(n, q);
        const bool br = static_cast<std::uint32_t>(r) & bit;
        const bool bc = static_cast<std::uint32_t>(c) & bit;
        decay -= 0.5 * model.g0[i] * (static_cast<double>(br) + static_cast<double>(bc));
        if (br != bc) decay -= 2.0 * model.g2[i];
      }
      Complex value{decay, 0.0};
      if (diagonal_hamiltonian_) {
        value += -kI * (parts.diagonal(r) - parts.diagonal(c));
      }
      entrywise_(r, c) = value;
    }
  }
  for (int q = 0; q < n; ++q) {
    const double g0 = model.g0[static_cast<std::size_t>(q)];
    if (g0 > 0.0) jumps_.emplace_back(qubit_bit(n, q), g0);
  }
}

void LindbladGenerator::apply(const Matrix& rho, Matrix& out) const {
  out = entrywise_.cwiseProduct(rho);
  if (!diagonal_hamiltonian_) {
    out.noalias() -= kI * (hamiltonian_ * rho);
    out.noalias() += kI * (rho * hamiltonian_);
  }
  // sigma+ rho sigma- : (r, c) with the bit clear receives rho(r|b, c|b).
  const auto d = static_cast<std::uint32_t>(dim_);
  for (const auto& [bit, g0] : jumps_) {
    for (std::uint32_t c = 0; c < d; ++c) {
      if (c & bit) continue;
      for (std::uint32_t r = 0; r < d; ++r) {
        if (r & bit) continue;
        out(r, c) += g0 * rho(r | bit, c | bit);
      }
    }
  }
}

Matrix LindbladGenerator::operator()(const Matrix& rho) const {
  Matrix out;
  apply(rho, out);
  return out;
}

Superoperator LindbladGenerator::superoperator() const {
  const Eigen::Index d = dim_;
  Superoperator s(d * d, d * d);
  Matrix unit = Matrix::Zero(d, d);
  Matrix image;
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      unit(r, c) = 1.0;
      apply(unit, image);
      s.col(r + c * d) = image.reshaped();
      unit(r, c) = 0.0;
    }
  }
  return s;
}

DensityMatrix lindblad_action(const DeviceModel& model, const DensityMatrix& rho) {
  LindbladGenerator generator(model);
  if (rho.rows() != generator.dim() || rho.cols() != generator.dim()) {
    throw ValidationError("lindblad_action: density matrix dimension does not match model");
  }
  return generator(rho);
}

DeviceModel sample_inhomogeneous(std::uint64_t seed, const InhomogeneousSpec& spec) {
  require(spec.n_qubits >= 1 && spec.n_qubits <= kMaxQubits, "n_qubits must be in [1, 10]");
  require(spec.t1_min_us > 0.0 && spec.t1_max_us >= spec.t1_min_us, "invalid T1 range");
  require(spec.tphi_offset_us >= 0.0 && spec.tphi_exp_mean_us > 0.0, "invalid T_phi parameters");
  require(spec.h_std_khz >= 0.0 && spec.zeta_std_khz >= 0.0, "standard deviations must be >= 0");

  CounterRng rng(seed);
  DeviceModel model;
  model.n_qubits = spec.n_qubits;
  for (int q = 0; q < spec.n_qubits; ++q) {
    const double t1 = rng.uniform(spec.t1_min_us, spec.t1_max_us);
    const double tphi = spec.tphi_offset_us + rng.exponential(spec.tphi_exp_mean_us);
    const double h_khz = rng.normal(spec.h_mean_khz, spec.h_std_khz);
    model.g0.push_back(1.0 / t1);
    model.g2.push_back(0.5 / tphi);
    model.h.push_back(khz_to_angular(h_khz));
  }
  for (const auto& [a, b] : connectivity_edges(spec.connectivity, spec.n_qubits)) {
    const double zeta_khz = rng.normal(spec.zeta_mean_khz, spec.zeta_std_khz);
    model.edges.push_back({a, b, khz_to_angular(zeta_khz), CouplingKind::ZZ});
  }
  model.validate();
  return model;
}

}  // namespace qecdyn
