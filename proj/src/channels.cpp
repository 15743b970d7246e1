#include "qecdyn/channels.hpp"

#include "qecdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace qecdyn {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

KrausChannel single_operator(Matrix op, std::vector<int> acts_on, double t) {
  KrausChannel c;
  c.operators.push_back(std::move(op));
  c.acts_on = std::move(acts_on);
  c.duration = t;
  return c;
}

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  for (int q : b) {
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  return out;
}

}  // namespace

double KrausChannel::completeness_error() const {
  if (operators.empty()) return kInfinity;
  const Eigen::Index d = operators.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : operators) sum.noalias() += e.adjoint() * e;
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

KrausChannel unitary_phase_channel_1q(double h, double t, int qubit) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = std::exp(-kI * (h * t));
  return single_operator(std::move(u), {qubit}, t);
}

KrausChannel zz_channel_2q(double zeta, double t, int a, int b) {
  const Complex m = std::exp(-kI * (0.5 * zeta * t));
  const Complex p = std::conj(m);
  Matrix u = Matrix::Zero(4, 4);
  u.diagonal() << m, p, p, m;
  return single_operator(std::move(u), {a, b}, t);
}

KrausChannel nonsym_zz_channel_2q(double zeta, double t, int a, int b) {
  Matrix u = Matrix::Identity(4, 4);
  u(3, 3) = std::exp(-kI * (2.0 * zeta * t));
  return single_operator(std::move(u), {a, b}, t);
}

KrausChannel xy_channel_2q(double j, double t, int a, int b) {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(3, 3) = 1.0;
  u(1, 1) = std::cos(j * t);
  u(2, 2) = std::cos(j * t);
  u(1, 2) = -kI * std::sin(j * t);
  u(2, 1) = -kI * std::sin(j * t);
  return single_operator(std::move(u), {a, b}, t);
}

KrausChannel damping_channel(double g0, double g2, double t, int qubit) {
  require(g0 >= 0.0 && g2 >= 0.0, "damping rates must be non-negative");
  require(t >= 0.0, "duration must be non-negative");
  const double keep_ad = std::exp(-g0 * t);        // 1 - p_ad
  const double keep_pd = std::exp(-4.0 * g2 * t);  // 1 - p_pd
  KrausChannel c;
  c.acts_on = {qubit};
  c.duration = t;
  Matrix e0 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(keep_pd * keep_ad);
  c.operators.push_back(e0);
  if (keep_ad < 1.0) {
    Matrix e1 = Matrix::Zero(2, 2);
    e1(0, 1) = std::sqrt(1.0 - keep_ad);
    c.operators.push_back(e1);
  }
  if (keep_pd < 1.0) {
    Matrix e2 = Matrix::Zero(2, 2);
    e2(1, 1) = std::sqrt((1.0 - keep_pd) * keep_ad);
    c.operators.push_back(e2);
  }
  return c;
}

KrausChannel combined_1q_channel(double h, double g0, double g2, double t, int qubit) {
  return compose(damping_channel(g0, g2, t, qubit), unitary_phase_channel_1q(h, t, qubit));
}

KrausChannel embed(const KrausChannel& c, const std::vector<int>& qubits) {
  if (c.acts_on == qubits) return c;
  std::vector<int> positions;
  for (int q : c.acts_on) {
    const auto it = std::find(qubits.begin(), qubits.end(), q);
    require(it != qubits.end(), "embed: target qubit list does not cover the channel");
    positions.push_back(static_cast<int>(it - qubits.begin()));
  }
  KrausChannel out;
  out.acts_on = qubits;
  out.duration = c.duration;
  const int n = static_cast<int>(qubits.size());
  for (const auto& e : c.operators) out.operators.push_back(embed_operator(e, positions, n));
  return out;
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  const auto qubits = union_of(first.acts_on, second.acts_on);
  const KrausChannel a = embed(first, qubits);
  const KrausChannel b = embed(second, qubits);
  KrausChannel out;
  out.acts_on = qubits;
  out.duration = first.duration;
  for (const auto& eb : b.operators) {
    for (const auto& ea : a.operators) out.operators.push_back(eb * ea);
  }
  return out;
}

DensityMatrix apply_channel(const KrausChannel& c, const DensityMatrix& rho) {
  const int n = qubit_count(rho.rows());
  require(rho.rows() == rho.cols(), "apply_channel: density matrix must be square");
  for (int q : c.acts_on) require(q >= 0 && q < n, "apply_channel: qubit index out of range");
  DensityMatrix out = DensityMatrix::Zero(rho.rows(), rho.cols());
  Matrix tmp;
  for (const auto& e : c.operators) {
    const Matrix full = embed_operator(e, c.acts_on, n);
    tmp.noalias() = full * rho;
    out.noalias() += tmp * full.adjoint();
  }
  return out;
}

Superoperator channel_to_superoperator(const KrausChannel& c) {
  const Eigen::Index d = Eigen::Index{1} << c.arity();
  Superoperator s = Superoperator::Zero(d * d, d * d);
  for (const auto& e : c.operators) s += tensor_product(e.conjugate(), e);
  return s;
}

Superoperator channel_to_superoperator(const KrausChannel& c, int n_qubits) {
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
  return channel_to_superoperator(embed(c, all));
}

bool channels_commute(const KrausChannel& a, const KrausChannel& b, double tol) {
  const auto qubits = union_of(a.acts_on, b.acts_on);
  const KrausChannel ea = embed(a, qubits);
  const KrausChannel eb = embed(b, qubits);
  const Eigen::Index d = Eigen::Index{1} << qubits.size();
  Matrix ab = Matrix::Zero(d * d, d * d);
  Matrix ba = Matrix::Zero(d * d, d * d);
  for (const auto& x : ea.operators) {
    for (const auto& y : eb.operators) {
      const Matrix xy = x * y;
      const Matrix yx = y * x;
      ab += tensor_product(xy.conjugate(), xy);
      ba += tensor_product(yx.conjugate(), yx);
    }
  }
  return max_abs_diff(ab, ba) <= tol;
}

double superoperator_commutator_norm(const KrausChannel& a, const KrausChannel& b) {
  const auto qubits = union_of(a.acts_on, b.acts_on);
  const Superoperator sa = channel_to_superoperator(embed(a, qubits));
  const Superoperator sb = channel_to_superoperator(embed(b, qubits));
  return max_abs_diff(sa * sb, sb * sa);
}

CompositeOrder CompositeOrder::edge_groups(const std::vector<int>& group_order, int n_qubits) {
  CompositeOrder order;
  order.one_qubit_first = true;
  for (int g : group_order) {
    require(g >= 0 && g < n_qubits, "edge group index out of range");
    for (int m = g + 1; m < n_qubits; ++m) order.edge_order.emplace_back(g, m);
  }
  return order;
}

std::vector<KrausChannel> composite_channels(const DeviceModel& input, double t,
                                             const CompositeOrder& order) {
  input.validate();
  require(t >= 0.0, "duration must be non-negative");
  const DeviceModel model = to_symmetric_frame(input);

  std::vector<KrausChannel> one_q;
  for (int q = 0; q < model.n_qubits; ++q) {
    const auto p = model.qubit(q);
    one_q.push_back(combined_1q_channel(p.h, p.g0, p.g2, t, q));
  }

  std::map<std::pair<int, int>, const Coupling*> by_pair;
  for (const auto& e : model.edges) by_pair[std::minmax(e.a, e.b)] = &e;

  std::vector<const Coupling*> edges;
  if (order.edge_order.empty()) {
    for (const auto& [key, e] : by_pair) edges.push_back(e);
  } else {
    std::map<std::pair<int, int>, int> used;
    for (const auto& pair : order.edge_order) {
      const auto key = std::minmax(pair.first, pair.second);
      const auto it = by_pair.find(key);
      if (it == by_pair.end()) continue;  // group presets may name absent edges
      require(++used[key] == 1, "edge order lists an edge twice");
      edges.push_back(it->second);
    }
    require(edges.size() == by_pair.size(), "edge order does not cover every model edge");
  }

  std::vector<KrausChannel> two_q;
  for (const Coupling* e : edges) {
    if (e->kind == CouplingKind::XY) {
      two_q.push_back(xy_channel_2q(e->strength, t, e->a, e->b));
    } else if (model.frame == Frame::NonSym2QAdjusted) {
      two_q.push_back(nonsym_zz_channel_2q(e->strength, t, e->a, e->b));
    } else {
      two_q.push_back(zz_channel_2q(e->strength, t, e->a, e->b));
    }
  }

  std::vector<KrausChannel> out;
  auto& first = order.one_qubit_first ? one_q : two_q;
  auto& second = order.one_qubit_first ? two_q : one_q;
  out.insert(out.end(), first.begin(), first.end());
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

DensityMatrix apply_channels(const std::vector<KrausChannel>& channels, const DensityMatrix& rho) {
  DensityMatrix out = rho;
  for (const auto& c : channels) out = apply_channel(c, out);
  return out;
}

DensityMatrix composite_apply(const DeviceModel& model, double t, const CompositeOrder& order,
                              const DensityMatrix& rho0) {
  require(rho0.rows() == (Eigen::Index{1} << model.n_qubits),
          "composite_apply: density matrix dimension does not match model");
  return apply_channels(composite_channels(model, t, order), rho0);
}

}  // namespace qecdyn
