#include "qecdyn/experiment.hpp"

#include "qecdyn/errors.hpp"
#include "qecdyn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qecdyn {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& message) {
  throw ValidationError("config field '" + path + "': " + message);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) field_error(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) field_error(path + "." + key, "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(path, "must be finite");
  return v;
}

// A time that may be infinite: a number, null, or "inf".
double time_value(const json& j, const std::string& path) {
  if (j.is_null()) return kInfinity;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
    field_error(path, "expected a number, null or \"inf\"");
  }
  const double v = number(j, path);
  if (v <= 0.0) field_error(path, "must be positive");
  return v;
}

std::string string_value(const json& j, const std::string& path) {
  if (!j.is_string()) field_error(path, "expected a string");
  return j.get<std::string>();
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<long>();
}

Frame parse_frame(const std::string& s, const std::string& path) {
  if (s == "symmetric") return Frame::Symmetric;
  if (s == "nonsym_2q_adjusted") return Frame::NonSym2QAdjusted;
  if (s == "nonsym_1q_adjusted") return Frame::NonSym1QAdjusted;
  field_error(path, "expected symmetric, nonsym_2q_adjusted or nonsym_1q_adjusted");
}

std::string frame_name(Frame f) {
  switch (f) {
    case Frame::Symmetric: return "symmetric";
    case Frame::NonSym2QAdjusted: return "nonsym_2q_adjusted";
    case Frame::NonSym1QAdjusted: return "nonsym_1q_adjusted";
  }
  return "symmetric";
}

CouplingKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "zz") return CouplingKind::ZZ;
  if (s == "xy") return CouplingKind::XY;
  field_error(path, "expected zz or xy");
}

Connectivity parse_connectivity(const std::string& s, const std::string& path) {
  if (s == "all_to_all") return Connectivity::AllToAll;
  if (s == "ring") return Connectivity::Ring;
  field_error(path, "expected all_to_all or ring");
}

QubitParams parse_qubit(const json& j, const std::string& path) {
  check_keys(j, path, {"h_khz", "t1_us", "t2_us", "g0_per_us", "g2_per_us"});
  QubitParams q;
  if (j.contains("h_khz")) q.h = khz_to_angular(number(j["h_khz"], path + ".h_khz"));
  const bool times = j.contains("t1_us") || j.contains("t2_us");
  const bool rates = j.contains("g0_per_us") || j.contains("g2_per_us");
  if (times && rates) field_error(path, "give either t1_us/t2_us or g0_per_us/g2_per_us");
  if (times) {
    RateSpec spec;
    if (j.contains("t1_us")) spec.t1 = time_value(j["t1_us"], path + ".t1_us");
    if (j.contains("t2_us")) spec.t2 = time_value(j["t2_us"], path + ".t2_us");
    try {
      const Rates r = rates_from_t1_t2(spec);
      q.g0 = r.g0;
      q.g2 = r.g2;
    } catch (const ValidationError& e) {
      field_error(path, e.what());
    }
  } else {
    if (j.contains("g0_per_us")) q.g0 = number(j["g0_per_us"], path + ".g0_per_us");
    if (j.contains("g2_per_us")) q.g2 = number(j["g2_per_us"], path + ".g2_per_us");
    if (q.g0 < 0.0 || q.g2 < 0.0) field_error(path, "rates must be non-negative");
  }
  return q;
}

InhomogeneousSpec parse_inhomogeneous(const json& j, const std::string& path) {
  check_keys(j, path,
             {"n_qubits", "connectivity", "t1_min_us", "t1_max_us", "tphi_offset_us",
              "tphi_exp_mean_us", "h_mean_khz", "h_std_khz", "zeta_mean_khz", "zeta_std_khz"});
  InhomogeneousSpec s;
  if (j.contains("n_qubits")) s.n_qubits = static_cast<int>(integer(j["n_qubits"], path + ".n_qubits"));
  if (j.contains("connectivity")) {
    s.connectivity = parse_connectivity(string_value(j["connectivity"], path + ".connectivity"),
                                        path + ".connectivity");
  }
  auto opt = [&](const char* key, double& target) {
    if (j.contains(key)) target = number(j[key], path + "." + key);
  };
  opt("t1_min_us", s.t1_min_us);
  opt("t1_max_us", s.t1_max_us);
  opt("tphi_offset_us", s.tphi_offset_us);
  opt("tphi_exp_mean_us", s.tphi_exp_mean_us);
  opt("h_mean_khz", s.h_mean_khz);
  opt("h_std_khz", s.h_std_khz);
  opt("zeta_mean_khz", s.zeta_mean_khz);
  opt("zeta_std_khz", s.zeta_std_khz);
  return s;
}

std::string row_label(code5::LogicalState s) { return code5::label(s); }

}  // namespace

DeviceModel parse_model(const json& j, const std::string& path) {
  check_keys(j, path, {"n_qubits", "frame", "qubit", "qubits", "coupling", "edges"});
  if (!j.contains("n_qubits")) field_error(path + ".n_qubits", "missing");
  DeviceModel m;
  m.n_qubits = static_cast<int>(integer(j["n_qubits"], path + ".n_qubits"));
  if (m.n_qubits < 1 || m.n_qubits > kMaxQubits) field_error(path + ".n_qubits", "must be in [1, 10]");
  const auto n = static_cast<std::size_t>(m.n_qubits);
  if (j.contains("frame")) m.frame = parse_frame(string_value(j["frame"], path + ".frame"), path + ".frame");

  QubitParams uniform;
  if (j.contains("qubit")) uniform = parse_qubit(j["qubit"], path + ".qubit");
  m.h.assign(n, uniform.h);
  m.g0.assign(n, uniform.g0);
  m.g2.assign(n, uniform.g2);
  if (j.contains("qubits")) {
    const auto& qs = j["qubits"];
    if (!qs.is_array() || qs.size() != n) field_error(path + ".qubits", "expected an array of n_qubits entries");
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = parse_qubit(qs[i], path + ".qubits[" + std::to_string(i) + "]");
      m.h[i] = q.h;
      m.g0[i] = q.g0;
      m.g2[i] = q.g2;
    }
  }

  if (j.contains("coupling") && j.contains("edges")) {
    field_error(path, "give either coupling or edges");
  }
  if (j.contains("coupling")) {
    const auto& c = j["coupling"];
    const std::string cp = path + ".coupling";
    check_keys(c, cp, {"kind", "strength_khz", "connectivity"});
    const CouplingKind kind =
        c.contains("kind") ? parse_kind(string_value(c["kind"], cp + ".kind"), cp + ".kind") : CouplingKind::ZZ;
    const Connectivity conn =
        c.contains("connectivity")
            ? parse_connectivity(string_value(c["connectivity"], cp + ".connectivity"), cp + ".connectivity")
            : Connectivity::AllToAll;
    if (!c.contains("strength_khz")) field_error(cp + ".strength_khz", "missing");
    const double strength = khz_to_angular(number(c["strength_khz"], cp + ".strength_khz"));
    for (const auto& [a, b] : connectivity_edges(conn, m.n_qubits)) {
      m.edges.push_back({a, b, strength, kind});
    }
  }
  if (j.contains("edges")) {
    const auto& es = j["edges"];
    if (!es.is_array()) field_error(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string ep = path + ".edges[" + std::to_string(i) + "]";
      check_keys(es[i], ep, {"a", "b", "strength_khz", "kind"});
      if (!es[i].contains("a") || !es[i].contains("b") || !es[i].contains("strength_khz")) {
        field_error(ep, "needs a, b and strength_khz");
      }
      Coupling c;
      c.a = static_cast<int>(integer(es[i]["a"], ep + ".a"));
      c.b = static_cast<int>(integer(es[i]["b"], ep + ".b"));
      c.strength = khz_to_angular(number(es[i]["strength_khz"], ep + ".strength_khz"));
      if (es[i].contains("kind")) c.kind = parse_kind(string_value(es[i]["kind"], ep + ".kind"), ep + ".kind");
      m.edges.push_back(c);
    }
  }
  try {
    m.validate();
  } catch (const ValidationError& e) {
    field_error(path, e.what());
  }
  return m;
}

json model_to_json(const DeviceModel& model) {
  json j;
  j["n_qubits"] = model.n_qubits;
  j["frame"] = frame_name(model.frame);
  j["qubits"] = json::array();
  for (int q = 0; q < model.n_qubits; ++q) {
    const auto p = model.qubit(q);
    j["qubits"].push_back({{"h_khz", angular_to_khz(p.h)}, {"g0_per_us", p.g0}, {"g2_per_us", p.g2}});
  }
  j["edges"] = json::array();
  for (const auto& e : model.edges) {
    j["edges"].push_back({{"a", e.a},
                          {"b", e.b},
                          {"strength_khz", angular_to_khz(e.strength)},
                          {"kind", e.kind == CouplingKind::ZZ ? "zz" : "xy"}});
  }
  return j;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError("config syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
  }
  check_keys(j, "config",
             {"model", "initial_states", "approximations", "approximation", "decoder", "times_us",
              "cycle", "pseudo_threshold", "inhomogeneous", "seed", "tolerance", "output"});

  ExperimentConfig c;
  if (j.contains("model")) c.model = parse_model(j["model"], "model");

  if (j.contains("initial_states")) {
    const auto& s = j["initial_states"];
    if (s.is_string() && s.get<std::string>() == "average6") {
      c.average6 = true;
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string p = "initial_states[" + std::to_string(i) + "]";
        try {
          c.initial_states.push_back(code5::parse_logical_state(string_value(s[i], p)));
        } catch (const ValidationError& e) {
          field_error(p, e.what());
        }
      }
      if (c.initial_states.empty()) field_error("initial_states", "must not be empty");
    } else {
      field_error("initial_states", "expected \"average6\" or an array of state labels");
    }
  } else {
    c.average6 = true;
  }
  if (c.average6) c.initial_states.assign(code5::kAllLogicalStates.begin(), code5::kAllLogicalStates.end());

  if (j.contains("approximations") && j.contains("approximation")) {
    field_error("approximations", "give either approximation or approximations");
  }
  if (j.contains("approximation")) {
    c.approximations.push_back(string_value(j["approximation"], "approximation"));
  } else if (j.contains("approximations")) {
    const auto& a = j["approximations"];
    if (!a.is_array() || a.empty()) field_error("approximations", "expected a non-empty array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      c.approximations.push_back(string_value(a[i], "approximations[" + std::to_string(i) + "]"));
    }
  } else {
    c.approximations.push_back("dynamical");
  }
  for (std::size_t i = 0; i < c.approximations.size(); ++i) {
    try {
      (void)Approximation::parse(c.approximations[i]);
    } catch (const ValidationError& e) {
      field_error("approximations[" + std::to_string(i) + "]", e.what());
    }
  }

  if (j.contains("decoder")) {
    try {
      c.decoder = code5::parse_decoder_kind(string_value(j["decoder"], "decoder"));
    } catch (const ValidationError& e) {
      field_error("decoder", e.what());
    }
  }

  if (j.contains("times_us")) {
    const auto& t = j["times_us"];
    if (!t.is_array()) field_error("times_us", "expected an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = "times_us[" + std::to_string(i) + "]";
      const double v = number(t[i], p);
      if (v < 0.0) field_error(p, "must be non-negative");
      if (!c.times_us.empty() && v < c.times_us.back()) field_error(p, "times must be ascending");
      c.times_us.push_back(v);
    }
  }

  if (j.contains("cycle")) {
    const auto& cy = j["cycle"];
    check_keys(cy, "cycle", {"cycle_time_us", "n_cycles", "record_every"});
    CycleSpec spec;
    if (cy.contains("cycle_time_us")) spec.cycle_time_us = number(cy["cycle_time_us"], "cycle.cycle_time_us");
    if (cy.contains("n_cycles")) spec.n_cycles = integer(cy["n_cycles"], "cycle.n_cycles");
    if (cy.contains("record_every")) spec.record_every = integer(cy["record_every"], "cycle.record_every");
    if (spec.cycle_time_us <= 0.0) field_error("cycle.cycle_time_us", "must be positive");
    if (spec.n_cycles < 1) field_error("cycle.n_cycles", "must be >= 1");
    if (spec.record_every < 1) field_error("cycle.record_every", "must be >= 1");
    c.cycle = spec;
  }

  if (j.contains("pseudo_threshold")) {
    const auto& p = j["pseudo_threshold"];
    check_keys(p, "pseudo_threshold", {"physical_mode", "t_min_us", "t_max_us", "grid_points", "t_tol_us"});
    if (p.contains("physical_mode")) {
      const auto mode = string_value(p["physical_mode"], "pseudo_threshold.physical_mode");
      if (mode == "same_approx") {
        c.physical_mode = PhysicalMode::SameApprox;
      } else if (mode == "dynamical_physical") {
        c.physical_mode = PhysicalMode::DynamicalPhysical;
      } else {
        field_error("pseudo_threshold.physical_mode", "expected same_approx or dynamical_physical");
      }
    }
    if (p.contains("t_min_us")) c.threshold.t_min = number(p["t_min_us"], "pseudo_threshold.t_min_us");
    if (p.contains("t_max_us")) c.threshold.t_max = number(p["t_max_us"], "pseudo_threshold.t_max_us");
    if (p.contains("grid_points")) {
      c.threshold.grid_points = static_cast<int>(integer(p["grid_points"], "pseudo_threshold.grid_points"));
    }
    if (p.contains("t_tol_us")) c.threshold.t_tol = number(p["t_tol_us"], "pseudo_threshold.t_tol_us");
    if (!(c.threshold.t_min > 0.0 && c.threshold.t_max > c.threshold.t_min)) {
      field_error("pseudo_threshold", "need 0 < t_min_us < t_max_us");
    }
  }

  if (j.contains("inhomogeneous")) c.inhomogeneous = parse_inhomogeneous(j["inhomogeneous"], "inhomogeneous");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerance")) {
    c.tolerance = number(j["tolerance"], "tolerance");
    if (c.tolerance <= 0.0) field_error("tolerance", "must be positive");
  }
  if (j.contains("output")) c.output = string_value(j["output"], "output");
  c.threshold.ode_tol = c.tolerance;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
  return buf;
}

namespace {

void require_model(const ExperimentConfig& config) {
  if (config.model.n_qubits != code5::kQubits) {
    throw ValidationError("config field 'model': the five-qubit code needs n_qubits = 5");
  }
}

Approximation resolve(const std::string& name, const ExperimentConfig& config,
                      const code5::Decoder& decoder, const PureState& psi) {
  Approximation a = Approximation::parse(name);
  if (a.auto_scale) {
    if (!config.cycle) {
      throw ValidationError("pauli_scaled(auto) needs a cycle.cycle_time_us to fit the factor");
    }
    a.crosstalk_scale = crosstalk_scale_factor(config.model, decoder, config.cycle->cycle_time_us,
                                               psi, config.tolerance);
    a.auto_scale = false;
  }
  return a;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  require_model(config);
  if (config.times_us.empty()) throw ValidationError("config field 'times_us': empty time grid");
  const auto& decoder = code5::Decoder::get(config.decoder);
  const std::size_t n_states = config.initial_states.size();
  const std::size_t n_tasks = config.approximations.size() * n_states;

  std::vector<std::vector<MetricsRow>> blocks(n_tasks);
  std::vector<std::string> failures(n_tasks);
  parallel_for(n_tasks, threads, [&](std::size_t task) {
    const auto& name = config.approximations[task / n_states];
    const auto state = config.initial_states[task % n_states];
    const PureState& psi = code5::logical_state(state);
    auto& block = blocks[task];
    for (double t : config.times_us) {
      block.push_back({row_label(state), t, name, decoder.name(), std::nan(""), std::nan(""), std::nan("")});
    }
    try {
      const Approximation approx = resolve(name, config, decoder, psi);
      const auto rhos = evolve_approx(approx, config.model, config.times_us, projector(psi), config.tolerance);
      for (std::size_t k = 0; k < rhos.size(); ++k) {
        block[k].eta = failure_eta(rhos[k], decoder, psi);
        const auto ab = corrected_alpha_beta(rhos[k], decoder, psi);
        block[k].alpha = ab.alpha;
        block[k].beta_abs = std::abs(ab.beta);
      }
    } catch (const IntegrationError& e) {
      failures[task] = name + " / " + row_label(state) + ": " + e.what();
    } catch (const NumericalError& e) {
      failures[task] = name + " / " + row_label(state) + ": " + e.what();
    }
  });

  ExperimentResult result;
  for (const auto& f : failures) {
    if (!f.empty()) result.errors.push_back(f);
  }
  for (std::size_t a = 0; a < config.approximations.size(); ++a) {
    for (std::size_t s = 0; s < n_states; ++s) {
      const auto& block = blocks[a * n_states + s];
      result.rows.insert(result.rows.end(), block.begin(), block.end());
    }
    if (!config.average6) continue;
    for (const char* stat : {"mean", "std"}) {
      for (std::size_t k = 0; k < config.times_us.size(); ++k) {
        MetricsRow row{stat, config.times_us[k], config.approximations[a], decoder.name(), 0, 0, 0};
        auto aggregate = [&](auto field) {
          double mean = 0.0;
          for (std::size_t s = 0; s < n_states; ++s) mean += field(blocks[a * n_states + s][k]);
          mean /= static_cast<double>(n_states);
          if (std::string(stat) == "mean") return mean;
          double var = 0.0;
          for (std::size_t s = 0; s < n_states; ++s) {
            const double d = field(blocks[a * n_states + s][k]) - mean;
            var += d * d;
          }
          return std::sqrt(var / static_cast<double>(n_states));
        };
        row.eta = aggregate([](const MetricsRow& r) { return r.eta; });
        row.alpha = aggregate([](const MetricsRow& r) { return r.alpha; });
        row.beta_abs = aggregate([](const MetricsRow& r) { return r.beta_abs; });
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "state,t_us,approximation,decoder,eta,alpha,beta_abs\n";
  for (const auto& r : rows) {
    os << r.state << ',' << format_number(r.t_us) << ',' << r.approximation << ',' << r.decoder
       << ',' << format_number(r.eta) << ',' << format_number(r.alpha) << ','
       << format_number(r.beta_abs) << '\n';
  }
}

std::vector<ThresholdRow> run_pseudo_threshold(const ExperimentConfig& config, int threads) {
  require_model(config);
  const auto& decoder = code5::Decoder::get(config.decoder);
  const std::string mode =
      config.physical_mode == PhysicalMode::SameApprox ? "same_approx" : "dynamical_physical";
  std::vector<ThresholdRow> rows(config.approximations.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    Approximation a = Approximation::parse(config.approximations[i]);
    if (a.auto_scale) {
      a = resolve(config.approximations[i], config, decoder,
                  code5::logical_state(code5::LogicalState::Plus));
    }
    rows[i] = {config.approximations[i], decoder.name(), mode,
               pseudo_threshold(config.model, a, decoder, config.physical_mode, config.threshold)};
  });
  return rows;
}

void write_threshold_csv(std::ostream& os, const std::vector<ThresholdRow>& rows) {
  os << "approximation,decoder,physical_mode,t_star_us,crossings\n";
  for (const auto& r : rows) {
    os << r.approximation << ',' << r.decoder << ',' << r.physical_mode << ','
       << (r.result.t_star ? format_number(*r.result.t_star) : std::string("none")) << ','
       << r.result.crossings << '\n';
  }
}

std::vector<CycleSeries> run_cycles(const ExperimentConfig& config, int threads) {
  require_model(config);
  if (!config.cycle) throw ValidationError("config field 'cycle': required for the cycles command");
  const auto& decoder = code5::Decoder::get(config.decoder);
  const std::size_t n_states = config.initial_states.size();
  std::vector<CycleSeries> out(config.approximations.size() * n_states);
  parallel_for(out.size(), threads, [&](std::size_t task) {
    const auto& name = config.approximations[task / n_states];
    const auto state = config.initial_states[task % n_states];
    const PureState& psi = code5::logical_state(state);
    const Approximation approx = resolve(name, config, decoder, psi);
    CycleOptions options;
    options.record_every = config.cycle->record_every;
    options.ode_tol = config.tolerance;
    out[task] = {name, row_label(state), approx.crosstalk_scale,
                 cycle_series(config.model, decoder, config.cycle->cycle_time_us,
                              config.cycle->n_cycles, psi, approx, options)};
  });
  return out;
}

void write_cycles_csv(std::ostream& os, const std::vector<CycleSeries>& series,
                      const std::string& decoder) {
  os << "state,approximation,decoder,crosstalk_scale,cycle,alpha,beta_abs\n";
  for (const auto& s : series) {
    for (const auto& r : s.records) {
      os << s.state << ',' << s.approximation << ',' << decoder << ','
         << format_number(s.crosstalk_scale) << ',' << r.cycle << ',' << format_number(r.alpha)
         << ',' << format_number(r.beta_abs) << '\n';
    }
  }
}

}  // namespace qecdyn
