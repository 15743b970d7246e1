#pragma once

// JSON experiment configuration and the runners behind the command-line tool.
//
// Config units: frequencies in kHz (nu, converted to 2 pi nu 1e-3 rad/us on
// ingest), times in us. See README.md for the schema.

#include "qecdyn/five_qubit_code.hpp"
#include "qecdyn/metrics.hpp"
#include "qecdyn/noise_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qecdyn {

struct CycleSpec {
  double cycle_time_us = 1.0;
  long n_cycles = 1;
  long record_every = 1;
};

struct ExperimentConfig {
  DeviceModel model;
  std::vector<code5::LogicalState> initial_states;
  bool average6 = false;  // all six states plus mean/std rows
  std::vector<std::string> approximations;
  code5::DecoderKind decoder = code5::DecoderKind::Standard;
  std::vector<double> times_us;
  std::optional<CycleSpec> cycle;
  PhysicalMode physical_mode = PhysicalMode::SameApprox;
  PseudoThresholdOptions threshold;
  std::optional<InhomogeneousSpec> inhomogeneous;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::string output;
};

/// Throws ValidationError with "line L, column C" for syntax errors and the
/// dotted field path for schema errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// DeviceModel from its JSON fragment (kHz / us units).
DeviceModel parse_model(const nlohmann::json& j, const std::string& path = "model");
/// Inverse of parse_model, with rates written as g0_per_us / g2_per_us.
nlohmann::json model_to_json(const DeviceModel& model);

struct MetricsRow {
  std::string state;
  double t_us = 0.0;
  std::string approximation;
  std::string decoder;
  double eta = 0.0;
  double alpha = 0.0;
  double beta_abs = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // per state, then "mean" and "std" rows
  std::vector<std::string> errors;
};

/// Rows ordered by (approximation, state, t); mean/std rows follow the six
/// per-state blocks of each approximation. Numerical failures are reported in
/// `errors` and the affected rows hold NaN.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

/// Header state,t_us,approximation,decoder,eta,alpha,beta_abs; 12 significant digits.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

/// %.12g formatting.
std::string format_number(double value);

struct ThresholdRow {
  std::string approximation;
  std::string decoder;
  std::string physical_mode;
  PseudoThresholdResult result;
};

std::vector<ThresholdRow> run_pseudo_threshold(const ExperimentConfig& config, int threads = 1);
void write_threshold_csv(std::ostream& os, const std::vector<ThresholdRow>& rows);

struct CycleSeries {
  std::string approximation;
  std::string state;
  double crosstalk_scale = 1.0;
  std::vector<CycleRecord> records;
};

std::vector<CycleSeries> run_cycles(const ExperimentConfig& config, int threads = 1);
void write_cycles_csv(std::ostream& os, const std::vector<CycleSeries>& series,
                      const std::string& decoder);

}  // namespace qecdyn
