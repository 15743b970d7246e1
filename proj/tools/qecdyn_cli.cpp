// Command-line front end: simulate, pseudo-threshold, cycles, sample-inhomogeneous.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include "qecdyn/errors.hpp"
#include "qecdyn/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* opt = cmd->add_option("--config", o.config, "JSON experiment configuration");
  if (config_required) opt->required();
  opt->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output path (default: config 'output', else stdout)");
  cmd->add_option("--seed", o.seed, "overrides the config seed");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

qecdyn::ExperimentConfig load(const CommonOptions& o) {
  qecdyn::ExperimentConfig c = o.config.empty() ? qecdyn::parse_config("{}") : qecdyn::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.output = o.out;
  return c;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qecdyn::ValidationError("cannot open output file '" + path + "'");
  write(out);
  if (!out) throw qecdyn::ValidationError("failed writing output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-qubit code under idle crosstalk noise: dynamical and approximate channels"};
  app.require_subcommand(1);

  CommonOptions sim_opts, thr_opts, cyc_opts, inh_opts;
  int inh_count = 1;
  auto* simulate = app.add_subcommand("simulate", "eta, alpha and |beta| over a time grid");
  add_common(simulate, sim_opts, true);
  auto* threshold = app.add_subcommand("pseudo-threshold", "crossing of logical eta with physical infidelity");
  add_common(threshold, thr_opts, true);
  auto* cycles = app.add_subcommand("cycles", "repeated noise / projection / recovery cycles");
  add_common(cycles, cyc_opts, true);
  auto* inhom = app.add_subcommand("sample-inhomogeneous", "draw device models from the inhomogeneous distributions");
  add_common(inhom, inh_opts, false);
  inhom->add_option("--count", inh_count, "number of models (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) {
      const auto config = load(sim_opts);
      const auto result = qecdyn::run_experiment(config, sim_opts.threads);
      emit(config.output, [&](std::ostream& os) { qecdyn::write_metrics_csv(os, result.rows); });
      for (const auto& e : result.errors) std::cerr << "numerical failure: " << e << '\n';
      return result.errors.empty() ? 0 : kExitNumerical;
    }
    if (*threshold) {
      const auto config = load(thr_opts);
      const auto rows = qecdyn::run_pseudo_threshold(config, thr_opts.threads);
      for (const auto& r : rows) {
        for (const auto& w : r.result.warnings) std::cerr << "warning: " << r.approximation << ": " << w << '\n';
      }
      emit(config.output, [&](std::ostream& os) { qecdyn::write_threshold_csv(os, rows); });
      return 0;
    }
    if (*cycles) {
      const auto config = load(cyc_opts);
      const auto series = qecdyn::run_cycles(config, cyc_opts.threads);
      emit(config.output, [&](std::ostream& os) {
        qecdyn::write_cycles_csv(os, series, qecdyn::code5::decoder_name(config.decoder));
      });
      return 0;
    }
    if (*inhom) {
      const auto config = load(inh_opts);
      const auto spec = config.inhomogeneous.value_or(qecdyn::InhomogeneousSpec{});
      nlohmann::json out = nlohmann::json::array();
      for (int i = 0; i < inh_count; ++i) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
        out.push_back({{"seed", seed}, {"model", qecdyn::model_to_json(qecdyn::sample_inhomogeneous(seed, spec))}});
      }
      emit(config.output, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
      return 0;
    }
  } catch (const qecdyn::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const qecdyn::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
