#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mml/ttest.hpp"

namespace mml {

struct SimConfig {
  std::uint64_t seed = 1;
  int replicates = 10000;
  std::vector<double> grid;       // delta, rho, prior scale or true rho, by experiment
  std::vector<double> null_grid;  // rho0 values (corr-table only)
  std::vector<int> n_values;      // per-group size for the t-test experiments
  double threshold_nats = 0.0;
  EffectSizePrior prior;
  bool with_bayes_factor = true;  // type1 only
  unsigned threads = 1;
};

struct RiskRow {
  std::string name;       // "<experiment>:<estimator or rule>"
  int n = 0;
  std::string parameter;  // grid point; "rho0:rho" for corr-table
  double value = 0.0;
  double stderr_ = 0.0;   // Monte Carlo standard error (sample sd / sqrt(R))
  int replicates = 0;
};

struct RiskTable {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<RiskRow> rows;
  long redraws = 0;       // degenerate datasets replaced by a fresh draw
  long nonconverged = 0;  // fits that fell back to the optimiser's best point

  const RiskRow* find(std::string_view name, int n, std::string_view parameter) const;
};

/// Default desk-scale configuration for a named experiment; throws DomainError
/// for an unknown name.
SimConfig default_sim_config(std::string_view experiment);

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Throws DomainError for an invalid configuration.
void validate(const SimConfig& cfg);

RiskTable simulate_delta_nmse(const SimConfig& cfg);
RiskTable simulate_rho_mse(const SimConfig& cfg);
RiskTable simulate_type1(const SimConfig& cfg);
RiskTable simulate_corr_table(const SimConfig& cfg);
RiskTable run_experiment(std::string_view experiment, const SimConfig& cfg);

/// Grid-point labels as they appear in the parameter column.
std::string format_parameter(double value);
std::string format_cell(double rho0, double rho);

/// CSV with header name,n,parameter,value,stderr,replicates,seed.
void write_csv(std::ostream& out, const RiskTable& table);
std::string to_csv(const RiskTable& table);

/// Seed for the random stream of one replicate in one grid cell.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t replicate);

}  // namespace mml
