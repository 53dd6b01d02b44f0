#include "mml/simulation.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "mml/correlation.hpp"
#include "mml/error.hpp"

namespace mml {

namespace {

constexpr int kMaxRedraws = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct ReplicateCounters {
  int redraws = 0;
  int nonconverged = 0;
};

// One replicate writes `width` outputs into `out` using its own stream.
using ReplicateFn = std::function<void(std::mt19937_64&, double* out, ReplicateCounters&)>;

struct CellResult {
  std::vector<double> mean;
  std::vector<double> se;
  long redraws = 0;
  long nonconverged = 0;
};

CellResult run_cell(const SimConfig& cfg, std::uint64_t cell, int width, const ReplicateFn& fn) {
  const int reps = cfg.replicates;
  std::vector<double> values(static_cast<std::size_t>(reps) * width);
  std::vector<ReplicateCounters> counters(reps);

  auto work = [&](int r) {
    std::mt19937_64 rng(stream_seed(cfg.seed, cell, r));
    fn(rng, values.data() + static_cast<std::size_t>(r) * width, counters[r]);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, reps));
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) work(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (int r; (r = next.fetch_add(1)) < reps;) work(r);
        } catch (...) {
          errors[t] = std::current_exception();
          next = reps;
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Aggregate in replicate order so the result does not depend on scheduling.
  CellResult res;
  res.mean.assign(width, 0.0);
  res.se.assign(width, 0.0);
  for (int k = 0; k < width; ++k) {
    double s = 0.0;
    for (int r = 0; r < reps; ++r) s += values[static_cast<std::size_t>(r) * width + k];
    const double m = s / reps;
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double d = values[static_cast<std::size_t>(r) * width + k] - m;
      ss += d * d;
    }
    res.mean[k] = m;
    res.se[k] = reps > 1 ? std::sqrt(ss / (reps - 1) / reps) : 0.0;
  }
  for (const auto& c : counters) {
    res.redraws += c.redraws;
    res.nonconverged += c.nonconverged;
  }
  return res;
}

void add_rows(RiskTable& table, const CellResult& cell, int n, const std::string& parameter,
              const std::vector<std::string>& labels, int reps) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    table.rows.push_back(RiskRow{table.experiment + ":" + labels[k], n, parameter, cell.mean[k], cell.se[k], reps});
  table.redraws += cell.redraws;
  table.nonconverged += cell.nonconverged;
}

// Repeats `draw` until it yields data the model can handle.
template <class Draw, class Use>
void with_redraws(ReplicateCounters& counters, Draw draw, Use use) {
  for (int attempt = 0;; ++attempt) {
    auto data = draw();
    try {
      use(data);
      return;
    } catch (const DegenerateDataError&) {
      if (attempt >= kMaxRedraws) throw;
      ++counters.redraws;
    }
  }
}

TwoSampleData draw_two_sample(std::mt19937_64& rng, int n, double delta) {
  std::normal_distribution<double> z;
  TwoSampleData d;
  d.y1.resize(n);
  d.y2.resize(n);
  for (auto& v : d.y1) v = 0.5 * delta + z(rng);
  for (auto& v : d.y2) v = -0.5 * delta + z(rng);
  return d;
}

BivariateSample draw_bivariate(std::mt19937_64& rng, int n, double rho) {
  std::normal_distribution<double> z;
  const double c = std::sqrt(1.0 - rho * rho);  // Cholesky factor of [[1, rho], [rho, 1]]
  BivariateSample d;
  d.y1.resize(n);
  d.y2.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = z(rng), b = z(rng);
    d.y1[i] = a;
    d.y2[i] = rho * a + c * b;
  }
  return d;
}

// Alternative fit that falls back to the optimiser's best point.
AltFit fit_alt_or_best(const TwoSampleData& data, const EffectSizePrior& prior, ReplicateCounters& counters) {
  try {
    return fit_alt(data, prior);
  } catch (const ConvergenceError& e) {
    ++counters.nonconverged;
    const auto& p = e.best_point();
    return AltFit{Codelength{e.best_value()}, AltParams{p[0], p[1], p[2]}, std::nan(""), 0};
  }
}

std::string fixed(double v, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "nan";
  std::string s(buf, end);
  if (s == "-0." + std::string(decimals, '0')) s.erase(0, 1);
  return s;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t replicate) {
  return splitmix64(splitmix64(splitmix64(seed) ^ cell) ^ (replicate * 0xD1B54A32D192ED03ULL));
}

const RiskRow* RiskTable::find(std::string_view name, int n, std::string_view parameter) const {
  for (const auto& row : rows)
    if (row.name == name && row.n == n && row.parameter == parameter) return &row;
  return nullptr;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"delta-nmse", "rho-mse", "type1", "corr-table"};
  return names;
}

SimConfig default_sim_config(std::string_view experiment) {
  SimConfig cfg;
  if (experiment == "delta-nmse") {
    cfg.grid = linspace(0.1, 5.0, 25);
    cfg.n_values = {5, 10, 20, 50};
  } else if (experiment == "rho-mse") {
    for (int i = -19; i <= 19; ++i) cfg.grid.push_back(0.05 * i);
    cfg.n_values = {20, 50};
  } else if (experiment == "type1") {
    cfg.grid = {0.1, 0.25, 0.5, 1.0, 2.0};
    cfg.n_values = {20};
  } else if (experiment == "corr-table") {
    cfg.null_grid = {-0.3, 0.0, 0.7};
    cfg.grid = {-0.75, -0.3, 0.0, 0.5};
    cfg.n_values = {15, 30};
  } else {
    throw DomainError("unknown experiment: " + std::string(experiment));
  }
  return cfg;
}

void validate(const SimConfig& cfg) {
  if (cfg.replicates < 1) throw DomainError("simulation: replicates must be at least 1");
  if (cfg.grid.empty()) throw DomainError("simulation: parameter grid is empty");
  if (cfg.n_values.empty()) throw DomainError("simulation: no sample sizes given");
  if (!(cfg.threshold_nats >= 0.0)) throw DomainError("simulation: threshold must be non-negative");
  for (int n : cfg.n_values)
    if (n < 2) throw DomainError("simulation: sample sizes must be at least 2");
}

std::string format_parameter(double value) { return fixed(value, 4); }

std::string format_cell(double rho0, double rho) { return fixed(rho0, 2) + ":" + fixed(rho, 2); }

RiskTable simulate_delta_nmse(const SimConfig& cfg) {
  validate(cfg);
  for (double d : cfg.grid)
    if (!(d > 0.0)) throw DomainError("delta-nmse: grid points must be positive");
  RiskTable table{"delta-nmse", cfg.seed, {}, 0, 0};
  std::uint64_t cell = 0;
  for (int n : cfg.n_values) {
    for (double delta : cfg.grid) {
      auto res = run_cell(cfg, cell++, 4, [&](std::mt19937_64& rng, double* out, ReplicateCounters& counters) {
        with_redraws(
            counters, [&] { return draw_two_sample(rng, n, delta); },
            [&](const TwoSampleData& data) {
              const double ml = ml_alt_estimates(data).delta;
              const double mml = fit_alt_or_best(data, cfg.prior, counters).params.delta;
              out[0] = (delta - ml) * (delta - ml) / delta;
              out[1] = (delta - mml) * (delta - mml) / delta;
              out[2] = ml - delta;
              out[3] = mml - delta;
            });
      });
      add_rows(table, res, n, format_parameter(delta), {"ml", "mml", "ml-bias", "mml-bias"}, cfg.replicates);
    }
  }
  return table;
}

RiskTable simulate_rho_mse(const SimConfig& cfg) {
  validate(cfg);
  for (int n : cfg.n_values)
    if (n < 5) throw DomainError("rho-mse: sample sizes must be at least 5");
  for (double rho : cfg.grid)
    if (!(std::abs(rho) < 1.0)) throw DomainError("rho-mse: |rho| must be below 1");
  RiskTable table{"rho-mse", cfg.seed, {}, 0, 0};
  std::uint64_t cell = 0;
  for (int n : cfg.n_values) {
    for (double rho : cfg.grid) {
      auto res = run_cell(cfg, cell++, 3, [&](std::mt19937_64& rng, double* out, ReplicateCounters& counters) {
        with_redraws(
            counters, [&] { return draw_bivariate(rng, n, rho); },
            [&](const BivariateSample& data) {
              const auto st = corr_stats(data);
              const double ests[3] = {st.r, mml_rho(st.r, n), olkin_pratt(st.r, n)};
              for (int k = 0; k < 3; ++k) out[k] = (ests[k] - rho) * (ests[k] - rho);
            });
      });
      add_rows(table, res, n, format_parameter(rho), {"ml", "mml", "olkin-pratt"}, cfg.replicates);
    }
  }
  return table;
}

RiskTable simulate_type1(const SimConfig& cfg) {
  validate(cfg);
  for (double s : cfg.grid)
    if (!(s > 0.0)) throw DomainError("type1: prior scales must be positive");
  const double log165 = std::log(1.65);
  RiskTable table{"type1", cfg.seed, {}, 0, 0};
  std::vector<std::string> labels{"mml", "mml-log1.65"};
  if (cfg.with_bayes_factor) labels.insert(labels.end(), {"bf>1", "bf>1.87"});
  const int width = static_cast<int>(labels.size());
  std::uint64_t cell = 0;
  for (int n : cfg.n_values) {
    for (double scale : cfg.grid) {
      EffectSizePrior prior = cfg.prior;
      prior.scale = scale;
      auto res = run_cell(cfg, cell++, width, [&](std::mt19937_64& rng, double* out, ReplicateCounters& counters) {
        with_redraws(
            counters, [&] { return draw_two_sample(rng, n, 0.0); },
            [&](const TwoSampleData& data) {
              const Codelength i0 = null_codelength(data).first;
              const Codelength i1 = fit_alt_or_best(data, prior, counters).codelength;
              out[0] = decide(i0, i1, cfg.threshold_nats) == Hypothesis::Alternative;
              out[1] = decide(i0, i1, log165) == Hypothesis::Alternative;
              if (cfg.with_bayes_factor) {
                const double bf = bayes_factor(data, prior);
                out[2] = bf > 1.0;
                out[3] = bf > 1.87;
              }
            });
      });
      add_rows(table, res, n, format_parameter(scale), labels, cfg.replicates);
    }
  }
  return table;
}

RiskTable simulate_corr_table(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.null_grid.empty()) throw DomainError("corr-table: rho0 grid is empty");
  for (double r : cfg.grid)
    if (!(std::abs(r) < 1.0)) throw DomainError("corr-table: |rho| must be below 1");
  for (double r : cfg.null_grid)
    if (!(std::abs(r) < 1.0)) throw DomainError("corr-table: |rho0| must be below 1");
  for (int n : cfg.n_values)
    if (n < 5) throw DomainError("corr-table: sample sizes must be at least 5");

  RiskTable table{"corr-table", cfg.seed, {}, 0, 0};
  const std::vector<std::string> labels{"mml-reject",  "mml-reject-2.3", "kl-ml",
                                        "kl-mml",      "kl-ml-alt",      "kl-mml-alt"};
  std::uint64_t cell = 0;
  for (double rho0 : cfg.null_grid) {
    for (double rho : cfg.grid) {
      for (int n : cfg.n_values) {
        const BivNormalParams truth{0.0, 0.0, 1.0, 1.0, rho};
        auto res = run_cell(cfg, cell++, 6, [&](std::mt19937_64& rng, double* out, ReplicateCounters& counters) {
          with_redraws(
              counters, [&] { return draw_bivariate(rng, n, rho); },
              [&](const BivariateSample& data) {
                const auto st = corr_stats(data);
                const auto rep = corr_test(st, rho0, {}, cfg.threshold_nats);
                const bool reject = rep.result.selected == Hypothesis::Alternative;
                out[0] = reject;
                out[1] = decide(rep.result.null_codelength, rep.result.alt_codelength, kSubstantialNats) ==
                         Hypothesis::Alternative;
                const BivNormalParams ml_alt{st.mean1, st.mean2, std::sqrt(st.s1_sq), std::sqrt(st.s2_sq), st.r};
                const BivNormalParams ml_sel = reject ? ml_alt : corr_ml_null_estimates(st, rho0);
                const BivNormalParams mml_sel = reject ? rep.alt_params : rep.null_params;
                out[2] = kl_bivariate_normal(truth, ml_sel);
                out[3] = kl_bivariate_normal(truth, mml_sel);
                out[4] = kl_bivariate_normal(truth, ml_alt);
                out[5] = kl_bivariate_normal(truth, rep.alt_params);
              });
        });
        add_rows(table, res, n, format_cell(rho0, rho), labels, cfg.replicates);
      }
    }
  }
  return table;
}

RiskTable run_experiment(std::string_view experiment, const SimConfig& cfg) {
  if (experiment == "delta-nmse") return simulate_delta_nmse(cfg);
  if (experiment == "rho-mse") return simulate_rho_mse(cfg);
  if (experiment == "type1") return simulate_type1(cfg);
  if (experiment == "corr-table") return simulate_corr_table(cfg);
  throw DomainError("unknown experiment: " + std::string(experiment));
}

void write_csv(std::ostream& out, const RiskTable& table) {
  out << "name,n,parameter,value,stderr,replicates,seed\n";
  for (const auto& row : table.rows)
    out << row.name << ',' << row.n << ',' << row.parameter << ',' << fixed(row.value, 9) << ','
        << fixed(row.stderr_, 9) << ',' << row.replicates << ',' << table.seed << '\n';
}

std::string to_csv(const RiskTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

}  // namespace mml
