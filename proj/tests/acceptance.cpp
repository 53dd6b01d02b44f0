// Acceptance runner. Each criterion prints one PASS/FAIL line with the
// numbers it was judged on; the exit status is nonzero if any failed.
//
//   acceptance [criterion ...]     (no arguments runs everything)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mml/codelength.hpp"
#include "mml/correlation.hpp"
#include "mml/mml87_binomial.hpp"
#include "mml/nml.hpp"
#include "mml/simulation.hpp"
#include "mml/smml_binomial.hpp"
#include "mml/ttest.hpp"
#include "oracles.hpp"
#include "smml_reference.hpp"

using namespace mml;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed sub-checks and a running description.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }
  Outcome outcome() const {
    std::string d;
    for (const auto& s : notes_) d += (d.empty() ? "" : "; ") + s;
    if (!failures_.empty()) {
      d += " | failed:";
      for (const auto& f : failures_) d += " [" + f + "]";
    }
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s) {
    if ((c >= '0' && c <= '9') || c == '.' || c == '-') {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::stod(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::stod(cur));
  return out;
}

double combined_se(const RiskRow& a, const RiskRow& b) { return std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_); }

const RiskRow& row(const RiskTable& t, const std::string& name, int n, const std::string& param) {
  const RiskRow* r = t.find(name, n, param);
  if (r == nullptr) throw std::runtime_error("missing row " + name + " " + std::to_string(n) + " " + param);
  return *r;
}

// ---------------------------------------------------------------------------

Outcome table1() {
  Verdict v;
  int partitions = 0, estimates = 0, lengths = 0;
  std::string estimate_misses;
  double worst_len = 0.0;
  for (const auto& ref : kSmmlReference) {
    const SmmlPartition p = solve_smml(ref.n);
    const bool same_partition = p.segments_string() == ref.partition;
    partitions += same_partition;

    const auto want = parse_numbers(ref.estimates);
    bool est_ok = want.size() == p.estimates.size();
    for (std::size_t j = 0; est_ok && j < want.size(); ++j) est_ok = std::abs(p.estimates[j] - want[j]) <= 0.0005 + 1e-12;  // slack for the decimal reference
    estimates += est_ok;
    if (!est_ok) estimate_misses += " " + std::to_string(ref.n);

    const double err = std::abs(p.expected_codelength.bits() - ref.codelength_bits);
    worst_len = std::max(worst_len, err);
    lengths += err <= 0.001;
    v.check(same_partition, "n=" + std::to_string(ref.n) + " partition " + p.segments_string() + " vs " +
                                std::string(ref.partition));
  }
  v.note("partitions " + std::to_string(partitions) + "/30, estimates " + std::to_string(estimates) +
         "/30, codelengths " + std::to_string(lengths) + "/30 (max err " + fmt("%.2e", worst_len) + " bits)");
  v.check(estimates == 30, "estimates off at n =" + estimate_misses);
  v.check(lengths == 30, "codelength error above 0.001 bits");
  return v.outcome();
}

Outcome smml_oracle() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double gap = std::abs(solve_smml(n).expected_codelength.nats - oracle::smml_exhaustive_minimum(n));
    worst = std::max(worst, gap);
    v.check(gap <= 1e-10, "n=" + std::to_string(n) + " gap " + fmt("%.3e", gap));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.note("n<=12 max |DP - exhaustive| = " + fmt("%.2e", worst) + " nats in " + fmt("%.2f", secs) + " s");
  v.check(secs < 10.0, "runtime above 10 s");
  return v.outcome();
}

Outcome binomial_examples() {
  Verdict v;
  auto expect = [&](const std::string& what, double got, double want, double tol) {
    v.note(what + " " + fmt("%.4f", got) + " (want " + fmt("%.2f", want) + ")");
    v.check(std::abs(got - want) <= tol, what);
  };
  const std::vector<Segment> whole{{0, 10}};
  std::vector<Segment> singletons;
  for (int y = 0; y <= 10; ++y) singletons.push_back({y, y});
  expect("single-partition bits", partition_codelength(whole, 10).expected_codelength.bits(), 5.01, 0.01);
  expect("singleton-partition bits", partition_codelength(singletons, 10).expected_codelength.bits(), 9.84, 0.01);
  const BinomialObservation obs{10, 3};
  const double theta = mml87_binomial_estimate(obs);
  v.note("MML87 estimate " + fmt("%.6f", theta));
  v.check(std::abs(theta - 7.0 / 22.0) < 1e-12, "MML87 estimate is not 7/22");
  expect("MML87 bits", mml87_binomial_codelength(obs, theta).bits(), 3.61, 0.01);
  expect("volume", uncertainty_volume(10.0 / (theta * (1.0 - theta)), 1), 0.51, 0.01);
  const NmlResult nml = nml_binomial_codelength(obs);
  expect("NML complexity bits", nml.log_complexity_nats / std::log(2.0), 2.22, 0.01);
  expect("NML total bits", nml.total.bits(), 4.13, 0.01);
  return v.outcome();
}

Outcome mml87_vs_smml() {
  Verdict v;
  double worst = 0.0;
  int worst_n = 0;
  for (int n = 5; n <= 30; ++n) {
    const double gap = std::abs(expected_mml87_codelength(n).bits() - solve_smml(n).expected_codelength.bits());
    if (gap > worst) worst = gap, worst_n = n;
    v.check(gap < 0.1, "n=" + std::to_string(n) + " gap " + fmt("%.4f", gap));
  }
  v.note("max |E MML87 - E SMML| over 5..30 = " + fmt("%.4f", worst) + " bits at n=" + std::to_string(worst_n));
  return v.outcome();
}

Outcome estimator_oracles() {
  Verdict v;
  // MML87 binomial estimate against a grid.
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n)
    for (int y = 0; y <= n; ++y) {
      const BinomialObservation obs{n, y};
      worst = std::max(worst, std::abs(oracle::binomial_grid_argmin(obs) - mml87_binomial_estimate(obs)));
    }
  v.note("binomial max |grid - closed form| " + fmt("%.1e", worst));
  v.check(worst <= 1e-5, "binomial estimate off grid argmin");

  // t-test numerical fit against a 3-D grid.
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> size(5, 40);
  std::uniform_real_distribution<double> eff(-2.0, 2.0), loc(-5.0, 5.0), scale(0.2, 5.0);
  int tt_ok = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const double delta = eff(rng), mu = loc(rng), sigma = scale(rng);
    const auto d = oracle::normal_two_sample(rng, size(rng), size(rng), mu + 0.5 * sigma * delta,
                                             mu - 0.5 * sigma * delta, sigma);
    const AltFit fit = fit_alt(d);
    const auto g = oracle::ttest_grid_argmin(d, {});
    const bool ok = std::abs(fit.params.mu - g.x[0]) <= g.step[0] &&
                    std::abs(std::log(fit.params.sigma) - g.x[1]) <= g.step[1] &&
                    std::abs(fit.params.delta - g.x[2]) <= g.step[2] && fit.codelength.nats <= g.value + 1e-12;
    tt_ok += ok;
    v.check(ok, "t-test dataset " + std::to_string(rep));
  }
  v.note("t-test fits within grid resolution " + std::to_string(tt_ok) + "/20");

  // Correlation closed forms against a 5-D numerical minimiser.
  std::uniform_real_distribution<double> rho(-0.95, 0.95);
  std::uniform_int_distribution<int> csize(5, 60);
  double worst_rho = 0.0, worst_sigma = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = oracle::bivariate_normal(rng, csize(rng), {loc(rng), loc(rng), scale(rng), scale(rng), rho(rng)});
    const auto st = corr_stats(d);
    const auto closed = corr_mml_alt_estimates(st);
    const auto numeric = oracle::corr_numeric_argmin(st);
    worst_rho = std::max(worst_rho, std::abs(closed.rho - numeric.rho));
    worst_sigma = std::max({worst_sigma, std::abs(closed.sigma1 / numeric.sigma1 - 1.0),
                            std::abs(closed.sigma2 / numeric.sigma2 - 1.0)});
  }
  v.note("correlation max |rho diff| " + fmt("%.1e", worst_rho) + ", max rel sigma diff " + fmt("%.1e", worst_sigma));
  v.check(worst_rho < 1e-6 && worst_sigma < 1e-6, "correlation closed form off numerical argmin");
  return v.outcome();
}

Outcome property_suites() {
  Verdict v;
  double nml_worst = 0.0;
  for (int n = 1; n <= 200; ++n) {
    double total = 0.0;
    for (int y = 0; y <= n; ++y) total += std::exp(-nml_binomial_codelength({n, y}).total.nats);
    nml_worst = std::max(nml_worst, std::abs(total - 1.0));
  }
  v.note("NML normalisation err " + fmt("%.1e", nml_worst));
  v.check(nml_worst <= 1e-10, "NML normalisation");

  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> size(4, 1000);
  int shrink_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    double r = unif(rng);
    while (r == 0.0) r = unif(rng);
    if (!(std::abs(mml_rho(r, size(rng))) < std::abs(r))) ++shrink_fail;
  }
  v.note("|rho_mml| < |r| violations " + std::to_string(shrink_fail) + "/10000");
  v.check(shrink_fail == 0, "shrinkage");

  double reparam = 0.0;
  for (int n : {1, 3, 10, 50})
    for (int y = 0; y <= n; ++y)
      for (double theta : {0.01, 0.2, 0.5, 0.8, 0.99}) {
        const double nll = -std::log(std::exp(std::lgamma(n + 1.0) - std::lgamma(y + 1.0) - std::lgamma(n - y + 1.0)) *
                                     std::pow(theta, y) * std::pow(1.0 - theta, n - y));
        const double vv = theta * (1.0 - theta);
        const double a = mml87_codelength_log(0.0, std::log(n / vv), nll, 1).nats;
        const double b = mml87_codelength_log(std::log(vv), std::log(n * vv), nll, 1).nats;
        reparam = std::max(reparam, std::abs(a - b));
      }
  v.note("logit reparametrisation err " + fmt("%.1e", reparam));
  v.check(reparam <= 1e-10, "reparametrisation invariance");

  double inv = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto d = oracle::normal_two_sample(rng, 12, 9, 0.3, 0.0, 1.0);
    const double base = ttest(d).result.difference_nats;
    TTestOptions wide;
    wide.range.log_omega = 6.0;
    inv = std::max(inv, std::abs(ttest(d, wide).result.difference_nats - base));
    auto moved = d;
    for (double& x : moved.y1) x = 100.0 + 0.03 * x;
    for (double& x : moved.y2) x = 100.0 + 0.03 * x;
    inv = std::max(inv, std::abs(ttest(moved).result.difference_nats - base));

    const auto c = oracle::bivariate_normal(rng, 20, {0.0, 0.0, 1.0, 1.0, 0.3});
    const double cbase = corr_test(c, 0.2).result.difference_nats;
    inv = std::max(inv, std::abs(corr_test(c, 0.2, {-4.0}).result.difference_nats - cbase));
    auto cm = c;
    for (double& x : cm.y1) x = -3.0 + 7.0 * x;
    for (double& x : cm.y2) x = 1e3 + 0.5 * x;
    inv = std::max(inv, std::abs(corr_test(cm, 0.2).result.difference_nats - cbase));
  }
  v.note("range/scale invariance err " + fmt("%.1e", inv));
  v.check(inv <= 1e-8, "range/scale invariance");

  std::uniform_real_distribution<double> mu(-3.0, 3.0), sd(0.05, 4.0), rr(-0.99, 0.99);
  int kl_neg = 0;
  for (int i = 0; i < 1000; ++i) {
    const BivNormalParams p{mu(rng), mu(rng), sd(rng), sd(rng), rr(rng)};
    const BivNormalParams q{mu(rng), mu(rng), sd(rng), sd(rng), rr(rng)};
    if (!(kl_bivariate_normal(p, q) >= 0.0)) ++kl_neg;
  }
  v.note("negative KL " + std::to_string(kl_neg) + "/1000");
  v.check(kl_neg == 0, "KL nonnegativity");
  return v.outcome();
}

Outcome fig1() {
  Verdict v;
  SimConfig cfg = default_sim_config("delta-nmse");
  cfg.n_values = {5, 50};
  const RiskTable t = run_experiment("delta-nmse", cfg);
  int checked = 0, sign_ok = 0;
  for (double delta : cfg.grid) {
    if (delta < 0.5 || delta > 2.0) continue;
    const std::string p = format_parameter(delta);
    const double ml = row(t, "delta-nmse:ml-bias", 5, p).value;
    const double mml = row(t, "delta-nmse:mml-bias", 5, p).value;
    ++checked;
    const bool ok = ml > 0.0 && mml < 0.0;
    sign_ok += ok;
    v.check(ok, "n=5 delta=" + p + " biases " + fmt("%.4f", ml) + "/" + fmt("%.4f", mml));
  }
  v.note("n=5 bias signs ML>0, MML<0 at " + std::to_string(sign_ok) + "/" + std::to_string(checked) +
         " grid points in [0.5, 2]");
  double worst = 0.0;
  std::string worst_at;
  int close = 0;
  for (double delta : cfg.grid) {
    const std::string p = format_parameter(delta);
    const auto& ml = row(t, "delta-nmse:ml", 50, p);
    const auto& mml = row(t, "delta-nmse:mml", 50, p);
    const double z = std::abs(ml.value - mml.value) / combined_se(ml, mml);
    if (z > worst) worst = z, worst_at = p;
    close += z < 2.0;
    v.check(z < 2.0, "n=50 delta=" + p + " |diff|/SE " + fmt("%.2f", z));
  }
  v.note("n=50 NMSE curves within 2 SE at " + std::to_string(close) + "/" + std::to_string(cfg.grid.size()) +
         " grid points (max |diff|/SE " + fmt("%.2f", worst) + " at delta=" + worst_at + ")");
  v.note("redraws " + std::to_string(t.redraws) + ", nonconverged " + std::to_string(t.nonconverged));
  return v.outcome();
}

Outcome fig2() {
  Verdict v;
  const SimConfig cfg = default_sim_config("rho-mse");
  const RiskTable t = run_experiment("rho-mse", cfg);
  for (int n : cfg.n_values) {
    int checked = 0, ok_count = 0;
    double weakest = INFINITY;
    for (double rho : cfg.grid) {
      if (std::abs(rho) > 0.6 + 1e-9) continue;
      const std::string p = format_parameter(rho);
      const auto& ml = row(t, "rho-mse:ml", n, p);
      const auto& mml = row(t, "rho-mse:mml", n, p);
      const double z = (ml.value - mml.value) / combined_se(ml, mml);
      weakest = std::min(weakest, z);
      ++checked;
      ok_count += z >= 2.0;
      v.check(z >= 2.0, "n=" + std::to_string(n) + " rho=" + p + " (ML-MML)/SE " + fmt("%.2f", z));
    }
    v.note("n=" + std::to_string(n) + ": MML below ML by >= 2 SE at " + std::to_string(ok_count) + "/" +
           std::to_string(checked) + " points with |rho|<=0.6 (min " + fmt("%.2f", weakest) + " SE)");
  }
  return v.outcome();
}

Outcome table2() {
  Verdict v;
  const SimConfig cfg = default_sim_config("corr-table");
  const RiskTable t = run_experiment("corr-table", cfg);
  const std::string cell = format_cell(0.0, 0.0);
  const auto& reject = row(t, "corr-table:mml-reject", 15, cell);
  const auto& kl_ml = row(t, "corr-table:kl-ml", 15, cell);
  const auto& kl_mml = row(t, "corr-table:kl-mml", 15, cell);
  v.note("rejection " + fmt("%.4f", reject.value) + " (SE " + fmt("%.4f", reject.stderr_) + ", want 0.051 +/- 0.02)");
  v.note("KL ML " + fmt("%.4f", kl_ml.value) + " (want 0.217), MML " + fmt("%.4f", kl_mml.value) + " (want 0.189)");
  v.note("2.3-nat rejection " + fmt("%.4f", row(t, "corr-table:mml-reject-2.3", 15, cell).value));
  v.check(std::abs(reject.value - 0.051) <= 0.02, "rejection rate");
  v.check(std::abs(kl_ml.value - 0.217) <= 0.03, "KL ML");
  v.check(std::abs(kl_mml.value - 0.189) <= 0.03, "KL MML");
  v.check(kl_mml.value < kl_ml.value, "KL ordering");
  return v.outcome();
}

Outcome type1() {
  Verdict v;
  SimConfig cfg = default_sim_config("type1");
  cfg.grid = {cfg.prior.scale};
  const RiskTable t = run_experiment("type1", cfg);
  const std::string p = format_parameter(cfg.prior.scale);
  const auto& mml = row(t, "type1:mml", 20, p);
  const auto& bf = row(t, "type1:bf>1.87", 20, p);
  v.note("threshold-0 MML rejection " + fmt("%.4f", mml.value) + " (SE " + fmt("%.4f", mml.stderr_) +
         ", want 0.10 +/- 0.02)");
  v.note("BF>1.87 rejection " + fmt("%.4f", bf.value) + " (SE " + fmt("%.4f", bf.stderr_) + ", want 0.05 +/- 0.02)");
  v.note("nonconverged " + std::to_string(t.nonconverged));
  v.check(std::abs(mml.value - 0.10) <= 0.02, "MML rate");
  v.check(std::abs(bf.value - 0.05) <= 0.02, "BF rate");
  return v.outcome();
}

int run_cli(const std::string& args, const std::string& out) {
  const std::string cmd = std::string(MML_CLI_PATH) + " " + args + " > " + out + " 2> acceptance_cli_err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Verdict v;
  const int a = run_cli("--seed 7 simulate rho-mse --reps 100", "acceptance_sim_a.csv");
  const int b = run_cli("--seed 7 simulate rho-mse --reps 100", "acceptance_sim_b.csv");
  const std::string ca = slurp("acceptance_sim_a.csv"), cb = slurp("acceptance_sim_b.csv");
  v.check(a == 0 && b == 0, "simulate failed");
  v.check(!ca.empty() && ca == cb, "outputs differ");
  v.note("repeat run " + std::string(ca == cb && !ca.empty() ? "byte-identical" : "differs") + " (" +
         std::to_string(ca.size()) + " bytes)");

  std::ofstream("acceptance_flat.csv") << "1,2\n1,2\n1,2\n";
  std::ofstream("acceptance_bad.csv") << "a,b\n1,x\n";
  std::ofstream("acceptance_pairs.csv") << "1,1.2\n2,1.9\n3,3.4\n4,4.1\n";
  const std::vector<std::pair<std::string, int>> cases{
      {"smml-table --n-max 0", 2},
      {"codelengths --n 10 --y 11", 2},
      {"ttest acceptance_missing.csv", 2},
      {"ttest acceptance_bad.csv", 2},
      {"ttest acceptance_flat.csv", 3},
      {"corrtest acceptance_pairs.csv --rho0 1.0", 2},
      {"simulate no-such-experiment", 2},
      {"simulate delta-nmse --reps 0", 2},
      {"codelengths --n 10 --y 3", 0},
  };
  int honoured = 0;
  for (const auto& [args, want] : cases) {
    const int got = run_cli(args, "acceptance_cli_out.txt");
    honoured += got == want;
    v.check(got == want, "'" + args + "' exited " + std::to_string(got) + ", want " + std::to_string(want));
  }
  v.note("exit codes honoured " + std::to_string(honoured) + "/" + std::to_string(cases.size()));
  return v.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"table1", table1},
      {"smml-oracle", smml_oracle},
      {"binomial-examples", binomial_examples},
      {"mml87-vs-smml", mml87_vs_smml},
      {"estimator-oracles", estimator_oracles},
      {"property-suites", property_suites},
      {"fig1", fig1},
      {"fig2", fig2},
      {"table2", table2},
      {"type1", type1},
      {"cli-determinism", cli_determinism},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty())
    for (const auto& c : criteria) wanted.push_back(c.first);

  int failed = 0;
  for (const auto& name : wanted) {
    auto it = std::find_if(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; });
    if (it == criteria.end()) {
      std::printf("FAIL %s: unknown criterion\n", name.c_str());
      ++failed;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
