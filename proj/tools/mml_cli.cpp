// Command-line front end over the C interface.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or input error,
// 3 degenerate data.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mml/mml.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kSmmlCap = 2000;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kExitUsage, msg}; }

void check(mml_status status) {
  if (status == MML_OK) return;
  const std::string msg = mml_last_error();
  switch (status) {
    case MML_ERR_DEGENERATE_DATA: throw CliError{kExitDegenerate, msg};
    case MML_ERR_DOMAIN:
    case MML_ERR_NULL_ARGUMENT:
    case MML_ERR_STRUCTURE: throw CliError{kExitUsage, msg};
    default: throw CliError{kExitNumerical, msg};
  }
}

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "nan";
  std::string s(buf, end);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// ---- input handling ----

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw CliError{kExitNumerical, "sha256 failed"};
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Table {
  std::vector<std::string> header;  // empty if the file has none
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

// A first line with any non-numeric field is a header.
Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (first) {
      first = false;
      bool numeric = true;
      for (const auto& f : fields)
        if (!f.empty() && !parse_number(f)) numeric = false;
      if (!numeric) {
        t.header = fields;
        continue;
      }
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  return t;
}

double number_at(const Table& t, std::size_t r, std::size_t c) {
  const auto v = parse_number(t.rows[r][c]);
  if (!v)
    usage_error("line " + std::to_string(t.line_numbers[r]) + ": not a finite number: '" + t.rows[r][c] + "'");
  return *v;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Long format (group,value) or two columns, one group per column.
std::pair<std::vector<double>, std::vector<double>> read_two_groups(const std::string& text) {
  const Table t = parse_csv(text);
  if (t.rows.empty()) usage_error("input has no data rows");
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.rows[r].size() != 2)
      usage_error("line " + std::to_string(t.line_numbers[r]) + ": expected 2 fields, found " +
                  std::to_string(t.rows[r].size()));

  bool long_format = !t.header.empty() && lower(t.header[0]) == "group";
  for (const auto& row : t.rows)
    if (!row[0].empty() && !parse_number(row[0])) long_format = true;

  std::vector<double> g1, g2;
  if (long_format) {
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& label = t.rows[r][0];
      if (label.empty()) usage_error("line " + std::to_string(t.line_numbers[r]) + ": empty group label");
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) {
        if (labels.size() == 2) usage_error("long-format input has more than two groups");
        labels.push_back(label);
        it = labels.end() - 1;
      }
      (it == labels.begin() ? g1 : g2).push_back(number_at(t, r, 1));
    }
    if (labels.size() != 2) usage_error("long-format input needs exactly two groups");
  } else {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (!t.rows[r][0].empty()) g1.push_back(number_at(t, r, 0));
      if (!t.rows[r][1].empty()) g2.push_back(number_at(t, r, 1));
    }
  }
  return {g1, g2};
}

std::pair<std::vector<double>, std::vector<double>> read_pairs(const std::string& text) {
  const Table t = parse_csv(text);
  if (t.rows.empty()) usage_error("input has no data rows");
  std::vector<double> a, b;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != 2)
      usage_error("line " + std::to_string(t.line_numbers[r]) + ": expected 2 fields, found " +
                  std::to_string(t.rows[r].size()));
    a.push_back(number_at(t, r, 0));
    b.push_back(number_at(t, r, 1));
  }
  return {a, b};
}

// ---- output ----

struct Globals {
  std::uint64_t seed = 1;
  std::string units = "bits";
  std::string output;
  std::string manifest;
};

double in_units(double nats, const Globals& g) { return g.units == "bits" ? nats / std::log(2.0) : nats; }

class Report {
 public:
  explicit Report(const Globals& g) : g_(g) { out_ << "name,value,unit\n"; }
  void text(const std::string& name, const std::string& value) { out_ << name << ',' << csv_field(value) << ",\n"; }
  void number(const std::string& name, double v, int decimals = 6) { out_ << name << ',' << fixed(v, decimals) << ",\n"; }
  void length(const std::string& name, double nats) {
    out_ << name << ',' << fixed(in_units(nats, g_), 6) << ',' << g_.units << '\n';
  }
  void nats(const std::string& name, double v) { out_ << name << ',' << fixed(v, 6) << ",nats\n"; }
  void bits(const std::string& name, double nats) { out_ << name << ',' << fixed(nats / std::log(2.0), 6) << ",bits\n"; }
  std::string str() const { return out_.str(); }

 private:
  const Globals& g_;
  std::ostringstream out_;
};

void emit(const Globals& g, const std::string& content, const nlohmann::ordered_json& manifest) {
  if (g.output.empty() || g.output == "-") {
    std::cout << content;
  } else {
    std::ofstream out(g.output, std::ios::binary);
    if (!out) usage_error("cannot write output file: " + g.output);
    out << content;
  }
  std::string mpath = g.manifest;
  if (mpath.empty() && !g.output.empty() && g.output != "-") mpath = g.output + ".manifest.json";
  if (!mpath.empty()) {
    std::ofstream out(mpath, std::ios::binary);
    if (!out) usage_error("cannot write manifest file: " + mpath);
    out << manifest.dump(2) << '\n';
  }
}

nlohmann::ordered_json manifest_base(const std::string& command, const Globals& g) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["tool_version"] = mml_version();
  m["seed"] = g.seed;
  m["units"] = g.units;
  m["flags"] = nlohmann::ordered_json::object();
  m["input_digest"] = nullptr;
  return m;
}

struct PartitionHandle {
  mml_smml_partition* p = nullptr;
  ~PartitionHandle() { mml_smml_free(p); }
};

std::string partition_text(const mml_smml_partition* p, bool estimates) {
  size_t needed = 0;
  if (estimates)
    check(mml_smml_estimates_string(p, 3, nullptr, 0, &needed));
  else
    check(mml_smml_segments_string(p, nullptr, 0, &needed));
  std::string buf(needed, '\0');
  if (estimates)
    check(mml_smml_estimates_string(p, 3, buf.data(), buf.size(), nullptr));
  else
    check(mml_smml_segments_string(p, buf.data(), buf.size(), nullptr));
  buf.resize(needed - 1);
  return buf;
}

// ---- commands ----

int cmd_smml_table(const Globals& g, int n_max) {
  if (n_max < 1 || n_max > kSmmlCap)
    usage_error("--n-max must lie in 1.." + std::to_string(kSmmlCap) + ", got " + std::to_string(n_max));
  std::ostringstream out;
  out << "n,partition,estimates,codelength,unit\n";
  for (int n = 1; n <= n_max; ++n) {
    PartitionHandle h;
    check(mml_smml_solve(n, &h.p));
    double nats = 0.0;
    check(mml_smml_expected_codelength(h.p, &nats));
    out << n << ',' << csv_field(partition_text(h.p, false)) << ',' << csv_field(partition_text(h.p, true)) << ','
        << fixed(in_units(nats, g), 3) << ',' << g.units << '\n';
  }
  auto m = manifest_base("smml-table", g);
  m["flags"]["n_max"] = n_max;
  emit(g, out.str(), m);
  return kExitOk;
}

int cmd_codelengths(const Globals& g, int n, int y) {
  if (n < 1) usage_error("--n must be at least 1");
  if (y < 0 || y > n) usage_error("--y must lie in 0..n");
  if (n > kSmmlCap) usage_error("--n must not exceed " + std::to_string(kSmmlCap));
  Report r(g);
  PartitionHandle h;
  check(mml_smml_solve(n, &h.p));
  double smml_est = 0.0, smml_expected = 0.0, smml_msg = 0.0;
  check(mml_smml_estimate(h.p, y, &smml_est));
  check(mml_smml_expected_codelength(h.p, &smml_expected));
  check(mml_smml_message_length(h.p, y, &smml_msg));
  double est = 0.0, len = 0.0, volume = 0.0;
  check(mml_mml87_binomial_estimate(n, y, &est));
  check(mml_mml87_binomial_codelength(n, y, est, &len));
  check(mml_uncertainty_volume(n / (est * (1.0 - est)), 1, &volume));
  double fit = 0.0, complexity = 0.0, total = 0.0;
  check(mml_nml_binomial(n, y, &fit, &complexity, &total));

  r.number("n", n, 0);
  r.number("y", y, 0);
  r.number("smml_estimate", smml_est);
  r.length("smml_expected_codelength", smml_expected);
  r.length("smml_message_length", smml_msg);
  r.number("mml87_estimate", est);
  r.length("mml87_codelength", len);
  r.number("mml87_uncertainty_volume", volume);
  r.length("nml_codelength", total);
  r.length("nml_complexity", complexity);
  auto m = manifest_base("codelengths", g);
  m["flags"]["n"] = n;
  m["flags"]["y"] = y;
  emit(g, r.str(), m);
  return kExitOk;
}

struct TTestFlags {
  std::string input;
  double prior_df = 1.0, prior_location = 0.0, prior_scale = 1.0;
  double threshold = 0.0;
  bool bayes_factor = false;
};

int cmd_ttest(const Globals& g, const TTestFlags& f) {
  if (!(f.threshold >= 0.0)) usage_error("--threshold must be non-negative");
  if (!(f.prior_df > 0.0) || !(f.prior_scale > 0.0)) usage_error("prior df and scale must be positive");
  const std::string bytes = read_file(f.input);
  const auto [y1, y2] = read_two_groups(bytes);
  mml_ttest_options opts;
  mml_ttest_default_options(&opts);
  opts.prior_df = f.prior_df;
  opts.prior_location = f.prior_location;
  opts.prior_scale = f.prior_scale;
  opts.threshold_nats = f.threshold;
  opts.with_bayes_factor = f.bayes_factor;
  mml_ttest_result res;
  check(mml_ttest(y1.data(), y1.size(), y2.data(), y2.size(), &opts, &res));

  Report r(g);
  r.number("n1", res.n1, 0);
  r.number("n2", res.n2, 0);
  r.number("t", res.t);
  r.length("null_codelength", res.i0_nats);
  r.length("alt_codelength", res.i1_nats);
  r.nats("difference", res.difference_nats);
  r.bits("difference_bits", res.difference_nats);
  r.nats("threshold", f.threshold);
  r.text("decision", res.selected == MML_H1 ? "H1" : "H0");
  r.number("null_mu", res.null_mu);
  r.number("null_sigma", res.null_sigma);
  r.number("alt_mu", res.alt_mu);
  r.number("alt_sigma", res.alt_sigma);
  r.number("alt_delta", res.alt_delta);
  r.number("ml_mu", res.ml_mu);
  r.number("ml_sigma", res.ml_sigma);
  r.number("ml_delta", res.ml_delta);
  if (res.has_bayes_factor) r.number("bayes_factor", res.bayes_factor);

  auto m = manifest_base("ttest", g);
  m["flags"] = {{"input", f.input},          {"prior_df", f.prior_df},   {"prior_location", f.prior_location},
                {"prior_scale", f.prior_scale}, {"threshold", f.threshold}, {"bayes_factor", f.bayes_factor}};
  m["input_digest"] = "sha256:" + sha256_hex(bytes);
  emit(g, r.str(), m);
  return kExitOk;
}

int cmd_corrtest(const Globals& g, const std::string& input, double rho0, double threshold) {
  if (!(std::abs(rho0) < 1.0)) usage_error("--rho0 must lie strictly between -1 and 1");
  if (!(threshold >= 0.0)) usage_error("--threshold must be non-negative");
  const std::string bytes = read_file(input);
  const auto [y1, y2] = read_pairs(bytes);
  mml_corr_result res;
  check(mml_corr_test(y1.data(), y2.data(), y1.size(), rho0, 0.0, threshold, &res));

  Report r(g);
  r.number("n", res.n, 0);
  r.number("r", res.r);
  r.number("rho0", rho0);
  r.length("null_codelength", res.i0_nats);
  r.length("alt_codelength", res.i1_nats);
  r.nats("difference", res.difference_nats);
  r.bits("difference_bits", res.difference_nats);
  r.nats("threshold", threshold);
  r.text("decision", res.selected == MML_H1 ? "H1" : "H0");
  r.number("rho_mml", res.alt_params.rho);
  r.number("olkin_pratt", res.olkin_pratt);
  r.number("alt_sigma1", res.alt_params.sigma1);
  r.number("alt_sigma2", res.alt_params.sigma2);
  r.number("null_sigma1", res.null_params.sigma1);
  r.number("null_sigma2", res.null_params.sigma2);

  auto m = manifest_base("corrtest", g);
  m["flags"] = {{"input", input}, {"rho0", rho0}, {"threshold", threshold}};
  m["input_digest"] = "sha256:" + sha256_hex(bytes);
  emit(g, r.str(), m);
  return kExitOk;
}

struct SimFlags {
  std::string experiment;
  int reps = 10000;
  unsigned threads = 1;
  double threshold = 0.0;
  std::vector<double> grid, null_grid;
  std::vector<int> n_values;
  std::optional<double> prior_df, prior_location, prior_scale;
  bool no_bayes_factor = false;
};

struct ConfigHandle {
  mml_sim_config* p = nullptr;
  ~ConfigHandle() { mml_sim_config_free(p); }
};

struct TableHandle {
  mml_risk_table* p = nullptr;
  ~TableHandle() { mml_risk_table_free(p); }
};

int cmd_simulate(const Globals& g, const SimFlags& f) {
  static const std::vector<std::string> known{"delta-nmse", "rho-mse", "type1", "corr-table"};
  if (std::find(known.begin(), known.end(), f.experiment) == known.end())
    usage_error("unknown experiment '" + f.experiment + "'; expected delta-nmse, rho-mse, type1 or corr-table");
  if (f.reps < 1) usage_error("--reps must be at least 1");
  if (!(f.threshold >= 0.0)) usage_error("--threshold must be non-negative");

  ConfigHandle cfg;
  check(mml_sim_config_new(f.experiment.c_str(), &cfg.p));
  check(mml_sim_config_set_seed(cfg.p, g.seed));
  check(mml_sim_config_set_replicates(cfg.p, f.reps));
  check(mml_sim_config_set_threads(cfg.p, f.threads));
  check(mml_sim_config_set_threshold(cfg.p, f.threshold));
  if (!f.grid.empty()) check(mml_sim_config_set_grid(cfg.p, f.grid.data(), f.grid.size()));
  if (!f.null_grid.empty()) check(mml_sim_config_set_null_grid(cfg.p, f.null_grid.data(), f.null_grid.size()));
  if (!f.n_values.empty()) check(mml_sim_config_set_n_values(cfg.p, f.n_values.data(), f.n_values.size()));
  if (f.prior_df || f.prior_location || f.prior_scale)
    check(mml_sim_config_set_prior(cfg.p, f.prior_df.value_or(1.0), f.prior_location.value_or(0.0),
                                   f.prior_scale.value_or(1.0)));
  check(mml_sim_config_set_bayes_factor(cfg.p, !f.no_bayes_factor));

  TableHandle table;
  check(mml_sim_run(cfg.p, &table.p));
  size_t needed = 0;
  check(mml_risk_table_csv(table.p, nullptr, 0, &needed));
  std::string csv(needed, '\0');
  check(mml_risk_table_csv(table.p, csv.data(), csv.size(), nullptr));
  csv.resize(needed - 1);
  long redraws = 0, nonconverged = 0;
  check(mml_risk_table_counts(table.p, &redraws, &nonconverged));

  auto m = manifest_base("simulate", g);
  m["flags"] = {{"experiment", f.experiment}, {"reps", f.reps}, {"threshold", f.threshold},
                {"grid", f.grid},             {"null_grid", f.null_grid}, {"n", f.n_values},
                {"bayes_factor", !f.no_bayes_factor}};
  if (f.prior_df) m["flags"]["prior_df"] = *f.prior_df;
  if (f.prior_location) m["flags"]["prior_location"] = *f.prior_location;
  if (f.prior_scale) m["flags"]["prior_scale"] = *f.prior_scale;
  m["redraws"] = redraws;
  m["nonconverged_fits"] = nonconverged;
  emit(g, csv, m);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum message length inference: strict MML, MML87 and NML codelengths, t-test and "
               "correlation tests, Monte Carlo experiments."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(mml_version()));

  Globals g;
  app.add_option("--seed", g.seed, "Random seed for simulations")->capture_default_str();
  app.add_option("--units", g.units, "Display unit for codelengths")
      ->check(CLI::IsMember({"bits", "nats"}))
      ->capture_default_str();
  app.add_option("--output,-o", g.output, "Output file (default: standard output)");
  app.add_option("--manifest", g.manifest, "Manifest path (default: <output>.manifest.json)");

  int n_max = 30;
  auto* smml = app.add_subcommand("smml-table", "Optimal strict MML partitions of the binomial data space");
  smml->add_option("--n-max", n_max, "Largest number of trials")->capture_default_str();

  int cn = 0, cy = 0;
  auto* codes = app.add_subcommand("codelengths", "SMML, MML87 and NML codelengths of one binomial observation");
  codes->add_option("--n", cn, "Number of trials")->required();
  codes->add_option("--y", cy, "Number of successes")->required();

  TTestFlags tf;
  auto* tt = app.add_subcommand("ttest", "MML two-sample t-test on a CSV file");
  tt->add_option("input", tf.input, "CSV: group,value rows or two columns")->required();
  tt->add_option("--prior-df", tf.prior_df, "Degrees of freedom of the effect-size prior")->capture_default_str();
  tt->add_option("--prior-location", tf.prior_location, "Location of the effect-size prior")->capture_default_str();
  tt->add_option("--prior-scale", tf.prior_scale, "Scale of the effect-size prior")->capture_default_str();
  tt->add_option("--threshold", tf.threshold, "Codelength margin in nats required to select H1")
      ->capture_default_str();
  tt->add_flag("--bayes-factor", tf.bayes_factor, "Also compute the Bayes factor BF10");

  std::string corr_input;
  double rho0 = 0.0, corr_threshold = 0.0;
  auto* ct = app.add_subcommand("corrtest", "MML test of a bivariate-normal correlation coefficient");
  ct->add_option("input", corr_input, "CSV with two columns")->required();
  ct->add_option("--rho0", rho0, "Correlation under the null")->capture_default_str();
  ct->add_option("--threshold", corr_threshold, "Codelength margin in nats required to select H1")
      ->capture_default_str();

  SimFlags sf;
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment and write a CSV risk table");
  sim->add_option("experiment", sf.experiment, "delta-nmse, rho-mse, type1 or corr-table")->required();
  sim->add_option("--reps", sf.reps, "Replicates per grid cell")->capture_default_str();
  sim->add_option("--threads", sf.threads, "Worker threads")->capture_default_str();
  sim->add_option("--threshold", sf.threshold, "Codelength margin in nats for the MML decision")
      ->capture_default_str();
  sim->add_option("--grid", sf.grid, "Parameter grid (comma separated)")->delimiter(',');
  sim->add_option("--rho0-grid", sf.null_grid, "Null correlations for corr-table (comma separated)")
      ->delimiter(',');
  sim->add_option("--n", sf.n_values, "Sample sizes (comma separated)")->delimiter(',');
  sim->add_option("--prior-df", sf.prior_df, "Degrees of freedom of the effect-size prior");
  sim->add_option("--prior-location", sf.prior_location, "Location of the effect-size prior");
  sim->add_option("--prior-scale", sf.prior_scale, "Scale of the effect-size prior");
  sim->add_flag("--no-bayes-factor", sf.no_bayes_factor, "Skip Bayes factor rules in type1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*smml) return cmd_smml_table(g, n_max);
    if (*codes) return cmd_codelengths(g, cn, cy);
    if (*tt) return cmd_ttest(g, tf);
    if (*ct) return cmd_corrtest(g, corr_input, rho0, corr_threshold);
    if (*sim) return cmd_simulate(g, sf);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
