#include "mchit/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mchit/config.hpp"
#include "mchit/error.hpp"
#include "mchit/families.hpp"
#include "mchit/hitting.hpp"
#include "mchit/mixing.hpp"
#include "mchit/monte_carlo.hpp"
#include "mchit/parallel.hpp"
#include "mchit/serialize.hpp"
#include "mchit/stopping_rule.hpp"
#include "mchit/verify.hpp"

namespace mchit {

namespace {

struct Options {
  std::string chain;
  std::string rule;
  std::optional<double> alpha;
  double delta = 0.25;
  std::string set;
  std::size_t start = 0;
  std::optional<double> t;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "json";
  unsigned workers = 0;
  bool heuristic = false;
  std::size_t max_exact = kDefaultMaxExact;
  std::string config;
  std::string name;
  std::size_t n = 0;
  std::string mode = "continuous";
  std::string params;
  std::string suite;
  bool cesaro = false;
  std::string target_dist;
  std::string start_dist;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::UsageError, what); }

void need(const std::string& value, const char* flag) {
  if (value.empty()) usage(std::string(flag) + " is required");
}

std::vector<std::size_t> parse_indices(const std::string& text, std::size_t n) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) usage("bad state index '" + item + "'");
    if (v >= n) usage("state " + item + " is out of range");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) usage("--set is empty");
  return out;
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) usage("--params expects key=value pairs, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      usage("bad value in --params: '" + item + "'");
    }
  }
  return out;
}

// {"tolerances": {...}, "max_exact": k, "seed": s, "format": "json"|"csv", "workers": w}
void apply_config(const std::string& path, Options& o, const std::set<std::string>& explicit_flags) {
  const Json j = read_json(path);
  if (!j.is_object()) usage("config file must hold a JSON object");
  Tolerances tol = tolerances();
  if (j.contains("tolerances")) {
    const std::map<std::string, double*> fields{
        {"row_sum", &tol.row_sum},
        {"negative_mass", &tol.negative_mass},
        {"mass_sum", &tol.mass_sum},
        {"poisson_tail", &tol.poisson_tail},
        {"stationary_residual", &tol.stationary_residual},
        {"reversibility", &tol.reversibility},
        {"record_slack", &tol.record_slack},
        {"rule_stationarity", &tol.rule_stationarity},
        {"rule_mass", &tol.rule_mass},
        {"set_mass", &tol.set_mass},
        {"tie", &tol.tie},
        {"bisection_relative", &tol.bisection_relative}};
    for (const auto& [key, value] : j["tolerances"].items()) {
      const auto it = fields.find(key);
      if (it == fields.end()) usage("unknown tolerance '" + key + "'");
      if (!value.is_number() || !(value.get<double>() > 0.0)) usage("tolerance '" + key + "' must be positive");
      *it->second = value.get<double>();
    }
  }
  set_tolerances(tol);
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (j.contains(key) && !explicit_flags.count(flag)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  try {
    take("max_exact", "--max-exact", o.max_exact);
    take("seed", "--seed", o.seed);
    take("format", "--format", o.format);
    take("workers", "--workers", o.workers);
  } catch (const nlohmann::json::exception& e) {
    usage(std::string("config: ") + e.what());
  }
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) usage("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  void json(const Json& j) { *stream_ << j.dump(2) << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

EnumerationOptions enumeration(const Options& o) {
  EnumerationOptions e;
  e.max_exact = o.max_exact;
  e.heuristic = o.heuristic;
  e.workers = o.workers;
  return e;
}

Distribution start_law(const Options& o, const MarkovChain& chain) {
  if (!o.start_dist.empty()) return distribution_from_json(read_json(o.start_dist), chain.size());
  if (o.start >= chain.size()) usage("--start is out of range");
  return Distribution::point_mass(chain.size(), o.start);
}

int cmd_family(const Options& o, Output& out) {
  need(o.name, "--name");
  if (o.n == 0) usage("--n is required");
  FamilySpec spec{o.name, o.n, parse_params(o.params), parse_mode(o.mode), o.seed};
  out.json(chain_to_json(make_family(spec)));
  return kExitOk;
}

int cmd_validate(const Options& o, Output& out) {
  need(o.chain, "--chain");
  const MarkovChain chain = read_chain(o.chain);
  Json j;
  j["valid"] = true;
  j["name"] = chain.name();
  j["mode"] = std::string(to_string(chain.mode()));
  j["n"] = chain.size();
  j["reversible"] = is_reversible(chain);
  out.json(j);
  return kExitOk;
}

int cmd_stationary(const Options& o, Output& out) {
  need(o.chain, "--chain");
  const MarkovChain chain = read_chain(o.chain);
  Json j;
  j["chain"] = chain.name();
  j["labels"] = chain.labels();
  j["stationary"] = chain.stationary().to_vector();
  out.json(j);
  return kExitOk;
}

int cmd_hitting(const Options& o, Output& out) {
  need(o.chain, "--chain");
  need(o.set, "--set");
  const MarkovChain chain = read_chain(o.chain);
  const StateSet target(chain.size(), parse_indices(o.set, chain.size()));
  const Eigen::VectorXd h = expected_hitting(chain, target);
  Json j;
  j["chain"] = chain.name();
  j["set"] = target.members();
  j["mass"] = chain.stationary().mass(target);
  j["expected"] = std::vector<double>(h.data(), h.data() + h.size());
  const Distribution mu0 = start_law(o, chain);
  j["harmonic_measure"] = harmonic_measure(chain, mu0, target).to_vector();
  if (o.t) {
    const Eigen::VectorXd s = hit_survival_from_each(chain, target, *o.t);
    j["t"] = *o.t;
    j["survival"] = std::vector<double>(s.data(), s.data() + s.size());
  }
  out.json(j);
  return kExitOk;
}

int cmd_thit(const Options& o, Output& out) {
  need(o.chain, "--chain");
  const MarkovChain chain = read_chain(o.chain);
  const HittingReport report =
      o.alpha ? t_hit_alpha(chain, *o.alpha, enumeration(o)) : t_hit_product(chain, enumeration(o));
  out.json(report_to_json(chain, report));
  return kExitOk;
}

int cmd_rule(const Options& o, Output& out) {
  need(o.chain, "--chain");
  const MarkovChain chain = read_chain(o.chain);
  const Distribution mu0 = start_law(o, chain);
  const StoppingRule rule =
      o.target_dist.empty() ? build_rule(chain, mu0)
                            : build_rule(chain, mu0, distribution_from_json(read_json(o.target_dist), chain.size()));
  out.json(rule_to_json(chain, rule));
  return kExitOk;
}

int cmd_mix(const Options& o, Output& out) {
  need(o.chain, "--chain");
  const MarkovChain chain = read_chain(o.chain);
  const MixingProfile p = o.cesaro ? cesaro_mixing_time(chain, o.delta) : mixing_time(chain, o.delta);
  Json j;
  j["chain"] = chain.name();
  const Json profile = profile_to_json(p);
  for (const auto& [k, v] : profile.items()) j[k] = v;
  out.json(j);
  return kExitOk;
}

int cmd_simulate(const Options& o, Output& out) {
  need(o.chain, "--chain");
  need(o.rule, "--rule");
  if (o.samples == 0) usage("--samples must be positive");
  const MarkovChain chain = read_chain(o.chain);
  const StoppingRule rule = rule_from_json(chain, read_json(o.rule));
  const RuleSimulation sim = simulate_rule(chain, rule, o.samples, o.seed, o.workers);
  out.json(simulation_to_json(chain, rule, sim));
  return kExitOk;
}

int cmd_verify(const Options& o, Output& out) {
  if (o.suite.empty() == o.chain.empty()) usage("verify takes exactly one of --suite default or --chain");
  if (o.format != "json" && o.format != "csv") usage("--format must be json or csv");
  std::vector<MarkovChain> suite;
  if (!o.suite.empty()) {
    if (o.suite != "default") usage("unknown suite '" + o.suite + "'");
    suite = default_suite();
  } else {
    suite.push_back(read_chain(o.chain));
  }
  std::vector<double> alphas{0.1, 0.25, 0.4};
  if (o.alpha) {
    if (!(*o.alpha > 0.0 && *o.alpha < 0.5)) {
      throw Error(ErrorKind::BadAlpha, "--alpha must lie in (0, 1/2)");
    }
    alphas = {*o.alpha};
  }
  VerifyOptions options;
  options.enumeration = enumeration(o);
  options.seed = o.seed;
  const std::vector<VerifyRecord> records = run_suite(suite, alphas, options);

  if (o.format == "csv") {
    write_records_csv(out.stream(), records);
  } else {
    std::size_t failed = 0;
    for (const VerifyRecord& r : records) failed += (r.must_pass && !r.pass) ? 1 : 0;
    Json j;
    j["records"] = records_to_json(records);
    j["constants"] = constants_to_json(empirical_constants(suite, alphas, options).rows);
    j["summary"] = {{"records", records.size()}, {"failed_must_pass", failed}};
    out.json(j);
  }
  return all_must_pass(records) ? kExitOk : kExitFailedRecord;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov chain mixing and hitting times"};
  app.name("mchit");
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write output to this file");
    sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
    sub->add_option("--config", o.config, "JSON config: tolerances, max_exact, seed, format, workers");
    sub->add_option("--seed", o.seed, "Random seed");
  };
  auto with_chain = [&o, &common](CLI::App* sub) {
    common(sub);
    sub->add_option("--chain", o.chain, "Chain file");
  };
  auto with_enumeration = [&o](CLI::App* sub) {
    sub->add_flag("--heuristic", o.heuristic, "Allow greedy search above the exact cap");
    sub->add_option("--max-exact", o.max_exact, "Exact enumeration cap (log2 of candidate sets)");
  };

  CLI::App* family = app.add_subcommand("family", "Generate a named chain");
  common(family);
  family->add_option("--name", o.name, "Family name");
  family->add_option("--n", o.n, "Size parameter");
  family->add_option("--mode", o.mode, "continuous or discrete");
  family->add_option("--params", o.params, "Family parameters as key=value,...");

  CLI::App* validate = app.add_subcommand("validate", "Validate a chain file");
  with_chain(validate);
  CLI::App* stat = app.add_subcommand("stationary", "Stationary distribution");
  with_chain(stat);

  CLI::App* hitting = app.add_subcommand("hitting", "Expected hitting times of a set");
  with_chain(hitting);
  hitting->add_option("--set", o.set, "Target states, comma separated");
  hitting->add_option("--start", o.start, "Start state for the harmonic measure");
  hitting->add_option("--start-dist", o.start_dist, "Start law file");
  hitting->add_option("--t", o.t, "Also report P_x[H_A > t]");

  CLI::App* thit = app.add_subcommand("thit", "Maximal expected hitting time");
  with_chain(thit);
  with_enumeration(thit);
  thit->add_option("--alpha", o.alpha, "Restrict to sets of stationary mass >= alpha");

  CLI::App* rule = app.add_subcommand("rule", "Build the stationary stopping rule");
  with_chain(rule);
  rule->add_option("--start", o.start, "Start state");
  rule->add_option("--start-dist", o.start_dist, "Start law file");
  rule->add_option("--target-dist", o.target_dist, "Target law file (default: stationary)");

  CLI::App* mix = app.add_subcommand("mix", "Mixing time");
  with_chain(mix);
  mix->add_option("--delta", o.delta, "Distance threshold");
  mix->add_flag("--cesaro", o.cesaro, "Use the Cesaro average");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of a stopping rule");
  with_chain(simulate);
  simulate->add_option("--rule", o.rule, "Rule file");
  simulate->add_option("--samples", o.samples, "Number of samples");

  CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
  with_chain(verify);
  with_enumeration(verify);
  verify->add_option("--suite", o.suite, "Suite name (default)");
  verify->add_option("--alpha", o.alpha, "Single alpha instead of the default grid");
  verify->add_option("--format", o.format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!o.config.empty()) {
      std::set<std::string> given;
      for (const char* flag : {"--max-exact", "--seed", "--format", "--workers"}) {
        if (sub->get_option_no_throw(flag) && sub->count(flag) > 0) given.insert(flag);
      }
      apply_config(o.config, o, given);
    }
    if (o.max_exact < 2) usage("--max-exact must be at least 2");
    set_default_workers(o.workers);
    Output output(o.out, out);
    const std::string name = sub->get_name();
    if (name == "family") return cmd_family(o, output);
    if (name == "validate") return cmd_validate(o, output);
    if (name == "stationary") return cmd_stationary(o, output);
    if (name == "hitting") return cmd_hitting(o, output);
    if (name == "thit") return cmd_thit(o, output);
    if (name == "rule") return cmd_rule(o, output);
    if (name == "mix") return cmd_mix(o, output);
    if (name == "simulate") return cmd_simulate(o, output);
    return cmd_verify(o, output);
  } catch (const Error& e) {
    err << "mchit " << sub->get_name() << ": " << e.what() << '\n';
    if (e.kind() == ErrorKind::UsageError) err << sub->help();
    return kExitUsage;
  }
}

}  // namespace mchit
