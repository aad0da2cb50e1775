#include "mchit/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mchit/error.hpp"

namespace mchit {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::vector<double> number_array(const Json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number()) parse_fail(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::size_t> index_array(const Json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + " must be an array");
  std::vector<std::size_t> out;
  for (const Json& v : j) {
    if (!v.is_number_unsigned()) parse_fail(what + " must contain state indices");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

Json params_to_json(const std::vector<std::pair<std::string, double>>& params) {
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return p;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

ChainSpec chain_spec_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("chain file must hold a JSON object");
  ChainSpec spec;
  if (!j.contains("mode") || !j["mode"].is_string()) parse_fail("chain file needs a string \"mode\"");
  try {
    spec.mode = parse_mode(j["mode"].get<std::string>());
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  if (!j.contains("matrix") || !j["matrix"].is_array()) parse_fail("chain file needs a \"matrix\" array");
  for (const Json& row : j["matrix"]) spec.matrix.push_back(number_array(row, "matrix rows"));
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) parse_fail("\"labels\" must be an array");
    for (const Json& l : j["labels"]) {
      if (l.is_string()) {
        spec.labels.push_back(l.get<std::string>());
      } else if (l.is_number()) {
        spec.labels.push_back(l.dump());
      } else {
        parse_fail("labels must be strings or numbers");
      }
    }
  }
  if (j.contains("name") && j["name"].is_string()) spec.name = j["name"].get<std::string>();
  return spec;
}

Json chain_to_json(const MarkovChain& chain) {
  const ChainSpec spec = chain.to_spec();
  Json j;
  j["name"] = spec.name;
  j["mode"] = std::string(to_string(spec.mode));
  j["labels"] = spec.labels;
  j["matrix"] = spec.matrix;
  return j;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

MarkovChain read_chain(const std::filesystem::path& path) {
  ChainSpec spec = chain_spec_from_json(read_json(path));
  if (spec.name == "chain") spec.name = path.stem().string();
  return validate_chain(spec);
}

Distribution distribution_from_json(const Json& j, std::size_t n) {
  const Json& arr = j.is_object() && j.contains("weights") ? j["weights"] : j;
  std::vector<double> w = number_array(arr, "distribution weights");
  if (w.size() != n) {
    throw Error(ErrorKind::LengthMismatch,
                "distribution has " + std::to_string(w.size()) + " entries, chain has " + std::to_string(n));
  }
  return Distribution::from_weights(w);
}

Json rule_to_json(const MarkovChain& chain, const StoppingRule& rule) {
  const auto& d = rule.diagnostics();
  Json j;
  j["chain"] = chain.name();
  j["fingerprint"] = hex64(rule.chain_fingerprint());
  j["n"] = chain.size();
  j["mu0"] = rule.initial().to_vector();
  j["target"] = rule.target().to_vector();
  j["ordering"] = rule.ordering();
  j["probs"] = rule.probs();
  j["halting_state"] = rule.halting_state();
  j["mean"] = rule_mean(chain, rule);
  j["diagnostics"] = {{"probability_sum", d.probability_sum},
                      {"stationarity_residual", d.law_error},
                      {"min_partial_sum_slack", d.min_partial_sum_slack},
                      {"step_min_residual", d.step_min_residual}};
  return j;
}

StoppingRule rule_from_json(const MarkovChain& chain, const Json& j) {
  if (!j.is_object()) parse_fail("rule file must hold a JSON object");
  for (const char* key : {"fingerprint", "mu0", "target", "ordering", "probs"}) {
    if (!j.contains(key)) parse_fail(std::string("rule file lacks \"") + key + "\"");
  }
  if (!j["fingerprint"].is_string() || j["fingerprint"].get<std::string>() != hex64(chain.fingerprint())) {
    throw Error(ErrorKind::ChainMismatch, "rule was built for a different chain");
  }
  const std::size_t n = chain.size();
  return restore_rule(chain, distribution_from_json(j["mu0"], n), distribution_from_json(j["target"], n),
                      index_array(j["ordering"], "ordering"), number_array(j["probs"], "probs"));
}

Json report_to_json(const MarkovChain& chain, const HittingReport& report) {
  Json j;
  j["chain"] = chain.name();
  j["value"] = report.value;
  j["witness_set"] = report.witness_set.members();
  j["witness_state"] = report.witness_state;
  j["witness_mass"] = chain.stationary().mass(report.witness_set);
  if (report.alpha) {
    j["alpha"] = *report.alpha;
  } else {
    j["alpha"] = "unrestricted";
  }
  j["exact"] = report.exact;
  return j;
}

Json profile_to_json(const MixingProfile& profile) {
  Json j;
  j["kind"] = std::string(to_string(profile.kind));
  j["delta"] = profile.delta;
  j["time"] = profile.time;
  Json curve = Json::array();
  for (const auto& [t, d] : profile.curve) curve.push_back({t, d});
  j["curve"] = curve;
  return j;
}

Json simulation_to_json(const MarkovChain& chain, const StoppingRule& rule, const RuleSimulation& sim) {
  Json j;
  j["chain"] = chain.name();
  j["samples"] = sim.samples;
  j["seed"] = sim.seed;
  j["mean_time"] = sim.mean_time;
  j["std_error"] = sim.std_error;
  j["exact_mean"] = rule_mean(chain, rule);
  j["counts"] = sim.counts;
  j["law"] = sim.law;
  j["target"] = rule.target().to_vector();
  return j;
}

Json records_to_json(const std::vector<VerifyRecord>& records) {
  Json arr = Json::array();
  for (const VerifyRecord& r : records) {
    Json j;
    j["claim"] = r.claim;
    j["chain"] = r.chain;
    j["params"] = params_to_json(r.params);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["pass"] = r.pass;
    j["must_pass"] = r.must_pass;
    j["provenance"] = r.provenance;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json constants_to_json(const std::vector<ConstantsRow>& rows) {
  Json arr = Json::array();
  for (const ConstantsRow& r : rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"chains", r.chains},
                   {"min_mix_ratio", r.min_mix_ratio},
                   {"max_mix_ratio", r.max_mix_ratio},
                   {"min_cesaro_ratio", r.min_cesaro_ratio},
                   {"max_cesaro_ratio", r.max_cesaro_ratio},
                   {"lower_bound", 1.0 / r.lower_constant},
                   {"main_upper_constant", r.main_upper_constant},
                   {"general_upper_constant", r.general_upper_constant}});
  }
  return arr;
}

void write_records_csv(std::ostream& out, const std::vector<VerifyRecord>& records) {
  out << "claim,chain,params,lhs,rhs,slack,pass,must_pass,provenance\n";
  for (const VerifyRecord& r : records) {
    std::ostringstream params;
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      if (i) params << ';';
      params << r.params[i].first << '=' << format_double(r.params[i].second);
    }
    out << csv_field(r.claim) << ',' << csv_field(r.chain) << ',' << csv_field(params.str()) << ','
        << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.slack) << ','
        << (r.pass ? "true" : "false") << ',' << (r.must_pass ? "true" : "false") << ','
        << csv_field(r.provenance) << '\n';
  }
}

}  // namespace mchit
