#include "mchit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mchit/error.hpp"
#include "mchit/families.hpp"
#include "mchit/mixing.hpp"
#include "mchit/parallel.hpp"
#include "mchit/stopping_rule.hpp"

namespace mchit {

namespace constants {

double general_horizon(double alpha) { return 64.0 / ((1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha)); }

double general_distance(double alpha) { return (1.0 + 2.0 * alpha) / 2.0; }

double main_lower_factor(double alpha) { return 8.0 / (1.0 - 2.0 * alpha); }

double main_upper_factor(double alpha) {
  const double f = main_lower_factor(alpha);
  return f + f * f;
}

double main_distance(double alpha) { return std::sqrt((1.0 + 2.0 * alpha) / 2.0); }

namespace {
double steps_to_quarter(double contraction) {
  return std::ceil(std::log(0.25) / std::log(contraction));
}
}  // namespace

double main_upper_constant(double alpha) {
  return steps_to_quarter(main_distance(alpha)) * main_upper_factor(alpha);
}

double general_upper_constant(double alpha) {
  return steps_to_quarter(general_distance(alpha)) * general_horizon(alpha);
}

double lower_constant(double alpha) { return (2.0 / alpha) * (std::log2(1.0 / alpha) + 1.0); }

}  // namespace constants

namespace {

void require_half_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::BadAlpha, "alpha must lie in (0, 1/2), got " + std::to_string(alpha));
  }
}

void require_continuous(const MarkovChain& chain) {
  if (chain.mode() != Mode::Continuous) {
    throw Error(ErrorKind::WrongMode, "this certificate is stated for continuous-time chains");
  }
}

std::vector<double> scaled(const std::vector<double>& factors, double unit) {
  std::vector<double> out;
  for (double f : factors) out.push_back(f * unit);
  return out;
}

double set_code(const StateSet& set) {
  double code = 0.0;
  for (std::size_t m : set.members()) code += std::ldexp(1.0, static_cast<int>(m));
  return code;
}

// Index of the single point mass, or -1 for a spread-out law.
double start_code(const Distribution& mu0) {
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    if (mu0[i] == 1.0) return static_cast<double>(i);
  }
  return -1.0;
}

}  // namespace

std::vector<VerifyRecord> verify_lemma(const MarkovChain& chain, const Distribution& mu0,
                                       const std::vector<double>& eps_grid, const std::vector<double>& t_grid,
                                       const VerifyOptions& options) {
  const StoppingRule rule = build_rule(chain, mu0);
  std::vector<VerifyRecord> records = check_tail_bound(chain, rule, eps_grid, t_grid, options.enumeration);
  const double start = start_code(mu0);
  for (VerifyRecord& r : records) r.params.insert(r.params.begin(), {"start", start});
  return records;
}

std::vector<VerifyRecord> verify_theorem_general(const MarkovChain& chain, double alpha,
                                                 const VerifyOptions& options) {
  require_half_open(alpha);
  require_continuous(chain);
  const double t_hit = t_hit_alpha(chain, alpha, options.enumeration).value;
  const double horizon = constants::general_horizon(alpha) * t_hit;
  const double bound = constants::general_distance(alpha);

  std::vector<VerifyRecord> records;
  const Eigen::MatrixXd avg = cesaro_kernel(chain, horizon).matrix();
  const auto n = static_cast<Eigen::Index>(chain.size());
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index z = 0; z < n; ++z) {
      if (x == z) continue;
      records.push_back(make_record(
          "thm-general-t-alpha", chain.name(),
          {{"alpha", alpha}, {"t_hit", t_hit}, {"t", horizon}, {"x", static_cast<double>(x)},
           {"z", static_cast<double>(z)}},
          tv_distance(avg.row(x).transpose(), avg.row(z).transpose()), bound,
          "Cesaro rows at t(alpha) = 64 T_hit(alpha)/(1-2alpha)^2 are within (1+2alpha)/2"));
    }
  }
  for (double factor : {1.0, 4.0, 16.0, constants::general_horizon(alpha)}) {
    const double t = factor * t_hit;
    records.push_back(make_record("thm-general-intermediate", chain.name(),
                                  {{"alpha", alpha}, {"t_hit", t_hit}, {"t", t}},
                                  max_pair_distance(cesaro_kernel(chain, t)),
                                  2.0 * alpha + 4.0 * std::sqrt(t_hit / t),
                                  "pairwise Cesaro distance <= 2 alpha + 4 sqrt(T_hit(alpha)/t) for t >= T_hit"));
  }
  return records;
}

std::vector<VerifyRecord> verify_theorem_main(const MarkovChain& chain, double alpha, const VerifyOptions& options) {
  require_half_open(alpha);
  require_continuous(chain);
  if (!is_reversible(chain)) throw Error(ErrorKind::NotReversible, chain.name() + " is not reversible");
  const double t_hit = t_hit_alpha(chain, alpha, options.enumeration).value;
  const double lower = constants::main_lower_factor(alpha) * t_hit;
  const double upper = constants::main_upper_factor(alpha) * t_hit;
  return {make_record("thm-main-LU", chain.name(), {{"alpha", alpha}, {"t_hit", t_hit}, {"L", lower}, {"U", upper}},
                      d_bar(chain, upper), constants::main_distance(alpha),
                      "reversible chains: d_bar(U) <= sqrt((1+2alpha)/2) with L = 8T/(1-2a), "
                      "U = [8/(1-2a) + (8/(1-2a))^2] T")};
}

std::vector<VerifyRecord> verify_appendix(const MarkovChain& chain, double alpha, const VerifyOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::BadAlpha, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  const HittingTable table = HittingTable::build(chain, options.enumeration);
  const double t_star = cesaro_mixing_time(chain, alpha / 2.0).time;
  const double scale = (2.0 / alpha) * t_star;
  // P[H_A >= t*]: continuous laws have no atom at t* > 0; discrete H_A >= t* iff H_A > t* - 1.
  const double survival_time = chain.mode() == Mode::Discrete ? t_star - 1.0 : t_star;
  const double floor = alpha - tolerances().set_mass;

  std::vector<VerifyRecord> records;
  for (const HittingTable::Entry& e : table.entries()) {
    if (e.mass < floor) continue;
    const Eigen::VectorXd survive = hit_survival_from_each(chain, e.set, survival_time);
    const Eigen::VectorXd mean = expected_hitting(chain, e.set);
    for (std::size_t x = 0; x < chain.size(); ++x) {
      const auto xi = static_cast<Eigen::Index>(x);
      const std::vector<std::pair<std::string, double>> params{
          {"alpha", alpha}, {"t_star", t_star}, {"set", set_code(e.set)}, {"x", static_cast<double>(x)}};
      records.push_back(make_record("appendix-survival", chain.name(), params, survive(xi), 1.0 - alpha / 2.0,
                                    "P_x[H_A >= t*] <= 1 - alpha/2 for pi(A) >= alpha"));
      records.push_back(make_record("appendix-2-over-alpha", chain.name(), params, mean(xi), scale,
                                    "E_x[H_A] <= (2/alpha) t* for pi(A) >= alpha"));
    }
  }
  const HittingReport report = table.t_hit_alpha(alpha);
  records.push_back(make_record("appendix-thit", chain.name(),
                                {{"alpha", alpha}, {"t_star", t_star}, {"set", set_code(report.witness_set)},
                                 {"x", static_cast<double>(report.witness_state)}},
                                report.value, scale, "T_hit(alpha) <= (2/alpha) T_rmix(alpha/2), Cesaro witness"));
  return records;
}

std::vector<VerifyRecord> verify_counterexample(const std::vector<std::size_t>& n_list, double alpha, double growth,
                                                const VerifyOptions& options) {
  if (n_list.empty()) throw Error(ErrorKind::BadSizes, "no sizes given");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw Error(ErrorKind::BadSizes, "sizes must be >= 2 and strictly increasing");
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::BadAlpha, "alpha must lie in (0, 1)");
  const bool asserted = alpha > 0.5;

  std::vector<VerifyRecord> records;
  std::vector<double> ratios;
  for (std::size_t n : n_list) {
    const MarkovChain chain = make_family({"two-cliques", n, {}, Mode::Continuous, 0});
    const double t_hit = t_hit_alpha(chain, alpha, options.enumeration).value;
    const double t_mix = mixing_time(chain, 0.25).time;
    ratios.push_back(t_mix / t_hit);
    records.push_back(make_record("counterexample-values", chain.name(),
                                  {{"alpha", alpha}, {"n", static_cast<double>(n)}, {"t_hit", t_hit}, {"t_mix", t_mix}},
                                  0.0, ratios.back(), "two cliques joined by an edge: T_mix(1/4)/T_hit(alpha)",
                                  false));
  }
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    records.push_back(make_record("counterexample-growth", "two-cliques",
                                  {{"alpha", alpha}, {"n_prev", static_cast<double>(n_list[i - 1])},
                                   {"n", static_cast<double>(n_list[i])}, {"growth", growth},
                                   {"ratio_prev", ratios[i - 1]}, {"ratio", ratios[i]}},
                                  growth * ratios[i - 1], ratios[i],
                                  "for alpha > 1/2 the ratio T_mix(1/4)/T_hit(alpha) is unbounded", asserted));
  }
  return records;
}

ConstantsReport empirical_constants(const std::vector<MarkovChain>& suite, const std::vector<double>& alpha_grid,
                                    const VerifyOptions& options) {
  struct Measured {
    const MarkovChain* chain;
    bool reversible;
    double t_mix;
    double t_ces;
    HittingTable table;
  };
  std::vector<Measured> measured;
  for (const MarkovChain& chain : suite) {
    if (chain.mode() != Mode::Continuous) continue;
    measured.push_back({&chain, is_reversible(chain), mixing_time(chain, 0.25).time,
                        cesaro_mixing_time(chain, 0.25).time, HittingTable::build(chain, options.enumeration)});
  }

  ConstantsReport report;
  for (double alpha : alpha_grid) {
    require_half_open(alpha);
    ConstantsRow row;
    row.alpha = alpha;
    row.lower_constant = constants::lower_constant(alpha);
    row.main_upper_constant = constants::main_upper_constant(alpha);
    row.general_upper_constant = constants::general_upper_constant(alpha);
    row.min_mix_ratio = row.min_cesaro_ratio = std::numeric_limits<double>::infinity();
    row.max_mix_ratio = row.max_cesaro_ratio = 0.0;
    for (const Measured& m : measured) {
      const double t_hit = m.table.t_hit_alpha(alpha).value;
      const double mix = m.t_mix / t_hit;
      const double ces = m.t_ces / t_hit;
      const std::string& name = m.chain->name();
      const std::vector<std::pair<std::string, double>> params{
          {"alpha", alpha}, {"t_hit", t_hit}, {"t_mix", m.t_mix}, {"t_ces", m.t_ces}};
      ++row.chains;
      row.min_cesaro_ratio = std::min(row.min_cesaro_ratio, ces);
      row.max_cesaro_ratio = std::max(row.max_cesaro_ratio, ces);
      report.records.push_back(make_record("constants-mix-lower", name, params, 1.0 / row.lower_constant, mix,
                                           "T_mix(1/4)/T_hit(alpha) >= 1/c_low(alpha)"));
      report.records.push_back(make_record("constants-ces-lower", name, params, 1.0 / row.lower_constant, ces,
                                           "T_ces(1/4)/T_hit(alpha) >= 1/c_low(alpha)"));
      report.records.push_back(make_record("constants-ces-upper", name, params, ces, row.general_upper_constant,
                                           "T_ces(1/4)/T_hit(alpha) <= k(alpha) 64/(1-2alpha)^2"));
      if (m.reversible) {
        row.min_mix_ratio = std::min(row.min_mix_ratio, mix);
        row.max_mix_ratio = std::max(row.max_mix_ratio, mix);
        report.records.push_back(make_record("constants-mix-upper", name, params, mix, row.main_upper_constant,
                                             "reversible: T_mix(1/4)/T_hit(alpha) <= k(alpha) U/T_hit"));
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::vector<MarkovChain> default_suite() {
  std::vector<MarkovChain> suite;
  ChainSpec c2;
  c2.mode = Mode::Continuous;
  c2.matrix = {{-1.0, 1.0}, {2.0, -2.0}};
  c2.name = "c2";
  suite.push_back(validate_chain(c2));

  const Mode ct = Mode::Continuous;
  suite.push_back(make_family({"cycle", 5, {}, ct, 0}));
  suite.push_back(make_family({"complete", 6, {}, ct, 0}));
  suite.push_back(make_family({"hypercube", 3, {}, ct, 0}));
  suite.push_back(make_family({"two-cliques", 4, {}, ct, 0}));
  suite.push_back(make_family({"birth-death", 7, {}, ct, 0}));
  suite.push_back(make_family({"bipartite-plus-edge", 3, {}, ct, 0}));
  suite.push_back(make_family({"biased-cycle", 3, {}, ct, 0}));
  suite.push_back(make_family({"biased-cycle", 6, {}, ct, 0}));
  suite.push_back(make_family({"random", 6, {}, ct, 1}));
  suite.push_back(make_family({"random", 8, {}, ct, 2}));
  suite.push_back(make_family({"random", 10, {}, ct, 3}));
  return suite;
}

std::vector<VerifyRecord> run_suite(const std::vector<MarkovChain>& suite, const std::vector<double>& alpha_grid,
                                    const VerifyOptions& options) {
  const std::vector<double> eps_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> t_factors{0.25, 1.0, 4.0, 16.0, 64.0};
  const std::vector<double> dbar_factors{0.1, 0.5, 1.0, 2.0, 5.0};

  std::vector<double> appendix_alphas = alpha_grid;
  appendix_alphas.insert(appendix_alphas.end(), {0.2, 0.4});
  std::sort(appendix_alphas.begin(), appendix_alphas.end());
  appendix_alphas.erase(std::unique(appendix_alphas.begin(), appendix_alphas.end()), appendix_alphas.end());

  // One task per chain; inner enumerations stay single-threaded.
  VerifyOptions inner = options;
  inner.enumeration.workers = 1;
  std::vector<std::vector<VerifyRecord>> per_chain(suite.size());
  parallel_for(suite.size(), options.enumeration.workers, [&](std::size_t c) {
    const MarkovChain& chain = suite[c];
    std::vector<VerifyRecord>& out = per_chain[c];
    auto append = [&out](std::vector<VerifyRecord> more) {
      out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    const std::size_t n = chain.size();
    const double t_hit = t_hit_product(chain, inner.enumeration).value;

    for (const Distribution& mu0 : {Distribution::point_mass(n, 0), Distribution::point_mass(n, n - 1),
                                    Distribution::uniform(n)}) {
      append(verify_lemma(chain, mu0, eps_grid, scaled(t_factors, t_hit), inner));
      out.push_back(check_halting_state(chain, build_rule(chain, mu0), inner.seed, inner.halting_paths));
    }

    std::vector<double> grid = scaled(dbar_factors, mixing_time(chain, 0.25).time);
    if (chain.mode() == Mode::Discrete) {
      for (double& g : grid) g = std::max(1.0, std::ceil(g));
    }
    append(check_submultiplicativity(chain, grid, grid));

    for (double alpha : alpha_grid) {
      if (chain.mode() == Mode::Continuous && alpha < 0.5) {
        append(verify_theorem_general(chain, alpha, inner));
        if (is_reversible(chain)) append(verify_theorem_main(chain, alpha, inner));
      }
    }
    for (double alpha : appendix_alphas) append(verify_appendix(chain, alpha, inner));
  });

  std::vector<VerifyRecord> records;
  for (auto& part : per_chain) {
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  auto add = [&records](std::vector<VerifyRecord> more) {
    records.insert(records.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  add(verify_counterexample({6, 10, 14}, 0.6, 1.3, options));
  add(verify_counterexample({6, 10, 14}, 0.3, 1.3, options));
  std::vector<double> below_half;
  for (double a : alpha_grid) {
    if (a < 0.5) below_half.push_back(a);
  }
  add(empirical_constants(suite, below_half, options).records);
  sort_records(records);
  return records;
}

}  // namespace mchit
