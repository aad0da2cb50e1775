// One PASS/FAIL line per acceptance criterion. Exit status is nonzero iff any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mchit/families.hpp"
#include "mchit/hitting.hpp"
#include "mchit/mixing.hpp"
#include "mchit/monte_carlo.hpp"
#include "mchit/stopping_rule.hpp"
#include "mchit/verify.hpp"
#include "oracles.hpp"

using namespace mchit;

namespace {

constexpr double kRecordTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 = no runtime requirement
  std::function<void(Outcome&)> body;
};

std::vector<MarkovChain> random_suite() {
  std::vector<MarkovChain> out;
  for (std::uint64_t s = 0; s < 50; ++s) {
    out.push_back(make_family({"random", 3 + s % 10, {}, s % 2 ? Mode::Discrete : Mode::Continuous, s}));
  }
  return out;
}

std::vector<MarkovChain> reversible_suite() {
  std::vector<MarkovChain> out{oracle::c2()};
  for (const MarkovChain& c : default_suite()) {
    if (is_reversible(c)) out.push_back(c);
  }
  for (std::uint64_t s = 0; s < 10; ++s) out.push_back(oracle::reversible_chain(s, 3 + s));
  return out;
}

std::vector<MarkovChain> continuous_suite() {
  std::vector<MarkovChain> out = default_suite();
  for (const MarkovChain& c : random_suite()) {
    if (c.mode() == Mode::Continuous) out.push_back(c);
  }
  for (std::uint64_t s = 0; s < 10; ++s) out.push_back(oracle::reversible_chain(s, 3 + s));
  return out;
}

std::vector<MarkovChain> all_suite() {
  std::vector<MarkovChain> out = default_suite();
  for (const MarkovChain& c : random_suite()) out.push_back(c);
  return out;
}

std::uint64_t mask_of(const StateSet& s) {
  std::uint64_t m = 0;
  for (std::size_t x : s.members()) m |= std::uint64_t{1} << x;
  return m;
}

// Law of X_T from harmonic measures recomputed by elimination.
std::vector<double> oracle_rule_law(const MarkovChain& c, const StoppingRule& rule) {
  const oracle::Matrix g = oracle::generator(c);
  const std::size_t n = c.size();
  std::vector<double> law(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const StateSet set = rule.set(i);
    const std::vector<std::size_t> out = set.complement();
    for (std::size_t a : set.members()) {
      std::vector<double> absorb(n, 0.0);
      absorb[a] = 1.0;
      if (!out.empty()) {
        oracle::Matrix m(out.size(), std::vector<double>(out.size()));
        std::vector<double> b(out.size());
        for (std::size_t r = 0; r < out.size(); ++r) {
          for (std::size_t k = 0; k < out.size(); ++k) m[r][k] = g[out[r]][out[k]];
          b[r] = -g[out[r]][a];
        }
        const std::vector<double> x = oracle::gauss_solve(m, b);
        for (std::size_t r = 0; r < out.size(); ++r) absorb[out[r]] = x[r];
      }
      double rho = 0.0;
      for (std::size_t x = 0; x < n; ++x) rho += rule.initial()[x] * absorb[x];
      law[a] += rule.probs()[i] * rho;
    }
  }
  return law;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void check_records(Outcome& o, const std::vector<VerifyRecord>& records, std::size_t& count) {
  for (const VerifyRecord& r : records) {
    ++count;
    o.require(r.slack >= -kRecordTol && r.pass,
              r.claim + " on " + r.chain + " slack " + fmt(r.slack));
  }
}

void stationarity(Outcome& o) {
  double worst = 0.0;
  for (const MarkovChain& c : random_suite()) {
    const StoppingRule rule = build_rule(c, Distribution::point_mass(c.size(), c.size() / 2));
    const double lib = tv_distance(rule_law(c, rule), c.stationary());
    const std::vector<double> law = oracle_rule_law(c, rule);
    const std::vector<double> pi = oracle::stationary_law(c);
    double tv = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) tv += 0.5 * std::fabs(law[a] - pi[a]);
    worst = std::max({worst, lib, tv});
    o.require(lib <= 1e-9 && tv <= 1e-9, c.name());
  }
  o.note << "50 chains, max tv(law, pi) " << fmt(worst);
}

void construction(Outcome& o) {
  double worst_sum = 0.0, min_residual = 0.0, min_partial = 1.0, min_tail = 1.0;
  for (const MarkovChain& c : random_suite()) {
    const StoppingRule rule = build_rule(c, Distribution::point_mass(c.size(), c.size() / 2));
    const std::size_t n = rule.size();
    double sum = 0.0;
    for (double p : rule.probs()) sum += p;
    worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
    o.require(std::fabs(sum - 1.0) <= 1e-10, c.name() + " probability sum");
    for (double r : rule.diagnostics().step_min_residual) {
      min_residual = std::min(min_residual, r);
      o.require(r >= -1e-10, c.name() + " residual");
    }
    double partial = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      partial += rule.probs()[k];
      const double next = k + 1 < n ? c.stationary().mass(rule.set(k + 1)) : 0.0;
      min_partial = std::min(min_partial, partial - (1.0 - next));
      o.require(partial >= 1.0 - next - 1e-10, c.name() + " partial sum");
    }
    for (int e = 1; e <= 9; ++e) {
      const double eps = e / 10.0;
      double big = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (c.stationary().mass(rule.set(i)) >= eps) big += rule.probs()[i];
      }
      min_tail = std::min(min_tail, big - (1.0 - eps));
      o.require(big >= 1.0 - eps - 1e-10, c.name() + " set-size tail");
    }
  }
  o.note << "max |sum p - 1| " << fmt(worst_sum) << ", min residual " << fmt(min_residual)
         << ", min partial slack " << fmt(min_partial) << ", min tail slack " << fmt(min_tail);
}

void tails(Outcome& o) {
  const std::vector<double> eps{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t count = 0;
  for (const MarkovChain& c : random_suite()) {
    const double t_hit = t_hit_product(c).value;
    std::vector<double> ts;
    for (double f : {0.25, 1.0, 4.0, 16.0, 64.0}) ts.push_back(f * t_hit);
    const StoppingRule rule = build_rule(c, Distribution::point_mass(c.size(), 0));
    check_records(o, check_tail_bound(c, rule, eps, ts), count);
  }
  const MarkovChain c2 = oracle::c2();
  const StoppingRule rule = build_rule(c2, Distribution::point_mass(2, 0));
  double err = std::fabs(t_hit_product(c2).value - 1.0 / 3.0);
  for (double t : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    err = std::max(err, std::fabs(rule_tail(c2, rule, t) - std::exp(-t) / 3.0));
  }
  o.require(err <= 1e-9, "C2 closed forms");
  o.note << count << " records; C2 closed-form error " << fmt(err);
}

void theorem_main(Outcome& o) {
  std::size_t count = 0;
  double min_slack = 1.0;
  for (const MarkovChain& c : reversible_suite()) {
    for (double alpha : {0.1, 0.25, 0.4}) {
      const auto recs = verify_theorem_main(c, alpha);
      check_records(o, recs, count);
      // Independent recomputation: brute-force T_hit(alpha), Pade kernel at U.
      const double t_hit = oracle::t_hit_alpha(c, alpha).value;
      const double f = 8.0 / (1.0 - 2.0 * alpha);
      const double upper = (f + f * f) * t_hit;
      const Eigen::MatrixXd k = oracle::kernel(c, upper);
      double dbar = 0.0;
      for (Eigen::Index x = 0; x < k.rows(); ++x) {
        for (Eigen::Index z = 0; z < k.rows(); ++z) dbar = std::max(dbar, oracle::tv(k.row(x), k.row(z)));
      }
      const double bound = std::sqrt((1.0 + 2.0 * alpha) / 2.0);
      min_slack = std::min(min_slack, bound - dbar);
      o.require(dbar <= bound + kRecordTol, c.name() + " oracle d_bar(U)");
      o.require(std::fabs(recs.front().params[1].second - t_hit) <= 1e-9 * std::max(1.0, t_hit),
                c.name() + " T_hit mismatch");
    }
  }
  o.note << count << " records on reversible chains; min oracle slack " << fmt(min_slack);
}

void theorem_general(Outcome& o) {
  std::size_t count = 0;
  std::size_t chains = 0, nonrev = 0;
  for (const MarkovChain& c : continuous_suite()) {
    ++chains;
    nonrev += is_reversible(c) ? 0 : 1;
    for (double alpha : {0.1, 0.25, 0.4}) {
      std::vector<VerifyRecord> recs = verify_theorem_general(c, alpha);
      std::erase_if(recs, [](const VerifyRecord& r) { return r.claim != "thm-general-t-alpha"; });
      check_records(o, recs, count);
    }
  }
  o.note << count << " pairwise records on " << chains << " chains (" << nonrev << " non-reversible)";
}

void appendix(Outcome& o) {
  std::size_t count = 0;
  std::size_t survival = 0;
  for (const MarkovChain& c : all_suite()) {
    if (c.size() > 12) continue;
    for (double alpha : {0.2, 0.4}) {
      const auto recs = verify_appendix(c, alpha);
      for (const VerifyRecord& r : recs) survival += r.claim == "appendix-survival";
      check_records(o, recs, count);
      for (const VerifyRecord& r : recs) {
        if (r.claim != "appendix-thit") continue;
        const double brute = oracle::t_hit_alpha(c, alpha).value;
        o.require(std::fabs(r.lhs - brute) <= 1e-9 * std::max(1.0, brute), c.name() + " T_hit mismatch");
      }
    }
  }
  o.note << count << " records, " << survival << " of them P_x[H_A >= t*] <= 1 - alpha/2";
}

void counterexample(Outcome& o) {
  const auto recs = verify_counterexample({6, 10, 14}, 0.6, 1.3);
  std::vector<double> ratios;
  for (const VerifyRecord& r : recs) {
    if (r.claim == "counterexample-values") ratios.push_back(r.rhs);
    if (r.claim == "counterexample-growth") o.require(r.must_pass && r.pass, "growth record");
  }
  o.require(ratios.size() == 3, "three sizes");
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    o.require(ratios[i] >= 1.3 * ratios[i - 1] - kRecordTol, "factor 1.3");
  }
  o.note << "ratios";
  for (double r : ratios) o.note << " " << fmt(r);
}

void oracles(Outcome& o) {
  const MarkovChain c2 = oracle::c2();
  double kerr = 0.0;
  for (double t : {0.1, 1.0, 10.0}) {
    const Eigen::MatrixXd k = kernel_at(c2, t).matrix();
    const double e = std::exp(-3.0 * t);
    Eigen::MatrixXd ref(2, 2);
    ref << 2.0 / 3 + e / 3, 1.0 / 3 - e / 3, 2.0 / 3 - 2 * e / 3, 1.0 / 3 + 2 * e / 3;
    kerr = std::max(kerr, (k - ref).cwiseAbs().maxCoeff());
  }
  o.require(kerr <= 1e-10, "kernel_at(C2)");
  const double mix = mixing_time(c2, 0.25).time;
  o.require(std::fabs(mix - std::log(8.0 / 3.0) / 3.0) <= 1e-5, "mixing_time(C2, 1/4)");
  const Eigen::VectorXd h = expected_hitting(c2, StateSet(2, {1}));
  o.require(std::fabs(h(0) - 1.0) <= 1e-10 && std::fabs(h(1)) <= 1e-10, "expected_hitting(C2, {1})");
  const StoppingRule rule = build_rule(c2, Distribution::point_mass(2, 0));
  o.require(std::fabs(rule.probs()[0] - 2.0 / 3.0) <= 1e-10 && std::fabs(rule.probs()[1] - 1.0 / 3.0) <= 1e-10,
            "build_rule(C2, delta_0)");

  std::size_t compared = 0;
  double worst = 0.0;
  std::vector<MarkovChain> small;
  for (const MarkovChain& c : all_suite()) {
    if (c.size() <= 8) small.push_back(c);
  }
  for (const MarkovChain& c : small) {
    for (double alpha : {0.1, 0.25, 0.4, 0.6, 0.9}) {
      const HittingReport r = t_hit_alpha(c, alpha);
      const oracle::BruteHit b = oracle::t_hit_alpha(c, alpha);
      const double diff = std::fabs(r.value - b.value) / std::max(1.0, b.value);
      worst = std::max(worst, diff);
      o.require(diff <= 1e-9, c.name() + " T_hit(alpha)");
      const double realized = oracle::hitting(c, mask_of(r.witness_set))[r.witness_state];
      o.require(std::fabs(realized - r.value) <= 1e-9 * std::max(1.0, r.value), c.name() + " witness");
      ++compared;
    }
    const HittingReport p = t_hit_product(c);
    const double diff = std::fabs(p.value - oracle::t_hit_product(c).value) / std::max(1.0, p.value);
    worst = std::max(worst, diff);
    o.require(diff <= 1e-9, c.name() + " T_hit product");
    ++compared;
  }
  o.note << "C2 kernel error " << fmt(kerr) << ", T_mix error " << fmt(std::fabs(mix - std::log(8.0 / 3.0) / 3.0))
         << "; " << compared << " brute-force T_hit comparisons on " << small.size()
         << " chains, max rel diff " << fmt(worst);
}

void monte_carlo(Outcome& o) {
  std::vector<std::pair<MarkovChain, Distribution>> cases;
  cases.emplace_back(oracle::c2(), Distribution::point_mass(2, 0));
  cases.emplace_back(make_family({"cycle", 4, {}, Mode::Continuous, 0}), Distribution::point_mass(4, 0));
  cases.emplace_back(make_family({"random", 6, {}, Mode::Continuous, 1}), Distribution::point_mass(6, 2));
  cases.emplace_back(make_family({"random", 5, {}, Mode::Discrete, 2}), Distribution::uniform(5));
  const std::size_t samples = 100000;
  double worst_law = 0.0, worst_mean = 0.0;
  for (const auto& [c, mu0] : cases) {
    const StoppingRule rule = build_rule(c, mu0);
    const RuleSimulation one = simulate_rule(c, rule, samples, 42, 1);
    const RuleSimulation eight = simulate_rule(c, rule, samples, 42, 8);
    o.require(one.counts == eight.counts && one.mean_time == eight.mean_time, c.name() + " worker independence");
    for (std::size_t a = 0; a < c.size(); ++a) {
      const double pi = c.stationary()[a];
      const double z = std::fabs(one.law[a] - pi) / std::sqrt(pi / static_cast<double>(samples));
      worst_law = std::max(worst_law, z);
      o.require(z <= 4.0, c.name() + " law of X_T");
    }
    const double exact = rule_mean(c, rule);
    const double z = one.std_error > 0 ? std::fabs(one.mean_time - exact) / one.std_error : 0.0;
    worst_mean = std::max(worst_mean, z);
    o.require(z <= 3.0, c.name() + " mean of T");
  }
  o.note << cases.size() << " chains x 1e5 samples; max law deviation " << fmt(worst_law)
         << " sqrt(pi/N), max mean deviation " << fmt(worst_mean) << " SE; 1 and 8 workers identical";
}

void submultiplicativity(Outcome& o) {
  std::size_t count = 0;
  for (const MarkovChain& c : all_suite()) {
    const double tau = mixing_time(c, 0.25).time;
    std::vector<double> grid;
    for (double f : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      grid.push_back(c.mode() == Mode::Discrete ? std::max(1.0, std::ceil(f * tau)) : f * tau);
    }
    check_records(o, check_submultiplicativity(c, grid, grid), count);
  }
  o.note << count << " records";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "stopping-rule stationarity", 120.0, stationarity},
      {2, "construction invariants", 0.0, construction},
      {3, "tail bounds", 0.0, tails},
      {4, "reversible d_bar(U) bound", 120.0, theorem_main},
      {5, "pairwise Cesaro bound at t(alpha)", 0.0, theorem_general},
      {6, "appendix proposition", 0.0, appendix},
      {7, "two-cliques ratio growth", 0.0, counterexample},
      {8, "oracle cross-checks", 0.0, oracles},
      {9, "Monte Carlo concordance", 180.0, monte_carlo},
      {10, "d_bar submultiplicativity", 0.0, submultiplicativity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.note << "; over the " << c.budget_seconds << " s budget";
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d %s  %-36s %7.2fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.note.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
