#pragma once

#include <cstddef>

namespace mchit {

// Numeric tolerances shared by every module. Defaults are the documented
// contract; the CLI may override them once at startup via set_tolerances().
struct Tolerances {
  double row_sum = 1e-12;             // chain rows sum to 0 (generator) or 1 (stochastic)
  double negative_mass = 1e-12;       // distribution entries above -this are clamped to 0
  double mass_sum = 1e-10;            // distribution sums within this of 1
  double poisson_tail = 1e-13;        // uniformization truncation mass
  double stationary_residual = 1e-10; // |pi Q| or |pi (P - I)|, relative to the rate scale
  double reversibility = 1e-9;        // detailed balance slack, relative to the rate scale
  double record_slack = 1e-9;         // a verification record passes iff rhs - lhs >= -this
  double rule_stationarity = 1e-9;    // tv(rule law, pi)
  double rule_mass = 1e-10;           // sum of rule probabilities, residual floor, partial sums
  double set_mass = 1e-12;            // pi(A) >= alpha is tested as pi(A) >= alpha - this
  double tie = 1e-12;                 // relative tie width in arg-max selection
  double bisection_relative = 1e-6;   // mixing-time search resolution
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& t);

// Subset enumeration refuses more than 2^max_exact candidate sets.
inline constexpr std::size_t kDefaultMaxExact = 16;

}  // namespace mchit
