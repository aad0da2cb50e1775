#include "mchit/mixing.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "mchit/config.hpp"
#include "mchit/error.hpp"
#include "mchit/uniformization.hpp"

namespace mchit {
namespace {

constexpr double kMaxContinuousMean = 1e12;  // lambda * t beyond which we give up
constexpr double kMaxSteps = 1099511627776.0;  // 2^40
constexpr int kScanPoints = 64;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::BadDelta, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

// Evaluates a distance curve and remembers every point for the profile.
class Curve {
 public:
  template <class F>
  explicit Curve(F f) : f_(std::move(f)) {}

  double operator()(double t) {
    auto it = points_.find(t);
    if (it != points_.end()) return it->second;
    const double d = f_(t);
    points_.emplace(t, d);
    return d;
  }

  std::vector<std::pair<double, double>> points() const { return {points_.begin(), points_.end()}; }

 private:
  std::function<double(double)> f_;
  std::map<double, double> points_;
};

// Smallest passing point in (lo, hi] by bisection, given d(lo) > delta >= d(hi).
double bisect(Curve& d, double delta, double lo, double hi, bool integral) {
  const double rel = tolerances().bisection_relative;
  if (integral) {
    while (hi - lo > 1.0) {
      const double mid = std::floor((lo + hi) / 2.0);
      (d(mid) <= delta ? hi : lo) = mid;
    }
    return hi;
  }
  while (hi - lo > rel * hi) {
    const double mid = 0.5 * (lo + hi);
    (d(mid) <= delta ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::string_view to_string(MixingKind kind) { return kind == MixingKind::Plain ? "plain" : "cesaro"; }

double max_row_distance(const Kernel& kernel, const Distribution& reference) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < kernel.matrix().rows(); ++x) {
    worst = std::max(worst, tv_distance(kernel.matrix().row(x).transpose(), reference.weights()));
  }
  return worst;
}

double max_pair_distance(const Kernel& kernel) {
  const Eigen::MatrixXd& m = kernel.matrix();
  double worst = 0.0;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index z = x + 1; z < m.rows(); ++z) {
      worst = std::max(worst, tv_distance(m.row(x).transpose(), m.row(z).transpose()));
    }
  }
  return worst;
}

double d_worst(const MarkovChain& chain, double t) {
  return max_row_distance(kernel_at(chain, t), chain.stationary());
}

double d_bar(const MarkovChain& chain, double t) { return max_pair_distance(kernel_at(chain, t)); }

Kernel cesaro_kernel(const MarkovChain& chain, double t) {
  if (chain.mode() == Mode::Discrete) {
    if (t < 1.0) throw Error(ErrorKind::BadTime, "discrete Cesaro horizon must be an integer >= 1");
    return Kernel(uniformization::power_average(chain.step_matrix(), step_count(t)));
  }
  if (!(t > 0.0)) throw Error(ErrorKind::BadTime, "Cesaro horizon must be positive");
  return Kernel(uniformization::average_matrix(chain.step_matrix(), chain.uniformization_rate() * t,
                                               tolerances().poisson_tail));
}

double cesaro_distance(const MarkovChain& chain, double t) {
  const bool origin = chain.mode() == Mode::Discrete ? t <= 1.0 : t <= 0.0;
  if (origin) return 1.0 - chain.stationary().weights().minCoeff();
  return max_row_distance(cesaro_kernel(chain, t), chain.stationary());
}

MixingProfile mixing_time(const MarkovChain& chain, double delta) {
  check_delta(delta);
  const bool discrete = chain.mode() == Mode::Discrete;
  Curve d([&chain](double t) { return d_worst(chain, t); });
  MixingProfile profile;
  profile.delta = delta;
  profile.kind = MixingKind::Plain;

  if (d(0.0) <= delta) {
    profile.time = 0.0;
    profile.curve = d.points();
    return profile;
  }
  double lo = 0.0;
  double hi = discrete ? 1.0 : 1.0 / chain.uniformization_rate();
  while (d(hi) > delta) {
    lo = hi;
    hi *= 2.0;
    const double reach = discrete ? hi : hi * chain.uniformization_rate();
    if (reach > (discrete ? kMaxSteps : kMaxContinuousMean)) {
      throw Error(ErrorKind::NotMixing, "distance to stationarity stays above " + std::to_string(delta));
    }
  }
  profile.time = bisect(d, delta, lo, hi, discrete);
  profile.curve = d.points();
  return profile;
}

MixingProfile cesaro_mixing_time(const MarkovChain& chain, double delta) {
  check_delta(delta);
  const bool discrete = chain.mode() == Mode::Discrete;
  Curve d([&chain](double t) { return cesaro_distance(chain, t); });
  MixingProfile profile;
  profile.delta = delta;
  profile.kind = MixingKind::Cesaro;

  const double origin = discrete ? 1.0 : 0.0;
  if (d(origin) <= delta) {
    profile.time = origin;
    profile.curve = d.points();
    return profile;
  }
  double hi = discrete ? 2.0 : 1.0 / chain.uniformization_rate();
  while (d(hi) > delta) {
    hi *= 2.0;
    const double reach = discrete ? hi : hi * chain.uniformization_rate();
    if (reach > (discrete ? kMaxSteps : kMaxContinuousMean)) {
      throw Error(ErrorKind::NotMixing, "Cesaro distance stays above " + std::to_string(delta));
    }
  }

  // No monotonicity is assumed: scan (origin, hi] for the first passing point.
  std::vector<double> grid;
  if (discrete) {
    const double span = hi - origin;
    if (span <= kScanPoints) {
      for (double t = origin + 1.0; t <= hi; t += 1.0) grid.push_back(t);
    } else {
      for (int j = 1; j <= kScanPoints; ++j) grid.push_back(std::floor(origin + span * j / kScanPoints));
    }
  } else {
    for (int j = 1; j <= kScanPoints; ++j) grid.push_back(hi * j / kScanPoints);
  }
  double lo = origin;
  double first = hi;
  for (double t : grid) {
    if (d(t) <= delta) {
      first = t;
      break;
    }
    lo = t;
  }
  profile.time = bisect(d, delta, lo, first, discrete);
  profile.curve = d.points();
  return profile;
}

std::vector<VerifyRecord> check_submultiplicativity(const MarkovChain& chain, const std::vector<double>& s_grid,
                                                    const std::vector<double>& t_grid) {
  std::vector<VerifyRecord> records;
  std::map<double, double> cache;
  auto dbar = [&](double t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    return cache[t] = d_bar(chain, t);
  };
  for (double s : s_grid) {
    for (double t : t_grid) {
      if (s < 0.0 || t < 0.0) throw Error(ErrorKind::NegativeTime, "grid times must be nonnegative");
      records.push_back(make_record("dbar-submult", chain.name(), {{"s", s}, {"t", t}}, dbar(s + t),
                                    dbar(s) * dbar(t), "d_bar(s+t) <= d_bar(s) d_bar(t)"));
    }
  }
  return records;
}

}  // namespace mchit
