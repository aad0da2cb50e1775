#include "mchit/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mchit/error.hpp"

namespace mchit {
namespace {

using Matrix = std::vector<std::vector<double>>;

double param(const FamilySpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

void require_size(const FamilySpec& spec, std::size_t lo, std::size_t hi) {
  if (spec.n < lo || spec.n > hi) {
    throw Error(ErrorKind::BadSize, spec.name + " needs size in [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "], got " + std::to_string(spec.n));
  }
}

// Random walk on an undirected graph given by adjacency lists: rate 1/deg per
// neighbour (continuous) or probability 1/deg (discrete).
Matrix graph_walk(const std::vector<std::vector<std::size_t>>& adj, Mode mode) {
  const std::size_t n = adj.size();
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    const double w = 1.0 / static_cast<double>(adj[x].size());
    for (std::size_t y : adj[x]) m[x][y] += w;
  }
  if (mode == Mode::Continuous) {
    for (std::size_t x = 0; x < n; ++x) {
      double out = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        if (y != x) out += m[x][y];
      }
      m[x][x] = -out;
    }
  }
  return m;
}

// Weighted rows: continuous rates with the diagonal closing the row, or
// normalized transition probabilities.
Matrix weighted(Matrix w, Mode mode) {
  const std::size_t n = w.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (mode == Mode::Continuous) {
      double out = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        if (y != x) out += w[x][y];
      }
      w[x][x] = -out;
    } else {
      double total = 0.0;
      for (double v : w[x]) total += v;
      for (double& v : w[x]) v /= total;
    }
  }
  return w;
}

bool strongly_connected(const Matrix& w) {
  const std::size_t n = w.size();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y) {
        const double v = pass == 0 ? w[x][y] : w[y][x];
        if (x != y && v > 0.0 && !seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

Matrix random_chain(const FamilySpec& spec) {
  const std::size_t n = spec.n;
  std::mt19937_64 engine(spec.seed);
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  for (;;) {
    Matrix w(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const bool self = x == y;
        if (self && spec.mode == Mode::Continuous) continue;
        if (uniform() < 0.5) w[x][y] = 0.05 + uniform();
      }
    }
    if (!strongly_connected(w)) continue;
    if (spec.mode == Mode::Continuous) {
      // Total exit rate uniform in [0.5, 1.5].
      for (std::size_t x = 0; x < n; ++x) {
        double out = 0.0;
        for (std::size_t y = 0; y < n; ++y) out += w[x][y];
        const double rate = 0.5 + uniform();
        for (double& v : w[x]) v *= rate / out;
      }
    }
    return weighted(std::move(w), spec.mode);
  }
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"complete",    "cycle",       "biased-cycle",        "two-cliques",
                                              "hypercube",   "birth-death", "bipartite-plus-edge", "random"};
  return names;
}

MarkovChain make_family(const FamilySpec& spec) {
  const std::size_t n = spec.n;
  Matrix m;
  std::string name = spec.name + "-" + std::to_string(n);
  std::vector<std::vector<std::size_t>> adj;

  if (spec.name == "complete") {
    require_size(spec, 2, 4096);
    adj.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y) adj[x].push_back(y);
      }
    }
    m = graph_walk(adj, spec.mode);
  } else if (spec.name == "cycle") {
    require_size(spec, 3, 4096);
    adj.resize(n);
    for (std::size_t x = 0; x < n; ++x) adj[x] = {(x + n - 1) % n, (x + 1) % n};
    m = graph_walk(adj, spec.mode);
  } else if (spec.name == "biased-cycle") {
    require_size(spec, 3, 4096);
    const double cw = param(spec, "cw", 2.0);
    const double ccw = param(spec, "ccw", 1.0);
    if (!(cw > 0.0 && ccw > 0.0)) throw Error(ErrorKind::BadSize, "biased-cycle rates must be positive");
    Matrix w(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
      w[x][(x + 1) % n] += cw;
      w[x][(x + n - 1) % n] += ccw;
    }
    m = weighted(std::move(w), spec.mode);
  } else if (spec.name == "two-cliques") {
    require_size(spec, 2, 2048);
    adj.resize(2 * n);
    for (std::size_t side = 0; side < 2; ++side) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (x != y) adj[side * n + x].push_back(side * n + y);
        }
      }
    }
    adj[n - 1].push_back(n);
    adj[n].push_back(n - 1);
    m = graph_walk(adj, spec.mode);
  } else if (spec.name == "hypercube") {
    require_size(spec, 1, 10);
    const std::size_t states = std::size_t{1} << n;
    adj.resize(states);
    for (std::size_t x = 0; x < states; ++x) {
      for (std::size_t bit = 0; bit < n; ++bit) adj[x].push_back(x ^ (std::size_t{1} << bit));
    }
    m = graph_walk(adj, spec.mode);
  } else if (spec.name == "birth-death") {
    require_size(spec, 2, 4096);
    const double up = param(spec, "up", 0.6);
    if (!(up > 0.0 && up < 1.0)) throw Error(ErrorKind::BadSize, "birth-death 'up' must lie in (0, 1)");
    Matrix w(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
      if (x + 1 < n) w[x][x + 1] = up;
      if (x > 0) w[x][x - 1] = 1.0 - up;
    }
    if (spec.mode == Mode::Discrete) {
      w[0][0] = 1.0 - up;
      w[n - 1][n - 1] = up;
    }
    m = weighted(std::move(w), spec.mode);
  } else if (spec.name == "bipartite-plus-edge") {
    require_size(spec, 2, 2048);
    adj.resize(2 * n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = n; y < 2 * n; ++y) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }
    }
    adj[0].push_back(1);
    adj[1].push_back(0);
    m = graph_walk(adj, spec.mode);
  } else if (spec.name == "random") {
    require_size(spec, 2, 512);
    m = random_chain(spec);
    name += "-s" + std::to_string(spec.seed);
  } else {
    throw Error(ErrorKind::UnknownFamily, "unknown family '" + spec.name + "'");
  }

  ChainSpec chain_spec;
  chain_spec.mode = spec.mode;
  chain_spec.matrix = std::move(m);
  chain_spec.name = name + (spec.mode == Mode::Discrete ? "-d" : "");
  return validate_chain(chain_spec);
}

}  // namespace mchit
