#include "metastab/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace metastab {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

uint64_t Xoshiro256::next() {
  const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

void Xoshiro256::jump() {
  static constexpr uint64_t kJump[] = {0x180EC6D33CFD0ABAULL, 0xD5A61266F0C9392CULL,
                                       0xA9582618E03FC9AAULL, 0x39ABDC4529B1661CULL};
  uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  for (uint64_t word : kJump)
    for (int b = 0; b < 64; ++b) {
      if (word & (uint64_t(1) << b)) {
        s0 ^= state_[0];
        s1 ^= state_[1];
        s2 ^= state_[2];
        s3 ^= state_[3];
      }
      next();
    }
  state_[0] = s0;
  state_[1] = s1;
  state_[2] = s2;
  state_[3] = s3;
}

double Xoshiro256::next_open01() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

Xoshiro256 path_stream(uint64_t seed, uint64_t index) {
  return Xoshiro256(seed + kGolden * (index + 1));
}

namespace {

double sample_standard_normal(Xoshiro256& rng) {
  double u1 = rng.next_open01();
  double u2 = rng.next_open01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang for shape >= 1; boosted from shape+1 below 1.
double sample_gamma_shape(double shape, Xoshiro256& rng) {
  if (shape < 1.0) {
    double u = rng.next_open01();
    return sample_gamma_shape(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = sample_standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    double u = rng.next_open01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

double sample_sojourn(const SojournFamily& family, double mean, Xoshiro256& rng) {
  double draw = 0.0;
  do {
    switch (family.kind) {
      case SojournKind::Exponential:
        draw = -mean * std::log(rng.next_open01());
        break;
      case SojournKind::Gamma: {
        double shape = family.gamma_shape.get_d();
        draw = sample_gamma_shape(shape, rng) * (mean / shape);
        break;
      }
      case SojournKind::LogNormal: {
        double sigma = family.lognormal_sigma;
        double mu = std::log(mean) - 0.5 * sigma * sigma;
        draw = std::exp(mu + sigma * sample_standard_normal(rng));
        break;
      }
    }
  } while (!(draw > 0.0));
  return draw;
}

int ConcreteKernel::sample_next(int state, Xoshiro256& rng) const {
  const std::vector<double>& cdf = row_cdf[state];
  double u = rng.next_open01();
  for (size_t j = 0; j + 1 < cdf.size(); ++j)
    if (u <= cdf[j]) return static_cast<int>(j);
  return static_cast<int>(cdf.size()) - 1;
}

ConcreteKernel instantiate(const ReducedSpec& spec, double eps) {
  const int m = spec.size();
  ConcreteKernel kernel;
  kernel.eps = eps;
  kernel.states = spec.states;
  kernel.P.assign(m, std::vector<double>(m, 0.0));
  kernel.row_cdf.assign(m, std::vector<double>(m, 0.0));
  kernel.mean.resize(m);
  kernel.family = spec.sojourn;

  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      if (spec.P(i, j).is_zero()) continue;
      double p = evaluate(spec.basis, spec.P(i, j), eps);
      if (p > 1.1)
        throw EvaluationError("evaluated probability " + std::to_string(p) + " on edge " +
                              spec.states[i] + " -> " + spec.states[j] +
                              " exceeds 1 by more than 10%: eps too large for the regime");
      kernel.P[i][j] = p;
      row_sum += p;
    }
    if (!(row_sum > 0)) throw EvaluationError("empty row at state " + spec.states[i]);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      kernel.P[i][j] /= row_sum;
      acc += kernel.P[i][j];
      kernel.row_cdf[i][j] = acc;
    }
    kernel.row_cdf[i][m - 1] = 1.0;
    kernel.mean[i] = evaluate(spec.basis, spec.tau[i], eps);
    if (!(kernel.mean[i] > 0))
      throw EvaluationError("nonpositive sojourn mean at state " + spec.states[i]);
  }
  return kernel;
}

PathSample sample_path(const ConcreteKernel& kernel, int initial, double horizon,
                       const std::vector<int>& stopping, uint64_t seed) {
  std::vector<bool> stop(kernel.size(), false);
  for (int s : stopping) stop[s] = true;

  PathSample path;
  path.seed = seed;
  Xoshiro256 rng(seed);
  int state = initial;
  double elapsed = 0.0;
  while (true) {
    double d = sample_sojourn(kernel.family[state], kernel.mean[state], rng);
    path.steps.emplace_back(state, d);
    elapsed += d;
    if (elapsed > horizon) break;
    state = kernel.sample_next(state, rng);
    if (stop[state]) {
      path.steps.emplace_back(state, sample_sojourn(kernel.family[state], kernel.mean[state], rng));
      break;
    }
  }
  return path;
}

std::pair<double, double> wilson_interval(long long successes, long long trials) {
  const double z = 1.959963984540054;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double denom = 1.0 + z * z / n;
  double center = (p + z * z / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

template <class PerPath>
void fan_out(long long paths, int workers, PerPath per_path) {
  workers = std::max(1, workers);
  if (workers == 1) {
    for (long long p = 0; p < paths; ++p) per_path(p);
    return;
  }
  std::atomic<long long> cursor{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        long long p = cursor.fetch_add(1);
        if (p >= paths) break;
        per_path(p);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace

OccupationResult occupation_distribution(const ConcreteKernel& kernel, int initial, double t,
                                         long long paths, uint64_t seed, int workers) {
  if (paths < 1) throw std::invalid_argument("need at least one path");
  if (!(t > 0)) throw std::invalid_argument("occupation time must be positive");

  std::vector<std::atomic<long long>> counts(kernel.size());
  for (auto& c : counts) c.store(0);

  fan_out(paths, workers, [&](long long p) {
    Xoshiro256 rng = path_stream(seed, static_cast<uint64_t>(p));
    int state = initial;
    double elapsed = 0.0;
    while (true) {
      double d = sample_sojourn(kernel.family[state], kernel.mean[state], rng);
      if (elapsed + d > t) break;
      elapsed += d;
      state = kernel.sample_next(state, rng);
    }
    counts[state].fetch_add(1);
  });

  OccupationResult result;
  result.initial = initial;
  result.t = t;
  result.paths = paths;
  result.seed = seed;
  result.rng = std::string(Xoshiro256::kName) + "; per-path stream = seed + golden*(path+1)";
  result.counts.resize(kernel.size());
  result.frequency.resize(kernel.size());
  result.wilson95.resize(kernel.size());
  for (int s = 0; s < kernel.size(); ++s) {
    result.counts[s] = counts[s].load();
    result.frequency[s] = static_cast<double>(result.counts[s]) / static_cast<double>(paths);
    result.wilson95[s] = wilson_interval(result.counts[s], paths);
  }
  return result;
}

std::vector<double> exit_time_samples(const ConcreteKernel& kernel,
                                      const std::vector<int>& cluster, int initial,
                                      long long paths, uint64_t seed, int workers,
                                      long long max_total_steps) {
  if (cluster.size() < 2)
    throw std::invalid_argument("exit-time sampling needs a cluster with at least two states");
  std::vector<bool> inside(kernel.size(), false);
  for (int s : cluster) inside[s] = true;
  if (!inside[initial]) throw std::invalid_argument("initial state outside the cluster");

  std::vector<double> samples(paths);
  std::atomic<long long> steps{0};
  std::atomic<bool> exhausted{false};

  fan_out(paths, workers, [&](long long p) {
    if (exhausted.load()) return;
    Xoshiro256 rng = path_stream(seed, static_cast<uint64_t>(p));
    int state = initial;
    double elapsed = 0.0;
    long long local = 0;
    while (true) {
      elapsed += sample_sojourn(kernel.family[state], kernel.mean[state], rng);
      state = kernel.sample_next(state, rng);
      ++local;
      if (!inside[state]) break;
      if ((local & 0xFFF) == 0 && steps.load() + local > max_total_steps) {
        exhausted.store(true);
        return;
      }
    }
    steps.fetch_add(local);
    samples[p] = elapsed;
  });

  if (exhausted.load() || steps.load() > max_total_steps)
    throw std::runtime_error("exit-time sampling exceeded the step budget");
  return samples;
}

double ks_vs_exp1(std::vector<double> samples, double normalizer) {
  if (samples.empty()) throw std::invalid_argument("KS statistic needs samples");
  if (!(normalizer > 0)) throw std::invalid_argument("KS normalizer must be positive");
  for (double& s : samples) s /= normalizer;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t idx = 0; idx < samples.size(); ++idx) {
    double cdf = 1.0 - std::exp(-samples[idx]);
    double upper = static_cast<double>(idx + 1) / n - cdf;
    double lower = cdf - static_cast<double>(idx) / n;
    d = std::max({d, upper, lower});
  }
  return d;
}

namespace {

// (I - Q) x = b with Q the restriction of the kernel to E; relative residual
// is checked against 1e-10.
Eigen::MatrixXd transient_system(const ConcreteKernel& kernel, const std::vector<int>& E) {
  const int n = static_cast<int>(E.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A(r, c) -= kernel.P[E[r]][E[c]];
  return A;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  double scale = std::max(b.norm(), 1e-300);
  if ((A * x - b).norm() / scale > 1e-10)
    throw std::runtime_error("oracle linear solve residual above 1e-10");
  return x;
}

int position_in(const std::vector<int>& set, int element) {
  for (size_t pos = 0; pos < set.size(); ++pos)
    if (set[pos] == element) return static_cast<int>(pos);
  throw std::invalid_argument("state not in the transient set");
}

}  // namespace

std::vector<double> oracle_visits(const ConcreteKernel& kernel, const std::vector<int>& E,
                                  int initial) {
  const int n = static_cast<int>(E.size());
  Eigen::MatrixXd A = transient_system(kernel, E);
  // Row of the fundamental matrix: solve the transposed system once.
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
  unit(position_in(E, initial)) = 1.0;
  Eigen::VectorXd row = solve_checked(A.transpose(), unit);
  return std::vector<double>(row.data(), row.data() + n);
}

std::vector<double> oracle_hitting(const ConcreteKernel& kernel, const std::vector<int>& E,
                                   int initial) {
  const int n = static_cast<int>(E.size());
  std::vector<bool> inside(kernel.size(), false);
  for (int s : E) inside[s] = true;
  std::vector<int> outside;
  for (int s = 0; s < kernel.size(); ++s)
    if (!inside[s]) outside.push_back(s);

  Eigen::MatrixXd A = transient_system(kernel, E);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  std::vector<double> hitting(kernel.size(), 0.0);
  int start = position_in(E, initial);
  for (int target : outside) {
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) b(r) = kernel.P[E[r]][target];
    Eigen::VectorXd h = lu.solve(b);
    double scale = std::max(b.norm(), 1e-300);
    if ((A * h - b).norm() / scale > 1e-10)
      throw std::runtime_error("oracle linear solve residual above 1e-10");
    hitting[target] = h(start);
  }
  return hitting;
}

double oracle_mean_exit(const ConcreteKernel& kernel, const std::vector<int>& E, int initial) {
  const int n = static_cast<int>(E.size());
  Eigen::MatrixXd A = transient_system(kernel, E);
  Eigen::VectorXd means(n);
  for (int r = 0; r < n; ++r) means(r) = kernel.mean[E[r]];
  Eigen::VectorXd expected = solve_checked(A, means);
  return expected(position_in(E, initial));
}

}  // namespace metastab
