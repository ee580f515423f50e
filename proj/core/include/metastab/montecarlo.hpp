#ifndef METASTAB_MONTECARLO_HPP
#define METASTAB_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "metastab/model.hpp"

namespace metastab {

// xoshiro256++ 1.0 (Blackman/Vigna, public domain algorithm), 256-bit state
// with jump support. Streams for parallel work are derived per path via
// splitmix64, so aggregation order never matters.
class Xoshiro256 {
 public:
  static constexpr const char* kName = "xoshiro256++ 1.0";

  explicit Xoshiro256(uint64_t seed);
  uint64_t next();
  void jump();

  // Uniform in the open interval (0, 1); never returns an endpoint.
  double next_open01();

 private:
  uint64_t state_[4];
};

uint64_t splitmix64(uint64_t& state);

// Deterministic per-path stream: seeds path `index` of a run with master
// seed `seed`. Documented so independent workers reproduce the same paths.
Xoshiro256 path_stream(uint64_t seed, uint64_t index);

// Strictly positive draw from a mean-parameterized sojourn family.
double sample_sojourn(const SojournFamily& family, double mean, Xoshiro256& rng);

// The family at one concrete eps: evaluated transition matrix with rows
// renormalized to sum 1, per-state sojourn means and families.
struct ConcreteKernel {
  double eps;
  std::vector<std::string> states;
  std::vector<std::vector<double>> P;
  std::vector<std::vector<double>> row_cdf;
  std::vector<double> mean;
  std::vector<SojournFamily> family;

  int size() const { return static_cast<int>(states.size()); }
  int sample_next(int state, Xoshiro256& rng) const;
};

// Fails loudly when any evaluated probability exceeds 1 by more than 10%
// before renormalization (eps too large for the asymptotic regime).
ConcreteKernel instantiate(const ReducedSpec& spec, double eps);

// One realized trajectory: the visited states with their sojourn durations,
// bit-exactly reproducible from (kernel, seed).
struct PathSample {
  uint64_t seed;
  std::vector<std::pair<int, double>> steps;  // (state, duration), durations > 0
};

// Simulates from `initial` until the clock passes `horizon` or the chain
// enters `stopping` (empty = no stopping set). The final entry carries the
// sojourn that crossed the horizon or the stopping state with duration of
// its first sojourn there.
PathSample sample_path(const ConcreteKernel& kernel, int initial, double horizon,
                       const std::vector<int>& stopping, uint64_t seed);

struct OccupationResult {
  int initial;
  double t;
  long long paths;
  uint64_t seed;
  std::string rng;
  std::vector<long long> counts;
  std::vector<double> frequency;
  std::vector<std::pair<double, double>> wilson95;
};

// State occupied at clock time t over N independent paths started at
// `initial`, with 95% Wilson intervals per state. Bit-exact for a fixed
// (kernel, seed, N) regardless of `workers`.
OccupationResult occupation_distribution(const ConcreteKernel& kernel, int initial, double t,
                                         long long paths, uint64_t seed, int workers = 1);

// First-exit times from `cluster` (a set of state indices containing the
// start). The sojourn of the last in-cluster state counts toward the exit.
// The step budget guards non-terminating runs across the whole batch.
std::vector<double> exit_time_samples(const ConcreteKernel& kernel,
                                      const std::vector<int>& cluster, int initial,
                                      long long paths, uint64_t seed, int workers = 1,
                                      long long max_total_steps = 1000000000LL);

// Kolmogorov-Smirnov statistic of samples/normalizer against Exp(1).
double ks_vs_exp1(std::vector<double> samples, double normalizer);

// Exact fundamental-matrix computations on the evaluated kernel, solved with
// a dense direct method (relative residual <= 1e-10, checked).
//   visits:    row `initial` of (I-Q)^{-1} over E, i.e. expected visits to
//              each member of E before leaving E (counting the start).
//   hitting:   absorption distribution over the complement of E.
//   mean exit: expected clock time to leave E.
std::vector<double> oracle_visits(const ConcreteKernel& kernel, const std::vector<int>& E,
                                  int initial);
std::vector<double> oracle_hitting(const ConcreteKernel& kernel, const std::vector<int>& E,
                                   int initial);
double oracle_mean_exit(const ConcreteKernel& kernel, const std::vector<int>& E, int initial);

std::pair<double, double> wilson_interval(long long successes, long long trials);

}  // namespace metastab

#endif
