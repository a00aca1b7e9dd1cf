// Benchmark sweeps over random instances; one CSV row per (instance, solver).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stabpack/instance_io.hpp"

namespace stabpack {

struct BenchConfig {
  std::vector<int> ns{8, 12, 16};
  std::vector<Coord> Ls{16};
  int d = 3;
  BoxShape shape = BoxShape::Mixed;
  std::uint64_t seed = 1;
  int reps = 1;
  std::vector<std::string> algos{"brute", "sparse", "separator", "param"};
  double timeout_s = 30;
  int threads = 0;  // 0: STABPACK_THREADS, else hardware concurrency
};

struct BenchRecord {
  int n = 0, d = 0;
  Coord L = 0;
  std::string shape;
  std::uint64_t seed = 0;
  double alpha = 0;  // stabbing number estimate of the instance
  std::string algo;
  std::string status;  // ok, timeout, cap or error
  int size = -1;
  bool verified = false;  // witness checked independent and of the reported size
  double wall_ms = 0;
};

// STABPACK_THREADS if set and positive, else the hardware concurrency.
int thread_count_from_env();

// Runs every (n, L, rep) grid point against every solver. A solver that
// overruns the timeout is abandoned (its thread is detached) and recorded as
// "timeout". Rows come back in grid order regardless of scheduling.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

std::string bench_csv_header();
std::string to_csv(const BenchRecord& r);

}  // namespace stabpack
