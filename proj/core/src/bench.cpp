#include "stabpack/bench.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fmt/format.h>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "stabpack/isgraph.hpp"
#include "stabpack/param.hpp"
#include "stabpack/separator.hpp"
#include "stabpack/stabbing.hpp"

namespace stabpack {

namespace {

struct Outcome {
  std::string status = "ok";
  std::vector<int> witness;
  bool decision_only = false;
};

Outcome solve(const std::string& algo, const std::vector<AxisBox>& objs) {
  Outcome o;
  try {
    if (algo == "brute") {
      o.witness = mis_bruteforce(build_intersection_graph(objs)).witness;
    } else if (algo == "sparse") {
      o.witness = mis_sparse(build_intersection_graph(objs)).witness;
    } else if (algo == "separator") {
      o.witness = solve_mis_separator(objs).witness;
    } else if (algo == "param") {
      // Decide at the optimum found by the sparse solver.
      const int k = mis_sparse(build_intersection_graph(objs)).size;
      const auto r = solve_mis_param(objs, k);
      if (!r.accept) o.status = "error";
      o.witness = r.witness;
    } else {
      o.status = "error";
    }
  } catch (const CapExceeded&) {
    o.status = "cap";
  }
  return o;
}

struct Shared {
  std::mutex mu;
  std::condition_variable cv;
  std::optional<Outcome> result;
};

}  // namespace

int thread_count_from_env() {
  if (const char* s = std::getenv("STABPACK_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  struct Job {
    int n;
    Coord L;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int n : cfg.ns) {
    for (Coord L : cfg.Ls) {
      for (int r = 0; r < cfg.reps; ++r) jobs.push_back({n, L, cfg.seed + static_cast<std::uint64_t>(r)});
    }
  }
  const std::size_t per_job = cfg.algos.size();
  std::vector<BenchRecord> rows(jobs.size() * per_job);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      const Job& job = jobs[j];
      const auto objs = std::make_shared<const std::vector<AxisBox>>(
          gen_random_boxes(job.n, cfg.d, cfg.shape, job.seed, job.L));
      const double alpha = estimate_stabbing_number(*objs).alpha;
      const auto graph = build_intersection_graph(*objs);
      for (std::size_t a = 0; a < per_job; ++a) {
        BenchRecord& rec = rows[j * per_job + a];
        rec.n = job.n;
        rec.d = cfg.d;
        rec.L = job.L;
        rec.shape = to_string(cfg.shape);
        rec.seed = job.seed;
        rec.alpha = alpha;
        rec.algo = cfg.algos[a];
        auto shared = std::make_shared<Shared>();
        const auto start = std::chrono::steady_clock::now();
        std::thread([shared, objs, algo = rec.algo] {
          Outcome o = solve(algo, *objs);
          const std::lock_guard<std::mutex> lock(shared->mu);
          shared->result = std::move(o);
          shared->cv.notify_all();
        }).detach();
        std::unique_lock<std::mutex> lock(shared->mu);
        const bool done = shared->cv.wait_for(lock, std::chrono::duration<double>(cfg.timeout_s),
                                              [&] { return shared->result.has_value(); });
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (!done) {
          rec.status = "timeout";
          continue;
        }
        rec.status = shared->result->status;
        if (rec.status == "ok") {
          rec.size = static_cast<int>(shared->result->witness.size());
          rec.verified = is_independent_set(graph, shared->result->witness);
        }
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads > 0 ? cfg.threads : thread_count_from_env(),
                                                static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

std::string bench_csv_header() { return "n,d,L,shape,seed,alpha,algo,status,size,verified,wall_ms\n"; }

std::string to_csv(const BenchRecord& r) {
  return fmt::format("{},{},{},{},{},{:.4f},{},{},{},{},{:.3f}\n", r.n, r.d, r.L, r.shape, r.seed, r.alpha, r.algo,
                     r.status, r.size, r.verified ? 1 : 0, r.wall_ms);
}

}  // namespace stabpack
