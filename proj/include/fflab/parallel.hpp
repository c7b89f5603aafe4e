#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <thread>
#include <vector>

// Deterministic parallelism: work on [0, n) is cut into fixed-size blocks
// whose boundaries do not depend on the worker count. Each block is reduced
// serially in index order, block results are combined by a pairwise tree
// whose shape depends only on the block count. A run with --workers 7 is
// therefore bit-identical to a serial run.

namespace fflab {

struct ExecPolicy {
  unsigned workers = 1;
};

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct KahanComplexSum {
  KahanSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline constexpr std::size_t kDefaultBlock = 4096;

template <class T, class BlockFn, class Combine>
T block_reduce(std::size_t n, T identity, BlockFn&& block_fn, Combine&& combine,
               ExecPolicy policy = {}, std::size_t block_size = kDefaultBlock) {
  if (n == 0) return identity;
  if (block_size == 0) block_size = 1;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<T> results(nblocks, identity);

  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(n, lo + block_size);
    results[b] = block_fn(lo, hi);
  };

  unsigned workers = std::max(1u, policy.workers);
  if (workers == 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) run_block(b);
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, nblocks));
    pool.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // pairwise tree over block results, fixed shape
  std::vector<T> level = std::move(results);
  while (level.size() > 1) {
    std::vector<T> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      up.push_back(combine(level[i], level[i + 1]));
    if (level.size() % 2 == 1) up.push_back(level.back());
    level = std::move(up);
  }
  return level.front();
}

}  // namespace fflab
