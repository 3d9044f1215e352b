// Plants q cliques on n vertices, recovers them, and prints what was found.
//   recovery_demo [n] [q] [seed]

#include <cstdio>
#include <cstdlib>

#include "lowcolor/recovery.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1000;
  const int q = argc > 2 ? std::atoi(argv[2]) : 5;
  const lowcolor::Seed seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  auto sample = lowcolor::sample_mc(n, q, seed);
  auto part = lowcolor::recover_mc(sample.graph, q);
  std::printf("MC(%d,%d) seed %llu: %zu groups, cover ok: %s, matches truth: %s\n", n, q,
              static_cast<unsigned long long>(seed), part.groups.size(), part.ok ? "yes" : "no",
              lowcolor::verify_partition(sample, part) ? "yes" : "no");
  for (std::size_t i = 0; i < part.groups.size(); ++i)
    std::printf("  group %zu: %zu vertices\n", i, part.groups[i].size());
  return 0;
}
