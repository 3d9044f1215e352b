// Runs the spectral refuter on a random graph and on a planted colouring.
//   refute_demo [n] [q] [seed]

#include <cstdio>
#include <cstdlib>

#include "lowcolor/refute.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 256;
  const int q = argc > 2 ? std::atoi(argv[2]) : 4;
  const lowcolor::Seed seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
  const int m = lowcolor::default_m(n);

  auto random = lowcolor::spectral_refuter(lowcolor::sample_gnp_half(n, seed), q, m);
  auto planted = lowcolor::spectral_refuter(lowcolor::complement(lowcolor::sample_mc(n, q, seed).graph), q, m);
  std::printf("n=%d q=%d m=%d\n", n, q, m);
  std::printf("  G(n,1/2):           %-5s f=%.4g\n", lowcolor::to_string(random.verdict), random.value);
  std::printf("  planted colouring:  %-5s f=%.4g\n", lowcolor::to_string(planted.verdict), planted.value);
  return 0;
}
