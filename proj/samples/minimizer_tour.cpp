// Walks through the library on one order: build a Singer difference set,
// turn it into a unimodular tuple, look at its power sums, and recover the
// set again from the angles alone.
//
//   ./minimizer_tour [q]     (q a prime power, default 4)

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "powersum/minimax.hpp"
#include "powersum/pds.hpp"
#include "powersum/power_sums.hpp"

int main(int argc, char** argv) {
  using namespace powersum;
  const std::int64_t q = argc > 1 ? std::atoll(argv[1]) : 4;

  const auto d = pds::singer_construct(q);
  std::printf("Singer set of order %lld mod %lld:", static_cast<long long>(q), static_cast<long long>(d.m));
  for (auto a : d.residues) std::printf(" %lld", static_cast<long long>(a));
  std::printf("\n");

  const auto t = fabrykowski_tuple(d, 0.3);
  const auto profile = power_sums(t);
  std::printf("n = %zu, max |S(nu)| over nu = 1..%lld: %.15f (sqrt(n-1) = %.15f)\n", t.n(),
              static_cast<long long>(profile.nu_max()), profile.max_abs, std::sqrt(static_cast<double>(q)));

  const auto cert = fejer_certificate(t);
  std::printf("weighted epsilon sum: %.3e (holds: %s)\n", cert.weighted_sum, cert.holds() ? "yes" : "no");

  const auto r = recover_structure(t);
  std::printf("recovery: %s, alpha = %.6f turns, canonical set:", to_string(r.status), r.alpha_turns);
  if (r.pds) {
    for (auto a : pds::canonical_form(*r.pds).residues) std::printf(" %lld", static_cast<long long>(a));
  }
  std::printf("\n");
  return 0;
}
