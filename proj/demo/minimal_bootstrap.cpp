// Bootstrap pool for R^(10) in the Poisson/uniform model, compared with a
// small exact sample.

#include <cstdio>

#include "brsim/brsim.hpp"

int main() {
  using namespace brsim;
  const auto spec = BranchingVectorSpec::independent(DistributionSpec::uniform(0, 1), DistributionSpec::poisson(3),
                                                     DistributionSpec::uniform(0, 0.2));
  const int k = 10;

  DrawCounter boot_counter;
  const SamplePool pool = bootstrap_final_pool(spec, k, 1000, 1, boot_counter);

  DrawCounter exact_counter;
  std::vector<double> exact;
  for (const auto& run : run_exact(spec, k, 200, 1, exact_counter)) exact.push_back(run.r_k);

  const EmpiricalDistribution boot(pool);
  const EmpiricalDistribution ref(exact);
  std::printf("bootstrap mean %.6f from %llu vector draws\n", boot.mean(),
              static_cast<unsigned long long>(boot_counter.vector_draws()));
  std::printf("exact     mean %.6f from %llu vector draws\n", ref.mean(),
              static_cast<unsigned long long>(exact_counter.vector_draws()));
  std::printf("d1(bootstrap, exact) = %.6f\n", d1_empirical(boot, ref));
  std::printf("median: bootstrap %.4f, exact %.4f\n", boot.quantile(0.5), ref.quantile(0.5));
  return 0;
}
