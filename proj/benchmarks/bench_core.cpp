#include <benchmark/benchmark.h>

#include "efstein/calculus.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/generators.hpp"
#include "efstein/harness.hpp"
#include "efstein/operators.hpp"
#include "efstein/walks.hpp"

namespace {

using namespace efstein;

void BM_CertifyEpsilon(benchmark::State& state) {
    const int k = int(state.range(0));
    std::vector<int> sizes(std::size_t(k), 4);
    auto mu = gen_perturbed_product(sizes, 0.1, 1);
    for (auto _ : state) {
        EpsCertificate cert = certify_epsilon(mu);
        benchmark::DoNotOptimize(cert.epsilon);
    }
}
BENCHMARK(BM_CertifyEpsilon)->Arg(3)->Arg(4)->Arg(5);

void BM_EsAll(benchmark::State& state) {
    const int k = int(state.range(0));
    std::vector<int> sizes(std::size_t(k), 4);
    auto mu = gen_product(sizes, 2);
    Fn f = gen_random_dense(mu, 3);
    for (auto _ : state) {
        EfronSteinFamily fam = es_all(f);
        benchmark::DoNotOptimize(fam.components().size());
    }
}
BENCHMARK(BM_EsAll)->Arg(3)->Arg(4)->Arg(5);

void BM_NoiseOperator(benchmark::State& state) {
    auto mu = gen_product(std::vector<int>{5, 5, 5, 5}, 4);
    Fn f = gen_random_dense(mu, 5);
    for (auto _ : state) {
        Fn t = noise_direct(f, 0.5);
        benchmark::DoNotOptimize(t.values().data());
    }
}
BENCHMARK(BM_NoiseOperator);

void BM_InfluenceProfile(benchmark::State& state) {
    auto mu = gen_product(std::vector<int>{5, 5, 5, 5}, 6);
    Fn f = gen_random_dense(mu, 7);
    for (auto _ : state) {
        InfluenceProfile p = influence_profile(f, Subset::single(0), 2);
        benchmark::DoNotOptimize(p.mean_sq);
    }
}
BENCHMARK(BM_InfluenceProfile);

void BM_ExactIdentitiesSuite(benchmark::State& state) {
    SuiteConfig cfg = SuiteConfig::defaults();
    for (auto _ : state) {
        auto records = run_suite("exact-identities", cfg);
        benchmark::DoNotOptimize(records.size());
    }
}
BENCHMARK(BM_ExactIdentitiesSuite);

}  // namespace

BENCHMARK_MAIN();
