#include <benchmark/benchmark.h>

#include "mbm/estim.hpp"
#include "mbm/hurst.hpp"
#include "mbm/kernel.hpp"
#include "mbm/synth.hpp"

namespace {

const mbm::HurstFunction& plateau() {
    static const auto f = mbm::HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    return f;
}

void BM_RCov(benchmark::State& state) {
    const auto& f = plateau();
    double t = 0.31;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbm::r_cov(f, t, 0.62));
        t = t < 0.9 ? t + 1e-6 : 0.31;
    }
}
BENCHMARK(BM_RCov);

void BM_ExpectedQv(benchmark::State& state) {
    const auto& f = plateau();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mbm::expected_qv(f, n, 1));
}
BENCHMARK(BM_ExpectedQv)->Arg(256)->Arg(1024)->Arg(4096);

void BM_QvVariance(benchmark::State& state) {
    const auto& f = plateau();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mbm::qv_variance(f, n, 1));
}
BENCHMARK(BM_QvVariance)->Arg(128)->Arg(512);

void BM_Cholesky(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd C = mbm::build_cov_matrix(plateau(), n);
    for (auto _ : state) benchmark::DoNotOptimize(mbm::cholesky_factor(C));
}
BENCHMARK(BM_Cholesky)->Arg(256)->Arg(1024);

void BM_SamplePath(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const mbm::PathSynthesizer synth(plateau(), n);
    int r = 0;
    for (auto _ : state) benchmark::DoNotOptimize(synth.sample(1, r++));
}
BENCHMARK(BM_SamplePath)->Arg(256)->Arg(1024);

void BM_LambdaOfH(benchmark::State& state) {
    const auto a2 = mbm::FilterSpec::second_difference();
    double H = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbm::lambda_of_H(H, a2));
        H = H < 0.9 ? H + 1e-3 : 0.1;
    }
}
BENCHMARK(BM_LambdaOfH);

}  // namespace

BENCHMARK_MAIN();
