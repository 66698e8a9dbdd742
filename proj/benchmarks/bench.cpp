#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "skatepark/config.hpp"
#include "skatepark/gaussian_state.hpp"
#include "skatepark/magnetostatics.hpp"
#include "skatepark/splitter.hpp"
#include "skatepark/wigner.hpp"

using namespace skatepark;

namespace {

const ProtocolConfig& cfg() {
  static const ProtocolConfig c = to_protocol_config(parse_config_text(case_study_config_text()));
  return c;
}

void BM_GaussianEvolve(benchmark::State& st) {
  const double M = cfg().sphere.mass;
  auto s = GaussianState::thermal(1e-12, 0.05);
  const QuadraticSegment segs[] = {{SegmentKind::inverted, 2 * pi * 50, 0.017, 1e15},
                                   {SegmentKind::free, 0, 0.483, 1e15},
                                   {SegmentKind::harmonic, 2 * pi * 50, 0.0025, 1e15}};
  for (auto _ : st) {
    auto x = s;
    for (const auto& q : segs) x = evolve_segment(x, q, M);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_GaussianEvolve);

void BM_WignerTransform(benchmark::State& st) {
  const double hb = cfg().k.hbar, s = 11.6e-9, d = 500e-9;
  const int n = int(st.range(0));
  auto psi = [=](double x, double x0) { return std::exp(-(x - x0) * (x - x0) / (4 * s * s)); };
  DensityFunction rho = [=](double x, double xp) {
    double a = psi(x, d / 2), b = psi(x, -d / 2), ap = psi(xp, d / 2), bp = psi(xp, -d / 2);
    return std::complex<double>((a + b) * (ap + bp), 0);
  };
  WignerGridParams gp{256, n, 360e-9, 4.2 * hb / s};
  for (auto _ : st) benchmark::DoNotOptimize(wigner_from_density(rho, gp));
  st.SetItemsProcessed(st.iterations() * 256 * n);
}
BENCHMARK(BM_WignerTransform)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_TrapCharacterization(benchmark::State& st) {
  WireConfig w = cfg().wires;
  w.d_o = 30 * cfg().sphere.radius;
  for (auto _ : st) benchmark::DoNotOptimize(characterize_trap(w, cfg().sphere, cfg().k));
}
BENCHMARK(BM_TrapCharacterization)->Unit(benchmark::kMillisecond);

void BM_OutcomeDensity(benchmark::State& st) {
  const double s = 239.46e-9 / 611.7e-9;
  auto rho = [s](double x) { return std::exp(-x * x / (2 * s * s)) / std::sqrt(2 * pi * s * s); };
  const int points = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(OutcomeDistribution(rho, s, 32.2, points));
}
BENCHMARK(BM_OutcomeDensity)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_OutcomeDensityPoint(benchmark::State& st) {
  const double s = 239.46e-9 / 611.7e-9;
  OutcomeDistribution D([s](double x) { return std::exp(-x * x / (2 * s * s)) / std::sqrt(2 * pi * s * s); }, s,
                        32.2, 4096);
  double p = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(D.density(p));
    p = p > 10 ? 0 : p + 0.37;
  }
}
BENCHMARK(BM_OutcomeDensityPoint);

}  // namespace

BENCHMARK_MAIN();
