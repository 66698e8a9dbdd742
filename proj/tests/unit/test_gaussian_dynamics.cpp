#include <doctest.h>

#include <random>

#include "skatepark/errors.hpp"
#include "skatepark/gaussian_state.hpp"
#include "skatepark/specs.hpp"
#include "support.hpp"

using namespace skatepark;

namespace {

const PhysicalConstants k;
const double M = make_sphere(1e-6, 8570, 0, 0).mass;

QuadraticSegment seg(SegmentKind kind, double w, double t, double lambda = 0) {
  return {kind, w, t, lambda};
}

// largest moment error, c measured against sqrt(v_x v_p)
double moment_error(const GaussianState& a, const GaussianState& b) {
  double e = std::max(test::rel(a.v_x, b.v_x), test::rel(a.v_p, b.v_p));
  e = std::max(e, std::abs(a.c - b.c) / std::sqrt(b.v_x * b.v_p));
  return std::max(e, test::rel(a.det, b.det));
}

}  // namespace

TEST_CASE("purity and coherence length of reference states") {
  double w = 2 * pi * 2159.1;
  auto g = GaussianState::ground(M, w);
  CHECK(purity(g) == test::near(1, 1e-12));
  double s1 = std::sqrt(k.hbar / (2 * M * w));
  CHECK(coherence_length(g) == test::near(std::sqrt(8.0) * s1, 1e-12));
  for (double n : {0.0, 0.057, 1.0, 1000.0}) {
    auto t = GaussianState::thermal(s1, n);
    CHECK(purity(t) == test::near(1 / (2 * n + 1), 1e-12));
    CHECK(t.c == 0);
  }
  // squeezed pure state with correlations
  double vx = 3 * s1 * s1, c = 0.7 * k.hbar;
  double vp = (k.hbar * k.hbar / 4 + c * c) / vx;
  CHECK(purity(GaussianState::from_moments(vx, vp, c)) == test::near(1, 1e-9));

  auto bad = GaussianState::from_moments(s1 * s1, k.hbar * k.hbar / (4 * s1 * s1) * 0.5, 0);
  CHECK_THROWS_AS(purity(bad), PhysicsError);
  CHECK_THROWS_AS(GaussianState::from_moments(-1, 1, 0), ValidationError);
}

TEST_CASE("coherence growth and fringe speed") {
  auto s = make_sphere(1e-6, 1e4, 0, 0);
  double w = 2 * pi * 1e5;
  auto g = GaussianState::ground(s.mass, w);
  CHECK(coherence_growth_speed(g, s.mass) == test::near(std::sqrt(4 * k.hbar * w / s.mass), 1e-12));
  CHECK(coherence_growth_speed(g, s.mass) == test::near(80e-9, 0.1));
  double v = ballistic_fringe_speed(s.mass, 2e-6);
  CHECK(v > 0.5e-14);
  CHECK(v < 2e-14);
  CHECK(ballistic_fringe_speed(s.mass, 4e-6) == test::near(v / 2, 1e-14));
  CHECK(ballistic_fringe_speed(M, 5e-7) == test::near(3.7e-14, 0.03));
  auto hot = GaussianState::thermal(1e-9, 1e12);
  CHECK(coherence_growth_speed(hot, M) < 1e-6 * coherence_growth_speed(GaussianState::thermal(1e-9, 0), M));
  CHECK_THROWS_AS(ballistic_fringe_speed(M, 0), ValidationError);
}

TEST_CASE("free flight without decoherence is ballistic") {
  auto s = GaussianState::from_moments(1e-24, 4e-40, 3e-33);
  double t = 0.2;
  auto o = evolve_segment(s, seg(SegmentKind::free, 0, t), M);
  CHECK(o.v_p == test::near(s.v_p, 1e-15));
  CHECK(o.v_x == test::near(s.v_x + 2 * s.c * t / M + s.v_p * t * t / (M * M), 1e-12));
  CHECK(o.c == test::near(s.c + s.v_p * t / M, 1e-12));
}

TEST_CASE("free flight with decoherence adds the polynomial terms") {
  auto s = GaussianState::thermal(3e-13, 0.05);
  double t = 0.483, L = 4.1e14, q = L * k.hbar * k.hbar;
  auto a = evolve_segment(s, seg(SegmentKind::free, 0, t), M);
  auto b = evolve_segment(s, seg(SegmentKind::free, 0, t, L), M);
  // the gains sit far below the moments, so allow for rounding of the operands
  auto gain = [](double with, double without, double expect) {
    return std::abs((with - without) - expect) <= 1e-12 * std::abs(expect) + 4e-16 * std::abs(with);
  };
  CHECK(gain(b.v_p, a.v_p, 2 * q * t));
  CHECK(gain(b.v_x, a.v_x, 2 * q * t * t * t / (3 * M * M)));
  CHECK(gain(b.c, a.c, q * t * t / M));
  // linear in Lambda t
  auto c2 = evolve_segment(s, seg(SegmentKind::free, 0, t, 2 * L), M);
  CHECK(gain(c2.v_p, a.v_p, 4 * q * t));
}

TEST_CASE("inverted boost gain") {
  double w1 = 2 * pi * 2159.1, w2 = 2 * pi * 50;
  auto s = GaussianState::thermal(std::sqrt(k.hbar / (2 * M * w1)), 0.054);
  auto o = evolve_segment(s, seg(SegmentKind::inverted, w2, 0.017), M);
  CHECK(std::sqrt(o.v_p / s.v_p) == test::near(104, 0.05));
}

TEST_CASE("harmonic period returns the state") {
  double w = 2 * pi * 50;
  auto s = GaussianState::from_moments(2e-18, 5e-39, 1e-30);
  auto o = evolve_segment(s, seg(SegmentKind::harmonic, w, 2 * pi / w), M);
  CHECK(moment_error(o, s) < 1e-8);
  auto r = evolve_ode_oracle(s, seg(SegmentKind::harmonic, w, 2 * pi / w), M, 1e-11);
  CHECK(moment_error(r, s) < 1e-8);
}

TEST_CASE("segment composition") {
  std::mt19937_64 g(11);
  for (auto kind : {SegmentKind::free, SegmentKind::harmonic, SegmentKind::inverted}) {
    double w = kind == SegmentKind::free ? 0 : 2 * pi * 50;
    auto s = GaussianState::thermal(3e-13, 0.05);
    for (int i = 0; i < 10; ++i) {
      double t1 = std::uniform_real_distribution<double>(1e-4, 0.05)(g);
      double t2 = std::uniform_real_distribution<double>(1e-4, 0.05)(g);
      double L = test::log_uniform(g, 1e10, 1e17);
      auto ab = evolve_segment(evolve_segment(s, seg(kind, w, t1, L), M), seg(kind, w, t2, L), M);
      auto whole = evolve_segment(s, seg(kind, w, t1 + t2, L), M);
      CHECK(moment_error(ab, whole) < 1e-9);
    }
  }
}

TEST_CASE("purity never increases") {
  std::mt19937_64 g(5);
  const SegmentKind kinds[] = {SegmentKind::free, SegmentKind::harmonic, SegmentKind::inverted};
  for (int i = 0; i < 300; ++i) {
    auto kind = kinds[i % 3];
    double w = kind == SegmentKind::free ? 0 : test::log_uniform(g, 1, 1e4);
    double t = kind == SegmentKind::inverted ? test::log_uniform(g, 1e-6, 10) / w : test::log_uniform(g, 1e-6, 1);
    auto s = GaussianState::thermal(test::log_uniform(g, 1e-13, 1e-9), test::log_uniform(g, 1e-3, 1e3));
    double L = i % 5 == 0 ? 0 : test::log_uniform(g, 1e5, 1e20);
    auto o = evolve_segment(s, seg(kind, w, t, L), M);
    CHECK(purity(o) <= purity(s) * (1 + 1e-12));
  }
}

TEST_CASE("closed forms agree with the ODE oracle on random cases") {
  std::mt19937_64 g(2024);
  const SegmentKind kinds[] = {SegmentKind::free, SegmentKind::harmonic, SegmentKind::inverted};
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    auto kind = kinds[i % 3];
    double w = kind == SegmentKind::free ? 0 : test::log_uniform(g, 1, 1e4);
    // omega t from 1e-6 to 1e4 (inverted capped where the moments grow by e^50)
    double wt = test::log_uniform(g, 1e-6, kind == SegmentKind::inverted ? 25 : 1e4);
    double t = kind == SegmentKind::free ? wt * 1e-4 : wt / w;
    double sigma = test::log_uniform(g, 1e-13, 1e-8);
    auto s = GaussianState::thermal(sigma, test::log_uniform(g, 1e-3, 1e3));
    s = evolve_segment(s, seg(SegmentKind::free, 0, test::log_uniform(g, 1e-4, 1e-1)), M);  // correlated start
    double L = 0;
    if (i % 4) {
      // decoherence kick comparable to the momentum spread over the segment
      double r = test::log_uniform(g, 1e-6, 10);
      L = r * s.v_p / (2 * k.hbar * k.hbar * std::max(t, 1e-12));
    }
    auto q = seg(kind, w, t, L);
    auto a = evolve_segment(s, q, M);
    auto b = evolve_ode_oracle(s, q, M, 1e-13);
    double e = moment_error(a, b);
    worst = std::max(worst, e);
    CHECK_MESSAGE(e < 1e-8, "case " << i << " kind " << int(kind) << " wt " << wt << " L " << L);
  }
  MESSAGE("worst relative deviation " << worst);
}

TEST_CASE("heisenberg policy") {
  auto s = GaussianState::from_moments(1e-20, k.hbar * k.hbar / 4e-20 * 0.25, 0);
  std::vector<std::string> w;
  CHECK_THROWS_AS(evolve_segment(s, seg(SegmentKind::free, 0, 1e-3), M), PhysicsError);
  CHECK_NOTHROW(evolve_segment(s, seg(SegmentKind::free, 0, 1e-3), M, k, HeisenbergPolicy::warn, &w));
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(seg(SegmentKind::free, 1, 1).validate(), ValidationError);
  CHECK_THROWS_AS(seg(SegmentKind::harmonic, 1, -1).validate(), ValidationError);
  CHECK_THROWS_AS(evolve_ode_oracle(s, seg(SegmentKind::free, 0, 1), M, 1e-3), ValidationError);
}

TEST_CASE("segment maps are symplectic") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 50; ++i) {
    double w = test::log_uniform(g, 1, 1e4), t = test::log_uniform(g, 1e-5, 1e-2);
    for (auto kind : {SegmentKind::harmonic, SegmentKind::inverted}) {
      auto m = segment_map(seg(kind, w, t), M);
      // cosh^2 - sinh^2 keeps only the absolute precision of its terms
      CHECK(std::abs(m.det() - 1) <= 1e-12 * (std::abs(m.a * m.d) + std::abs(m.b * m.g)));
    }
  }
  CHECK(segment_map(seg(SegmentKind::free, 0, 2), M).b == test::near(2 / M, 1e-15));
}
