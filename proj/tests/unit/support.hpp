#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "skatepark/config.hpp"

namespace test {

inline skatepark::ProtocolConfig case_study() {
  return skatepark::to_protocol_config(skatepark::parse_config_text(skatepark::case_study_config_text()));
}

// relative only; plain Approx adds an absolute slack of epsilon
inline doctest::Approx near(double v, double eps) { return doctest::Approx(v).epsilon(eps).scale(0); }

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// log-uniform draw in [lo, hi]
inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(g));
}

}  // namespace test
