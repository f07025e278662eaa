#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

namespace nilgraph {

using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Seeded source of small exact rationals p/q with |p| <= bound, 1 <= q <= bound.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed, int bound = 9)
      : rng_(seed), num_(-bound, bound), den_(1, bound) {}

  Rational operator()() {
    Rational r(num_(rng_), den_(rng_));
    r.canonicalize();
    return r;
  }

  /// Same distribution conditioned on a nonzero result.
  Rational nonzero() {
    for (;;) {
      Rational r = (*this)();
      if (r != 0) return r;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<int> num_;
  std::uniform_int_distribution<int> den_;
};

}  // namespace nilgraph
