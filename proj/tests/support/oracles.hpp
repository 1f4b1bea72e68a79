#ifndef RASIM_TESTS_SUPPORT_ORACLES_HPP
#define RASIM_TESTS_SUPPORT_ORACLES_HPP

// Independent reference implementations used as test oracles. Everything in
// this header is deliberately written from first principles (brute force,
// direct matrix algebra, symbol-level Monte Carlo) and never calls the
// library code it checks.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rasim/rng.hpp"

namespace rasim::test {

// ---------------------------------------------------------------------------
// Brute-force gated assignment: enumerate every injection of rows into
// columns, keep maximum cardinality of in-gate pairs, then minimum total
// cost. Feasible only for tiny instances.
struct BruteForceResult {
  int cardinality = 0;
  double total_cost = 0.0;
};

inline void brute_force_recurse(const std::vector<std::vector<double>>& cost, double gate,
                                std::size_t row, std::vector<char>& used_col, int cardinality,
                                double total, BruteForceResult& best) {
  if (row == cost.size()) {
    if (cardinality > best.cardinality ||
        (cardinality == best.cardinality && total < best.total_cost)) {
      best.cardinality = cardinality;
      best.total_cost = total;
    }
    return;
  }
  // Leave this row unmatched.
  brute_force_recurse(cost, gate, row + 1, used_col, cardinality, total, best);
  for (std::size_t j = 0; j < cost[row].size(); ++j) {
    if (!used_col[j] && cost[row][j] < gate) {
      used_col[j] = 1;
      brute_force_recurse(cost, gate, row + 1, used_col, cardinality + 1, total + cost[row][j],
                          best);
      used_col[j] = 0;
    }
  }
}

inline BruteForceResult brute_force_assignment(const std::vector<std::vector<double>>& cost,
                                               double gate = std::numeric_limits<double>::infinity()) {
  BruteForceResult best;
  best.cardinality = -1;
  best.total_cost = std::numeric_limits<double>::infinity();
  std::vector<char> used(cost.empty() ? 0 : cost[0].size(), 0);
  brute_force_recurse(cost, gate, 0, used, 0, 0.0, best);
  return best;
}

// ---------------------------------------------------------------------------
// Hand-rolled 4x4 matrix helpers for checking the Kalman predict step.
using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) {
        s += a[i][k] * b[k][j];
      }
      c[i][j] = s;
    }
  }
  return c;
}

inline Mat4 mat_transpose(const Mat4& a) {
  Mat4 t{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      t[i][j] = a[j][i];
    }
  }
  return t;
}

inline Mat4 mat_add(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      c[i][j] = a[i][j] + b[i][j];
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Symbol-level Monte Carlo for Gray-coded square 16-QAM over AWGN with
// maximum-likelihood (nearest-level) detection. Returns the measured bit
// error rate over n_symbols.
inline double simulate_16qam_ber(double ebn0_db, std::uint64_t n_symbols, std::uint64_t seed) {
  // Gray mapping per axis: bits (b1 b0) -> level. 00->-3, 01->-1, 11->+1,
  // 10->+3; average symbol energy = 10 per complex symbol, 4 bits/symbol.
  constexpr double levels[4] = {-3.0, -1.0, 1.0, 3.0};
  constexpr int gray_of_index[4] = {0, 1, 3, 2};  // index into levels -> bit pattern
  constexpr int index_of_gray[4] = {0, 1, 3, 2};  // bit pattern -> index into levels

  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  const double es = 10.0;
  const double eb = es / 4.0;
  const double n0 = eb / ebn0;
  const double sigma = std::sqrt(n0 / 2.0);  // per real dimension

  RandomStream rng(seed);
  std::uint64_t bit_errors = 0;
  for (std::uint64_t s = 0; s < n_symbols; ++s) {
    const std::uint64_t bits = rng.bits();
    const int gi = static_cast<int>(bits & 3);        // I-axis bit pair
    const int gq = static_cast<int>((bits >> 2) & 3); // Q-axis bit pair
    const double xi = levels[index_of_gray[gi]];
    const double xq = levels[index_of_gray[gq]];
    const double yi = xi + rng.normal(0.0, sigma);
    const double yq = xq + rng.normal(0.0, sigma);
    // Nearest level thresholds at -2, 0, +2.
    const auto slice = [](double y) {
      if (y < -2.0) return 0;
      if (y < 0.0) return 1;
      if (y < 2.0) return 2;
      return 3;
    };
    const int ri = gray_of_index[slice(yi)];
    const int rq = gray_of_index[slice(yq)];
    bit_errors += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(ri ^ gi)));
    bit_errors += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(rq ^ gq)));
  }
  return static_cast<double>(bit_errors) / (4.0 * static_cast<double>(n_symbols));
}

}  // namespace rasim::test

#endif  // RASIM_TESTS_SUPPORT_ORACLES_HPP
