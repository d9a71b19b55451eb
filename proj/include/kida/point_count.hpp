#pragma once

#include "kida/curve.hpp"

namespace kida {

/// Below this prime the O(l) enumeration is used; above it BSGS.
inline constexpr u64 kDefaultBsgsCrossover = 457;
/// BSGS needs l above this bound for the Mestre argument to pin the order.
inline constexpr u64 kBsgsMinPrime = 229;

/// #E(F_l) including infinity, by direct enumeration. Throws bad_reduction
/// when l divides the discriminant of w.
u64 count_points_naive(const WeierstrassModel& w, u64 l);

/// #E(F_l) by baby-step/giant-step on random points, accumulating the lcm
/// of point orders on the curve and its quadratic twist until exactly one
/// candidate in the Hasse interval remains. Requires l > kBsgsMinPrime.
u64 count_points_bsgs(const WeierstrassModel& w, u64 l);

/// Dispatch between the two counters.
u64 count_points(const WeierstrassModel& w, u64 l, u64 crossover = kDefaultBsgsCrossover);

struct FrobeniusData {
  u64 prime = 0;
  i64 trace = 0;  // a_l = l + 1 - #E(F_l)
};

FrobeniusData frobenius(const WeierstrassModel& w, u64 l, u64 crossover = kDefaultBsgsCrossover);

/// #E(F_{l^n}) from a_l via s_0 = 2, s_1 = a, s_k = a s_{k-1} - l s_{k-2}.
BigInt order_over_extension(const FrobeniusData& fd, unsigned n);

/// Hasse interval check |a_l| <= 2 sqrt(l).
bool within_hasse(i64 trace, u64 l);

}  // namespace kida
