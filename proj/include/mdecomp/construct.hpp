#pragma once

// Explicit decompositions of large and exceptional intervals mod p.

#include <cstdint>
#include <string>

#include "mdecomp/decomp.hpp"
#include "mdecomp/error.hpp"
#include "mdecomp/fpset.hpp"

namespace mdecomp {

/// p = u^2 + v^2 with 1 <= u < v.
struct TwoSquares {
  std::uint32_t p = 0;
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend bool operator==(const TwoSquares&, const TwoSquares&) = default;
};

struct ConstructionResult {
  ResidueSet interval;
  ResidueSet a;
  ResidueSet b;
  bool verified = false;
};

namespace detail {

inline void require_one_mod_four(std::uint32_t p) {
  require_modulus(p);
  if (p % 4 != 1) throw InvalidArgument(std::to_string(p) + " is not 1 mod 4");
}

inline ConstructionResult verified_result(ResidueSet interval, ResidueSet a, ResidueSet b, const char* what) {
  ConstructionResult r{std::move(interval), std::move(a), std::move(b), false};
  r.verified = r.a.size() >= 2 && r.b.size() >= 2 && productset(r.a, r.b) == strip_zero(r.interval);
  if (!r.verified) throw VerificationFailure(std::string(what) + " construction failed to verify");
  return r;
}

}  // namespace detail

/// Brute force over u <= sqrt(p/2).
[[nodiscard]] inline TwoSquares sum_two_squares(std::uint32_t p) {
  detail::require_one_mod_four(p);
  for (std::uint64_t u = 1; 2 * u * u < p; ++u) {
    const std::uint64_t rest = p - u * u;
    std::uint64_t v = 1;
    while ((v + 1) * (v + 1) <= rest) ++v;
    if (v * v == rest) return {p, static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
  }
  throw VerificationFailure("no two-square representation found for " + std::to_string(p));
}

/// h = u / v mod p, a square root of -1.
[[nodiscard]] inline Residue sqrt_minus_one(std::uint32_t p) {
  const TwoSquares rep = sum_two_squares(p);
  return mul_mod(rep.u, inv_mod(rep.v, p), p);
}

/// {1, ..., L} = A * {1, h} with A = {x in I : hx in I}, for p = 1 mod 4, p != 5.
[[nodiscard]] inline ConstructionResult theorem2_decomposition(std::uint32_t p, std::uint32_t length) {
  detail::require_one_mod_four(p);
  if (p == 5) throw InvalidArgument("p = 5 is excluded");
  if (2 * std::uint64_t{length} < p - 1 || length > p - 1)
    throw InvalidArgument("L must satisfy (p-1)/2 <= L <= p-1");
  const Residue h = sqrt_minus_one(p);
  ResidueSet interval = make_interval({p, 0, length});
  ResidueSet a = interval.empty_like();
  for (Residue x : interval.elements())
    if (interval.contains(mul_mod(h, x, p))) a.set_bit(x);
  return detail::verified_result(std::move(interval), std::move(a), ResidueSet::of(p, {1, h}), "theorem2");
}

/// {-k1, ..., k2} \ {0} = A * {1, 2} with A = {x in I\{0} : 2x in I\{0}}.
///
/// Needs k1, k2 >= 0.4 (p - 1), compared exactly as 5k >= 2(p - 1). An
/// interval with k1 + k2 + 1 >= p is all of F_p.
[[nodiscard]] inline ConstructionResult theorem3_decomposition(std::uint32_t p, std::int64_t k1, std::int64_t k2) {
  require_modulus(p);
  if (k1 < 0 || k2 < 0) throw InvalidArgument("k1 and k2 must be nonnegative");
  const std::int64_t bound = 2 * (std::int64_t{p} - 1);
  if (5 * k1 < bound || 5 * k2 < bound) throw InvalidArgument("k1 and k2 must be at least 0.4(p-1)");
  const std::int64_t span = k1 + k2 + 1;
  ResidueSet interval = span >= p ? ResidueSet::full(p) : make_interval(interval_from_bounds(p, -k1, k2));
  const ResidueSet nonzero = strip_zero(interval);
  ResidueSet a = interval.empty_like();
  for (Residue x : nonzero.elements())
    if (nonzero.contains(mul_mod(2, x, p))) a.set_bit(x);
  return detail::verified_result(std::move(interval), std::move(a), ResidueSet::of(p, {1, 2}), "theorem3");
}

/// sign * {t-1, t, t+1} = (sign * {-1, 2}) * {-t, 1-t} with t = 3^-1 mod p, p >= 5.
[[nodiscard]] inline ConstructionResult special_triple(std::uint32_t p, int sign) {
  require_modulus(p);
  if (p < 5) throw InvalidArgument("the special triple needs p >= 5");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const std::int64_t t = inv_mod(3, p);
  ResidueSet interval = ResidueSet::of(p, {sign * (t - 1), sign * t, sign * (t + 1)});
  ResidueSet a = ResidueSet::of(p, {-sign, 2 * sign});
  ResidueSet b = ResidueSet::of(p, {-t, 1 - t});
  return detail::verified_result(std::move(interval), std::move(a), std::move(b), "special triple");
}

/// S \ {0} = {-1, 1} * (S \ {0}) for symmetric S.
[[nodiscard]] inline ConstructionResult symmetric_decomposition(const ResidueSet& s) {
  const ResidueSet t = strip_zero(s);
  if (!is_symmetric(s)) throw InvalidArgument("set is not symmetric");
  if (t.size() < 2) throw InvalidArgument("S \\ {0} needs at least two elements");
  return detail::verified_result(s, ResidueSet::of(s.modulus(), {-1, 1}), t, "symmetric");
}

}  // namespace mdecomp
