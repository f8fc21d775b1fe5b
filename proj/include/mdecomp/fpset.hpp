#pragma once

/**
 * @file fpset.hpp
 * @brief Exact set arithmetic over the prime field F_p.
 *
 * A ResidueSet is a subset of F_p stored as a bit array of length p. All
 * operations are pure and return new sets; the modulus is validated once when
 * a set is first built and inherited by every derived set.
 *
 * Sums with a single translate are word-parallel rotations of the bit array.
 * Product sets accumulate one dilation per element of the smaller factor.
 */

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdecomp/error.hpp"

namespace mdecomp {

using Residue = std::uint32_t;

/// Largest accepted modulus. Bit arrays of length p stay below 2 MiB.
inline constexpr std::uint32_t kMaxModulus = 1u << 24;

// ---------------------------------------------------------------------------
// Scalar arithmetic mod p
// ---------------------------------------------------------------------------

[[nodiscard]] constexpr bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Reduces any signed integer into [0, p).
[[nodiscard]] constexpr Residue reduce(std::int64_t x, std::uint32_t p) noexcept {
  const std::int64_t m = static_cast<std::int64_t>(p);
  std::int64_t r = x % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

[[nodiscard]] constexpr Residue mul_mod(Residue a, Residue b, std::uint32_t p) noexcept {
  return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p);
}

[[nodiscard]] constexpr Residue add_mod(Residue a, Residue b, std::uint32_t p) noexcept {
  const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<Residue>(s >= p ? s - p : s);
}

[[nodiscard]] constexpr Residue neg_mod(Residue a, std::uint32_t p) noexcept {
  return a == 0 ? 0 : p - a;
}

/// Inverse of a nonzero residue via the extended Euclidean algorithm.
[[nodiscard]] inline Residue inv_mod(Residue a, std::uint32_t p) {
  if (a % p == 0) throw InvalidArgument("zero has no inverse mod " + std::to_string(p));
  std::int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
  }
  return reduce(s0, p);
}

inline void require_modulus(std::uint32_t p) {
  if (p == 2) throw InvalidArgument("p = 2 is not supported; the modulus must be an odd prime");
  if (p > kMaxModulus) throw InvalidArgument("modulus " + std::to_string(p) + " exceeds limit");
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
}

// ---------------------------------------------------------------------------
// ResidueSet
// ---------------------------------------------------------------------------

class ResidueSet {
 public:
  /// Empty subset of F_p. Throws InvalidArgument unless p is an odd prime.
  explicit ResidueSet(std::uint32_t p) : p_(p) {
    require_modulus(p);
    words_.assign(word_count(p), 0);
  }

  /// Set of the given integers reduced mod p; duplicates collapse.
  static ResidueSet of(std::uint32_t p, std::span<const std::int64_t> values) {
    ResidueSet s(p);
    for (auto v : values) s.set_bit(reduce(v, p));
    return s;
  }
  static ResidueSet of(std::uint32_t p, std::initializer_list<std::int64_t> values) {
    return of(p, std::span<const std::int64_t>(values.begin(), values.size()));
  }

  static ResidueSet full(std::uint32_t p) {
    ResidueSet s(p);
    for (Residue i = 0; i < p; ++i) s.set_bit(i);
    return s;
  }

  [[nodiscard]] std::uint32_t modulus() const noexcept { return p_; }

  [[nodiscard]] std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  [[nodiscard]] bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }

  [[nodiscard]] bool contains(std::int64_t x) const noexcept {
    const Residue r = reduce(x, p_);
    return (words_[r / 64] >> (r % 64)) & 1u;
  }

  /// Members in increasing residue order.
  [[nodiscard]] std::vector<Residue> elements() const {
    std::vector<Residue> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1)
        out.push_back(static_cast<Residue>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
    }
    return out;
  }

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  [[nodiscard]] ResidueSet with(std::int64_t x) const {
    ResidueSet s = *this;
    s.set_bit(reduce(x, p_));
    return s;
  }
  [[nodiscard]] ResidueSet without(std::int64_t x) const {
    ResidueSet s = *this;
    const Residue r = reduce(x, p_);
    s.words_[r / 64] &= ~(std::uint64_t{1} << (r % 64));
    return s;
  }

  [[nodiscard]] ResidueSet intersect(const ResidueSet& other) const {
    require_same_modulus(other);
    ResidueSet s = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] &= other.words_[i];
    return s;
  }
  [[nodiscard]] ResidueSet unite(const ResidueSet& other) const {
    require_same_modulus(other);
    ResidueSet s = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] |= other.words_[i];
    return s;
  }

  /// The set {x + shift} for x in this set, as a word-level rotation.
  [[nodiscard]] ResidueSet translate(std::int64_t shift) const {
    const Residue s = reduce(shift, p_);
    if (s == 0) return *this;
    ResidueSet out = empty_like();
    // bits with i + s < p move up by s; the rest wrap down by p - s.
    shift_or_up(words_, s, out.words_);
    shift_or_down(words_, p_ - s, out.words_);
    out.mask_tail();
    return out;
  }

  void require_same_modulus(const ResidueSet& other) const {
    if (other.p_ != p_)
      throw InvalidArgument("modulus mismatch: " + std::to_string(p_) + " vs " + std::to_string(other.p_));
  }

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

  /// Empty set with this modulus, skipping the primality check.
  [[nodiscard]] ResidueSet empty_like() const {
    ResidueSet s = *this;
    std::fill(s.words_.begin(), s.words_.end(), 0);
    return s;
  }

  void set_bit(Residue r) noexcept { words_[r / 64] |= std::uint64_t{1} << (r % 64); }

 private:
  static std::size_t word_count(std::uint32_t p) { return (static_cast<std::size_t>(p) + 63) / 64; }

  void mask_tail() noexcept {
    const unsigned used = p_ % 64;
    if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
  }

  // out |= in << s (bit i of in lands on bit i + s; overflow past the array is dropped)
  static void shift_or_up(const std::vector<std::uint64_t>& in, std::size_t s, std::vector<std::uint64_t>& out) {
    const std::size_t ws = s / 64;
    const unsigned bs = s % 64;
    for (std::size_t i = out.size(); i-- > ws;) {
      std::uint64_t v = in[i - ws] << bs;
      if (bs != 0 && i - ws >= 1) v |= in[i - ws - 1] >> (64 - bs);
      out[i] |= v;
    }
  }

  // out |= in >> s (bit i of in lands on bit i - s)
  static void shift_or_down(const std::vector<std::uint64_t>& in, std::size_t s, std::vector<std::uint64_t>& out) {
    const std::size_t ws = s / 64;
    const unsigned bs = s % 64;
    for (std::size_t i = 0; i + ws < in.size(); ++i) {
      std::uint64_t v = in[i + ws] >> bs;
      if (bs != 0 && i + ws + 1 < in.size()) v |= in[i + ws + 1] << (64 - bs);
      out[i] |= v;
    }
  }

  std::uint32_t p_;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Intervals and arithmetic-progression covers
// ---------------------------------------------------------------------------

/// The interval {n+1, ..., n+N} mod p.
struct IntervalSpec {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::uint32_t length = 0;

  friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

/// Progression start, start + difference, ..., with `length` terms mod p.
struct ApCover {
  Residue start = 0;
  Residue difference = 0;
  std::uint32_t length = 0;

  friend bool operator==(const ApCover&, const ApCover&) = default;

  [[nodiscard]] std::vector<Residue> terms(std::uint32_t p) const {
    std::vector<Residue> out;
    out.reserve(length);
    Residue x = start;
    for (std::uint32_t i = 0; i < length; ++i, x = add_mod(x, difference, p)) out.push_back(x);
    return out;
  }
};

inline ResidueSet make_interval(const IntervalSpec& spec) {
  require_modulus(spec.p);
  if (spec.length < 1 || spec.length > spec.p)
    throw InvalidArgument("interval length must lie in [1, p]");
  if (spec.n >= spec.p) throw InvalidArgument("interval offset must lie in [0, p-1]");
  ResidueSet s(spec.p);
  for (std::uint32_t i = 1; i <= spec.length; ++i) s.set_bit(reduce(std::int64_t{spec.n} + i, spec.p));
  return s;
}

/// Interval {a, a+1, ..., b} of integers reduced mod p; needs a <= b and b - a < p.
inline IntervalSpec interval_from_bounds(std::uint32_t p, std::int64_t a, std::int64_t b) {
  require_modulus(p);
  if (a > b) throw InvalidArgument("interval bounds must satisfy a <= b");
  if (b - a + 1 > static_cast<std::int64_t>(p)) throw InvalidArgument("interval longer than p");
  return {p, reduce(a - 1, p), static_cast<std::uint32_t>(b - a + 1)};
}

[[nodiscard]] inline ResidueSet sumset(const ResidueSet& x, const ResidueSet& y) {
  x.require_same_modulus(y);
  const bool x_small = x.size() <= y.size();
  const ResidueSet& small = x_small ? x : y;
  const ResidueSet& big = x_small ? y : x;
  ResidueSet out = x.empty_like();
  for (Residue s : small.elements()) out = out.unite(big.translate(s));
  return out;
}

[[nodiscard]] inline ResidueSet productset(const ResidueSet& x, const ResidueSet& y) {
  x.require_same_modulus(y);
  const std::uint32_t p = x.modulus();
  const auto xs = x.elements();
  const auto ys = y.elements();
  ResidueSet out = x.empty_like();
  for (Residue a : xs)
    for (Residue b : ys) out.set_bit(mul_mod(a, b, p));
  return out;
}

/// k-fold sum X + ... + X, built by repeated doubling.
[[nodiscard]] inline ResidueSet kfold_sum(std::uint64_t k, const ResidueSet& x) {
  if (k == 0) throw InvalidArgument("k-fold sum needs k >= 1");
  std::optional<ResidueSet> acc;
  ResidueSet base = x;
  for (;;) {
    if (k & 1u) acc = acc ? sumset(*acc, base) : base;
    k >>= 1;
    if (k == 0) break;
    base = sumset(base, base);
  }
  return *acc;
}

[[nodiscard]] inline ResidueSet dilate(std::int64_t lambda, const ResidueSet& x) {
  const std::uint32_t p = x.modulus();
  const Residue l = reduce(lambda, p);
  if (l == 0) throw InvalidArgument("dilation factor must be nonzero mod p");
  ResidueSet out = x.empty_like();
  for (Residue a : x.elements()) out.set_bit(mul_mod(a, l, p));
  return out;
}

[[nodiscard]] inline ResidueSet negate(const ResidueSet& x) {
  ResidueSet out = x.empty_like();
  for (Residue a : x.elements()) out.set_bit(neg_mod(a, x.modulus()));
  return out;
}

[[nodiscard]] inline ResidueSet strip_zero(const ResidueSet& s) { return s.without(0); }

/// S \ {0} = -(S \ {0}); membership of 0 is ignored.
[[nodiscard]] inline bool is_symmetric(const ResidueSet& s) {
  const ResidueSet t = strip_zero(s);
  return t == negate(t);
}

/// Minimum-length progression mod p containing X, if no longer than max_length.
///
/// Every difference d in [1, (p-1)/2] is scanned; the cover with difference
/// p - d is the same progression reversed. For fixed d the elements sit at
/// positions x/d on the cycle Z/p, and the shortest covering arc leaves out
/// the largest gap. Ties go to the smallest difference, then smallest start.
[[nodiscard]] inline std::optional<ApCover> ap_cover_mod_p(const ResidueSet& x, std::uint64_t max_length) {
  if (x.empty()) throw InvalidArgument("cannot cover the empty set");
  const std::uint32_t p = x.modulus();
  std::optional<ApCover> best;
  for (Residue d = 1; d <= (p - 1) / 2; ++d) {
    const auto pos = dilate(inv_mod(d, p), x).elements();
    std::uint32_t max_gap = 0;
    Residue start = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const std::size_t next = (i + 1) % pos.size();
      const std::uint32_t gap = next == 0 ? pos[0] + p - pos[i] : pos[next] - pos[i];
      const Residue s = mul_mod(pos[next], d, p);
      if (gap > max_gap || (gap == max_gap && s < start)) {
        max_gap = gap;
        start = s;
      }
    }
    const std::uint32_t length = p - max_gap + 1;
    if (!best || length < best->length) best = ApCover{start, d, length};
  }
  if (!best || best->length > max_length) return std::nullopt;
  return best;
}

/// Witness (n, N) when S is an interval mod p. Empty set gives N = 0, full set N = p.
[[nodiscard]] inline std::optional<IntervalSpec> is_interval(const ResidueSet& s) {
  const std::uint32_t p = s.modulus();
  const std::size_t count = s.size();
  if (count == 0 || count == p) return IntervalSpec{p, 0, static_cast<std::uint32_t>(count)};
  std::optional<Residue> first;
  for (Residue r : s.elements()) {
    if (s.contains(std::int64_t{r} - 1)) continue;
    if (first) return std::nullopt;  // two runs
    first = r;
  }
  return IntervalSpec{p, reduce(std::int64_t{*first} - 1, p), static_cast<std::uint32_t>(count)};
}

/// "{a, b, c}" in increasing residue order.
[[nodiscard]] inline std::string to_string(const ResidueSet& s) {
  std::string out = "{";
  bool first = true;
  for (Residue r : s.elements()) {
    if (!first) out += ",";
    out += std::to_string(r);
    first = false;
  }
  return out + "}";
}

}  // namespace mdecomp
