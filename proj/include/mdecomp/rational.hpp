#pragma once

/**
 * @file rational.hpp
 * @brief Multiplicative decompositions of finite arithmetic progressions in Q.
 *
 * Rationals are 64-bit numerator/denominator pairs kept in lowest terms.
 * Intermediate products are formed in 128 bits and narrowed back with an
 * explicit range check; leaving the 64-bit range throws ArithmeticOverflow.
 *
 * The search mirrors the F_p one: every class has a member with 1 in B, so
 * A ranges over subsets of the target T and B over subsets of
 * Bmax(A) = intersection of a^-1 T. Classes are reported in coprime-integer
 * form, which makes them independent of any rescaling of the progression.
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdecomp/decomp.hpp"
#include "mdecomp/error.hpp"

namespace mdecomp {

class Rational {
 public:
  using int128 = __int128;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  /// Reduces n/d to lowest terms; throws on d = 0 or when the result leaves int64.
  static Rational make(int128 n, int128 d) {
    if (d == 0) throw InvalidArgument("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const int128 g = gcd128(n < 0 ? -n : n, d);
    n /= g;
    d /= g;
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX) throw ArithmeticOverflow("rational out of 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }
  [[nodiscard]] constexpr bool is_integer() const noexcept { return den_ == 1; }
  [[nodiscard]] constexpr bool is_zero() const noexcept { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(int128{a.num_} * b.den_ + int128{b.num_} * a.den_, int128{a.den_} * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(int128{a.num_} * b.den_ - int128{b.num_} * a.den_, int128{a.den_} * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(int128{a.num_} * b.num_, int128{a.den_} * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("division by zero");
    return make(int128{a.num_} * b.den_, int128{a.den_} * b.num_);
  }
  Rational operator-() const { return make(-int128{num_}, den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return int128{a.num_} * b.den_ <=> int128{b.num_} * a.den_;
  }

  [[nodiscard]] Rational abs() const { return num_ < 0 ? -*this : *this; }

  [[nodiscard]] std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  static int128 gcd128(int128 a, int128 b) {
    while (b != 0) {
      const int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Sorted, duplicate-free finite set of rationals.
class RationalSet {
 public:
  RationalSet() = default;
  RationalSet(std::vector<Rational> values) : elems_(std::move(values)) {  // NOLINT(google-explicit-constructor)
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }
  RationalSet(std::initializer_list<Rational> values) : RationalSet(std::vector<Rational>(values)) {}

  [[nodiscard]] const std::vector<Rational>& elements() const noexcept { return elems_; }
  [[nodiscard]] std::size_t size() const noexcept { return elems_.size(); }
  [[nodiscard]] bool empty() const noexcept { return elems_.empty(); }
  [[nodiscard]] bool contains(const Rational& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }
  [[nodiscard]] auto begin() const noexcept { return elems_.begin(); }
  [[nodiscard]] auto end() const noexcept { return elems_.end(); }

  [[nodiscard]] RationalSet scaled(const Rational& q) const {
    std::vector<Rational> out;
    out.reserve(elems_.size());
    for (const auto& x : elems_) out.push_back(x * q);
    return RationalSet(std::move(out));
  }
  [[nodiscard]] RationalSet without_zero() const {
    std::vector<Rational> out;
    for (const auto& x : elems_)
      if (!x.is_zero()) out.push_back(x);
    return RationalSet(std::move(out));
  }

  friend bool operator==(const RationalSet&, const RationalSet&) = default;
  friend auto operator<=>(const RationalSet& a, const RationalSet& b) { return a.elems_ <=> b.elems_; }

  [[nodiscard]] std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) out += (i ? "," : "") + elems_[i].str();
    return out + "}";
  }

 private:
  std::vector<Rational> elems_;
};

[[nodiscard]] inline RationalSet product_set(const RationalSet& a, const RationalSet& b) {
  std::vector<Rational> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return RationalSet(std::move(out));
}

struct RationalAp {
  Rational first;
  Rational difference;

  friend bool operator==(const RationalAp&, const RationalAp&) = default;
};

/// (first, difference) of the sorted set when its consecutive gaps agree.
[[nodiscard]] inline std::optional<RationalAp> is_rational_ap(const RationalSet& p) {
  if (p.empty()) throw InvalidArgument("empty set");
  const auto& e = p.elements();
  if (e.size() == 1) return RationalAp{e[0], 0};
  const Rational d = e[1] - e[0];
  for (std::size_t i = 2; i < e.size(); ++i)
    if (e[i] - e[i - 1] != d) return std::nullopt;
  return RationalAp{e[0], d};
}

struct CoprimeForm {
  RationalSet scaled;  // integers with overall gcd 1
  Rational factor;     // positive, scaled = factor * X
};

[[nodiscard]] inline CoprimeForm normalize_coprime(const RationalSet& x) {
  if (x.empty()) throw InvalidArgument("empty set");
  Rational::int128 lcm = 1;
  for (const auto& v : x) {
    if (v.is_zero()) throw InvalidArgument("normalize_coprime: zero element");
    lcm = lcm / Rational::gcd128(lcm, v.den()) * v.den();
    if (lcm > INT64_MAX) throw ArithmeticOverflow("denominator lcm out of range");
  }
  Rational::int128 g = 0;
  for (const auto& v : x) {
    const Rational::int128 n = Rational::int128{v.num()} * (lcm / v.den());
    g = Rational::gcd128(n < 0 ? -n : n, g);
  }
  const Rational factor = Rational::make(lcm, g);
  return {x.scaled(factor), factor};
}

struct RationalDecomposition {
  RationalSet a;
  RationalSet b;
  Tag tag = Tag::Other;
};

struct RationalLimits {
  std::size_t max_set_size = 18;
  std::int64_t max_magnitude = 1'000'000;  // after coprime normalization
};

namespace detail {

inline bool is_pm_pair(const RationalSet& s) {
  return s.size() == 2 && (s.elements()[0] + s.elements()[1]).is_zero();
}
inline bool is_doubling_pair(const RationalSet& s) {
  if (s.size() != 2) return false;
  const auto& x = s.elements()[0];
  const auto& y = s.elements()[1];
  return y == x * Rational(-2) || x == y * Rational(-2);
}

// largest-magnitude element is positive (a tie between r and -r counts as positive)
inline bool leads_positive(const RationalSet& s) { return s.elements().back() >= s.elements().front().abs(); }

}  // namespace detail

/// Tag of a pair of factors; no product check.
[[nodiscard]] inline Tag classify_rational(const RationalSet& a, const RationalSet& b) {
  if (detail::is_pm_pair(a) || detail::is_pm_pair(b)) return Tag::SymmetricFactor;
  if (detail::is_doubling_pair(a) && detail::is_doubling_pair(b)) return Tag::DoublingPair;
  return Tag::Other;
}

/// Tag of a decomposition of P \ {0}; throws unless A * B = P \ {0} with |A|, |B| >= 2.
[[nodiscard]] inline Tag classify_rational(const RationalSet& p, const RationalSet& a, const RationalSet& b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidArgument("both factors need at least two elements");
  if (product_set(a, b) != p.without_zero()) throw InvalidArgument("A*B does not equal P \\ {0}");
  return classify_rational(a, b);
}

/// Canonical (A', B') of a class: both factors in coprime-integer form, the
/// joint sign chosen so the first factor's largest-magnitude element is
/// positive, and the lexicographically least such orientation.
[[nodiscard]] inline std::pair<RationalSet, RationalSet> rational_canonical_key(const RationalSet& a,
                                                                                const RationalSet& b) {
  const CoprimeForm fa = normalize_coprime(a);
  const CoprimeForm fb = normalize_coprime(b);
  std::optional<std::pair<RationalSet, RationalSet>> best;
  for (int swap = 0; swap < 2; ++swap) {
    for (int sign : {1, -1}) {
      RationalSet first = (swap ? fb : fa).scaled.scaled(sign);
      RationalSet second = (swap ? fa : fb).scaled.scaled(sign);
      if (!detail::leads_positive(first)) continue;
      std::pair cand{std::move(first), std::move(second)};
      if (!best || cand < *best) best = std::move(cand);
    }
  }
  return *best;
}

/// All decomposition classes of the arithmetic progression P (zero stripped).
///
/// Representatives keep the canonical coprime-integer first factor; the
/// second factor absorbs the scale so that A * B = P \ {0} exactly.
[[nodiscard]] inline std::vector<RationalDecomposition> rational_decompositions(const RationalSet& p,
                                                                                const RationalLimits& limits = {}) {
  if (p.empty() || !is_rational_ap(p)) throw InvalidArgument("P is not an arithmetic progression");
  const RationalSet target = p.without_zero();
  if (target.size() < 2) return {};
  if (target.size() > limits.max_set_size || target.size() > 64) throw LimitExceeded("progression too long");
  const CoprimeForm norm = normalize_coprime(target);
  for (const auto& t : norm.scaled)
    if (t.abs() > Rational(limits.max_magnitude)) throw LimitExceeded("element magnitude over bound");

  const auto& elems = target.elements();
  const std::size_t n = elems.size();
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  auto index_of = [&](const Rational& x) {
    return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), x) - elems.begin());
  };

  std::set<std::pair<RationalSet, RationalSet>> keys;
  std::vector<std::size_t> chosen;

  auto enumerate_b = [&](const std::vector<Rational>& bmax) {
    std::vector<Rational> cands;
    std::vector<std::uint64_t> rows;
    std::uint64_t one_row = 0;
    for (const auto& b : bmax) {
      std::uint64_t row = 0;
      for (std::size_t i : chosen) row |= std::uint64_t{1} << index_of(elems[i] * b);
      if (b == Rational(1)) {
        one_row = row;
      } else {
        cands.push_back(b);
        rows.push_back(row);
      }
    }
    std::vector<std::uint64_t> suffix(cands.size() + 1, 0);
    for (std::size_t i = cands.size(); i-- > 0;) suffix[i] = suffix[i + 1] | rows[i];
    std::vector<Rational> picked;
    const std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t i, std::uint64_t covered) {
      if ((covered | suffix[i]) != full) return;
      if (i == cands.size()) {
        if (picked.empty()) return;
        std::vector<Rational> av, bv{Rational(1)};
        for (std::size_t k : chosen) av.push_back(elems[k]);
        bv.insert(bv.end(), picked.begin(), picked.end());
        RationalSet a(std::move(av)), b(std::move(bv));
        if (product_set(a, b) != target) throw VerificationFailure("rational search emitted a non-decomposition");
        keys.insert(rational_canonical_key(a, b));
        return;
      }
      picked.push_back(cands[i]);
      walk(i + 1, covered | rows[i]);
      picked.pop_back();
      walk(i + 1, covered);
    };
    walk(0, one_row);
  };

  // quotient sets a^-1 T, kept sorted
  std::vector<std::vector<Rational>> quotients;
  for (const auto& a : elems) quotients.push_back(target.scaled(Rational(1) / a).elements());

  const std::function<void(std::size_t, const std::vector<Rational>&)> descend =
      [&](std::size_t next, const std::vector<Rational>& bmax) {
        if (chosen.size() >= 2) enumerate_b(bmax);
        for (std::size_t j = next; j < n; ++j) {
          std::vector<Rational> nb;
          if (chosen.empty()) {
            nb = quotients[j];
          } else {
            std::set_intersection(bmax.begin(), bmax.end(), quotients[j].begin(), quotients[j].end(),
                                  std::back_inserter(nb));
          }
          if (nb.size() < 2) continue;
          if ((chosen.size() + 1 + (n - 1 - j)) * nb.size() < n) continue;
          chosen.push_back(j);
          descend(j + 1, nb);
          chosen.pop_back();
        }
      };
  descend(0, {});

  std::vector<RationalDecomposition> out;
  const Rational unscale = Rational(1) / norm.factor;
  for (const auto& [ka, kb] : keys) {
    RationalDecomposition d{ka, kb.scaled(unscale), classify_rational(ka, kb)};
    out.push_back(std::move(d));
  }
  return out;
}

/// T = h * {-2, 1, 4} for some rational h (h tried over the elements of T).
[[nodiscard]] inline bool is_doubling_target(const RationalSet& t) {
  if (t.size() != 3) return false;
  const RationalSet base{Rational(-2), Rational(1), Rational(4)};
  for (const auto& h : t)
    if (base.scaled(h) == t) return true;
  return false;
}

}  // namespace mdecomp
