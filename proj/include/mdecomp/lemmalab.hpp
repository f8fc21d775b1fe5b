#pragma once

/**
 * @file lemmalab.hpp
 * @brief Statement checkers for the additive-combinatorics toolbox.
 *
 * Each checker evaluates a hypothesis and, only when it holds, the matching
 * conclusion. Checkers report and never assert; callers decide what a
 * violation means. Every threshold is compared in exact integer arithmetic.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdecomp/error.hpp"
#include "mdecomp/fpset.hpp"
#include "mdecomp/rational.hpp"

namespace mdecomp {

enum class LemmaId { Bourgain, Freiman, PositivePropAp, CauchyDavenport, ClosePair };

[[nodiscard]] constexpr std::string_view to_string(LemmaId id) noexcept {
  switch (id) {
    case LemmaId::Bourgain: return "bourgain";
    case LemmaId::Freiman: return "freiman";
    case LemmaId::PositivePropAp: return "positive_prop_ap";
    case LemmaId::CauchyDavenport: return "cauchy_davenport";
    case LemmaId::ClosePair: return "close_pair";
  }
  return "unknown";
}

struct LemmaVerdict {
  LemmaId lemma;
  bool hypothesis_satisfied = false;
  std::optional<bool> conclusion_holds;  // present iff hypothesis_satisfied
  std::vector<std::pair<std::string, std::int64_t>> quantities;
  std::optional<ApCover> cover;
  std::optional<std::pair<std::int64_t, std::int64_t>> pair;

  [[nodiscard]] bool violated() const { return hypothesis_satisfied && conclusion_holds == false; }

  [[nodiscard]] std::int64_t quantity(std::string_view name) const {
    for (const auto& [k, v] : quantities)
      if (k == name) return v;
    throw InvalidArgument("no quantity named " + std::string(name));
  }
};

namespace detail {
inline std::int64_t ssize(const ResidueSet& s) { return static_cast<std::int64_t>(s.size()); }
}  // namespace detail

/// |8XY - 8XY| >= min(|X||Y|, p - 1) / 2 for X, Y not {0}.
[[nodiscard]] inline LemmaVerdict check_bourgain(const ResidueSet& x, const ResidueSet& y) {
  x.require_same_modulus(y);
  if (x.empty() || y.empty()) throw InvalidArgument("sets must be nonempty");
  if (strip_zero(x).empty() || strip_zero(y).empty()) throw InvalidArgument("sets must differ from {0}");
  const std::int64_t p = x.modulus();
  const ResidueSet s8 = kfold_sum(8, productset(x, y));
  const ResidueSet diff = sumset(s8, negate(s8));
  const std::int64_t xy = detail::ssize(x) * detail::ssize(y);
  const std::int64_t d = detail::ssize(diff);
  LemmaVerdict v{LemmaId::Bourgain, true, 2 * d >= std::min(xy, p - 1), {}, {}, {}};
  v.quantities = {{"p", p}, {"|X|", detail::ssize(x)}, {"|Y|", detail::ssize(y)}, {"|D|", d}};
  return v;
}

/// |X| < p/35 and |2X| < 12/5 |X| - 3  =>  X lies in a progression of at most |2X| - |X| + 1 terms.
[[nodiscard]] inline LemmaVerdict check_freiman(const ResidueSet& x) {
  if (x.empty()) throw InvalidArgument("set must be nonempty");
  const std::int64_t p = x.modulus();
  const std::int64_t n = detail::ssize(x);
  const std::int64_t n2 = detail::ssize(sumset(x, x));
  LemmaVerdict v{LemmaId::Freiman, 35 * n < p && 5 * n2 < 12 * n - 15, {}, {}, {}, {}};
  v.quantities = {{"p", p}, {"|X|", n}, {"|2X|", n2}};
  if (v.hypothesis_satisfied) {
    v.cover = ap_cover_mod_p(x, static_cast<std::uint64_t>(n2 - n + 1));
    v.conclusion_holds = v.cover.has_value();
  }
  return v;
}

/// |mX| < min(33m|X|, (p-1)/8) and mX inside a progression of <= 2|mX| terms
///   =>  X inside a progression of at most 132|X| terms.
[[nodiscard]] inline LemmaVerdict check_positive_prop_ap(const ResidueSet& x, std::uint64_t m) {
  if (x.empty()) throw InvalidArgument("set must be nonempty");
  if (m == 0) throw InvalidArgument("m must be positive");
  const std::int64_t p = x.modulus();
  const std::int64_t n = detail::ssize(x);
  const ResidueSet mx = kfold_sum(m, x);
  const std::int64_t nm = detail::ssize(mx);
  const std::int64_t mm = static_cast<std::int64_t>(m);
  bool hyp = nm < 33 * mm * n && 8 * nm < p - 1;
  if (hyp) hyp = ap_cover_mod_p(mx, static_cast<std::uint64_t>(2 * nm)).has_value();
  LemmaVerdict v{LemmaId::PositivePropAp, hyp, {}, {}, {}, {}};
  v.quantities = {{"p", p}, {"m", mm}, {"|X|", n}, {"|mX|", nm}};
  if (hyp) {
    v.cover = ap_cover_mod_p(x, static_cast<std::uint64_t>(132 * n));
    v.conclusion_holds = v.cover.has_value();
  }
  return v;
}

/// |X + Y| >= min(p, |X| + |Y| - 1).
[[nodiscard]] inline LemmaVerdict check_cauchy_davenport(const ResidueSet& x, const ResidueSet& y) {
  x.require_same_modulus(y);
  if (x.empty() || y.empty()) throw InvalidArgument("sets must be nonempty");
  const std::int64_t p = x.modulus();
  const std::int64_t s = detail::ssize(sumset(x, y));
  const std::int64_t bound = std::min(p, detail::ssize(x) + detail::ssize(y) - 1);
  LemmaVerdict v{LemmaId::CauchyDavenport, true, s >= bound, {}, {}, {}};
  v.quantities = {{"p", p}, {"|X|", detail::ssize(x)}, {"|Y|", detail::ssize(y)}, {"|X+Y|", s}, {"bound", bound}};
  return v;
}

struct ClosePairInput {
  std::vector<std::int64_t> values;  // subset of (offset, offset + length]
  std::int64_t offset = 0;
  std::int64_t length = 0;
  Rational delta;  // in (0, 1)
  std::uint32_t k = 1;
};

namespace detail {

inline Rational rational_pow(const Rational& base, std::uint32_t e) {
  Rational r(1);
  for (std::uint32_t i = 0; i < e; ++i) r = r * base;
  return r;
}

// (lower, upper) with lower <= x1 - x2 < upper; throws InvalidArgument on unmet preconditions
inline std::pair<Rational, Rational> close_pair_window(const ClosePairInput& in) {
  if (in.delta <= Rational(0) || in.delta >= Rational(1)) throw InvalidArgument("delta must lie in (0, 1)");
  if (in.k == 0) throw InvalidArgument("k must be positive");
  const Rational inv = Rational(1) / in.delta;
  const Rational length(in.length);
  if (!(length > inv)) throw InvalidArgument("need L > 1/delta");
  for (std::size_t i = 0; i < in.values.size(); ++i) {
    const std::int64_t x = in.values[i];
    if (x <= in.offset || x > in.offset + in.length) throw InvalidArgument("element outside (r, r+L]");
    if (i > 0 && x <= in.values[i - 1]) throw InvalidArgument("elements must be strictly increasing");
  }
  if (Rational(static_cast<std::int64_t>(in.values.size())) < in.delta * length)
    throw InvalidArgument("need |X| >= delta L");
  const Rational upper = Rational(2) * rational_pow(inv, in.k);
  if (!(rational_pow(inv, in.k) < length)) throw InvalidArgument("need delta^-k < L");
  const Rational lower = rational_pow(inv, in.k - 1) / Rational(2);
  return {lower, upper};
}

}  // namespace detail

/// x1 > x2 in X with delta^-(k-1)/2 <= x1 - x2 < 2 delta^-k; smallest x2, then smallest x1.
///
/// Throws InvalidArgument when the preconditions fail and VerificationFailure
/// when no pair exists, since that would contradict the pigeonhole bound.
[[nodiscard]] inline std::pair<std::int64_t, std::int64_t> find_close_pair(const ClosePairInput& in) {
  const auto [lower, upper] = detail::close_pair_window(in);
  const auto& xs = in.values;
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t i = j + 1; i < xs.size(); ++i) {
      const Rational diff(xs[i] - xs[j]);
      if (diff >= upper) break;
      if (diff >= lower) return {xs[i], xs[j]};
    }
  throw VerificationFailure("no close pair found; pigeonhole bound violated");
}

/// Verdict form of find_close_pair; hypothesis is the precondition set.
[[nodiscard]] inline LemmaVerdict check_close_pair(const ClosePairInput& in) {
  LemmaVerdict v{LemmaId::ClosePair, false, {}, {}, {}, {}};
  v.quantities = {{"L", in.length}, {"|X|", static_cast<std::int64_t>(in.values.size())}, {"k", in.k}};
  try {
    (void)detail::close_pair_window(in);
  } catch (const InvalidArgument&) {
    return v;
  }
  v.hypothesis_satisfied = true;
  try {
    v.pair = find_close_pair(in);
    v.conclusion_holds = true;
  } catch (const VerificationFailure&) {
    v.conclusion_holds = false;
  }
  return v;
}

}  // namespace mdecomp
