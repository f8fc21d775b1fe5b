#pragma once

/**
 * @file decomp.hpp
 * @brief Nontrivial multiplicative decompositions S \ {0} = A B over F_p.
 *
 * Decompositions are grouped into classes under the dilation action
 * (A, B) -> (lA, l^-1 B) and the swap (A, B) -> (B, A). Every class has a
 * member with 1 in B, which forces A to be a subset of T = S \ {0}. The search
 * walks subsets A of T in increasing residue order while maintaining
 *
 *     Bmax(A) = intersection over a in A of a^-1 T,
 *
 * the largest B compatible with A, and enumerates every B inside Bmax(A) that
 * contains 1 and covers T. Each hit is canonicalized and deduplicated.
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "mdecomp/error.hpp"
#include "mdecomp/fpset.hpp"

namespace mdecomp {

enum class Tag { SymmetricFactor, DoublingPair, Other };

[[nodiscard]] constexpr std::string_view to_string(Tag tag) noexcept {
  switch (tag) {
    case Tag::SymmetricFactor: return "SymmetricFactor";
    case Tag::DoublingPair: return "DoublingPair";
    case Tag::Other: return "Other";
  }
  return "Other";
}

struct Decomposition {
  ResidueSet a;
  ResidueSet b;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

struct DecompositionClass {
  Decomposition representative;
  Tag tag = Tag::Other;
  std::uint64_t orbit_size = 0;
};

struct SearchLimits {
  std::size_t max_set_size = 18;
};

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t elapsed_micros = 0;
};

/// Sorted element lists of both factors; compared lexicographically.
using DecompositionKey = std::pair<std::vector<Residue>, std::vector<Residue>>;

namespace detail {

inline bool is_pm_pair(const std::vector<Residue>& s, std::uint32_t p) {
  return s.size() == 2 && add_mod(s[0], s[1], p) == 0;
}

// {-r, 2r} for some r: one element is -2 times the other.
inline bool is_doubling_pair(const std::vector<Residue>& s, std::uint32_t p) {
  if (s.size() != 2) return false;
  const Residue m2 = p - 2;
  return mul_mod(s[0], m2, p) == s[1] || mul_mod(s[1], m2, p) == s[0];
}

inline std::vector<Residue> scaled(const std::vector<Residue>& s, Residue l, std::uint32_t p) {
  std::vector<Residue> out;
  out.reserve(s.size());
  for (Residue x : s) out.push_back(mul_mod(x, l, p));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Tag of an arbitrary pair of factors (no product check).
[[nodiscard]] inline Tag classify_pair(const ResidueSet& a, const ResidueSet& b) {
  const std::uint32_t p = a.modulus();
  const auto ea = a.elements();
  const auto eb = b.elements();
  if (detail::is_pm_pair(ea, p) || detail::is_pm_pair(eb, p)) return Tag::SymmetricFactor;
  if (detail::is_doubling_pair(ea, p) && detail::is_doubling_pair(eb, p)) return Tag::DoublingPair;
  return Tag::Other;
}

/// Throws InvalidArgument unless d is a nontrivial decomposition of S.
inline void require_valid(const ResidueSet& s, const Decomposition& d) {
  s.require_same_modulus(d.a);
  s.require_same_modulus(d.b);
  if (d.a.size() < 2 || d.b.size() < 2) throw InvalidArgument("both factors need at least two elements");
  if (productset(d.a, d.b) != strip_zero(s)) throw InvalidArgument("A*B does not equal S \\ {0}");
}

[[nodiscard]] inline Tag classify_decomposition(const ResidueSet& s, const Decomposition& d) {
  require_valid(s, d);
  return classify_pair(d.a, d.b);
}

/// Least orbit member under dilation and swap, ordered by (sorted A, sorted B).
///
/// The least member always has 1 as the smallest element of its first factor,
/// so only dilations that send some element of either factor to 1 are tried.
[[nodiscard]] inline DecompositionKey canonical_key(const Decomposition& d) {
  const std::uint32_t p = d.a.modulus();
  const auto ea = d.a.elements();
  const auto eb = d.b.elements();
  DecompositionKey best;
  bool have = false;
  for (int swap = 0; swap < 2; ++swap) {
    const auto& first = swap ? eb : ea;
    const auto& second = swap ? ea : eb;
    for (Residue x : first) {
      const Residue l = inv_mod(x, p);
      DecompositionKey key{detail::scaled(first, l, p), detail::scaled(second, x, p)};
      if (!have || key < best) {
        best = std::move(key);
        have = true;
      }
    }
  }
  return best;
}

[[nodiscard]] inline Decomposition from_key(std::uint32_t p, const DecompositionKey& key) {
  Decomposition d{ResidueSet(p), ResidueSet(p)};
  for (Residue x : key.first) d.a.set_bit(x);
  for (Residue x : key.second) d.b.set_bit(x);
  return d;
}

[[nodiscard]] inline Decomposition canonicalize(const Decomposition& d) {
  return from_key(d.a.modulus(), canonical_key(d));
}

/// Number of concrete ordered pairs (A', B') in the class of d.
[[nodiscard]] inline std::uint64_t orbit_size(const Decomposition& d) {
  const std::uint32_t p = d.a.modulus();
  const auto ea = d.a.elements();
  const auto eb = d.b.elements();
  const Residue a0_inv = inv_mod(ea.front(), p);
  // dilations fixing the pair map a0 into A
  std::uint64_t stabilizer = 0;
  for (Residue a : ea) {
    const Residue l = mul_mod(a, a0_inv, p);
    if (detail::scaled(ea, l, p) == ea && detail::scaled(eb, inv_mod(l, p), p) == eb) ++stabilizer;
  }
  // is (B, A) a dilation of (A, B)?  then l maps a0 into B
  bool swap_in_orbit = false;
  for (Residue b : eb) {
    const Residue l = mul_mod(b, a0_inv, p);
    if (detail::scaled(ea, l, p) == eb && detail::scaled(eb, inv_mod(l, p), p) == ea) {
      swap_in_orbit = true;
      break;
    }
  }
  const std::uint64_t dilation_orbit = (p - 1) / stabilizer;
  return swap_in_orbit ? dilation_orbit : 2 * dilation_orbit;
}

namespace detail {

/// Depth-first search over normalized pairs (1 in B). The visitor returns
/// false to stop the search early.
class DecompositionSearch {
 public:
  using Visitor = std::function<bool(const Decomposition&)>;

  DecompositionSearch(const ResidueSet& target, Visitor visit)
      : target_(target), p_(target.modulus()), elems_(target.elements()), visit_(std::move(visit)) {
    for (Residue t : elems_) quotients_.push_back(dilate(inv_mod(t, p_), target_));
  }

  std::uint64_t run() {
    std::vector<std::size_t> chosen;
    descend(0, chosen, std::nullopt);
    return nodes_;
  }

 private:
  // returns false once the visitor asked to stop
  bool descend(std::size_t next, std::vector<std::size_t>& chosen, const std::optional<ResidueSet>& bmax) {
    ++nodes_;
    if (chosen.size() >= 2 && !enumerate_b(chosen, *bmax)) return false;
    const std::size_t total = elems_.size();
    for (std::size_t j = next; j < total; ++j) {
      ResidueSet nb = bmax ? bmax->intersect(quotients_[j]) : quotients_[j];
      const std::size_t nb_size = nb.size();
      if (nb_size < 2) continue;
      const std::size_t reachable = chosen.size() + 1 + (total - 1 - j);
      if (reachable * nb_size < total) continue;
      chosen.push_back(j);
      const bool go_on = descend(j + 1, chosen, nb);
      chosen.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  std::size_t index_of(Residue r) const {
    return static_cast<std::size_t>(std::lower_bound(elems_.begin(), elems_.end(), r) - elems_.begin());
  }

  // All B with 1 in B, B inside bmax, |B| >= 2 and A*B = T.
  bool enumerate_b(const std::vector<std::size_t>& chosen, const ResidueSet& bmax) {
    const std::uint64_t full = elems_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << elems_.size()) - 1;
    std::vector<Residue> cands;
    std::vector<std::uint64_t> rows;
    std::uint64_t one_row = 0;
    for (Residue b : bmax.elements()) {
      std::uint64_t row = 0;
      for (std::size_t i : chosen) row |= std::uint64_t{1} << index_of(mul_mod(elems_[i], b, p_));
      if (b == 1) {
        one_row = row;
      } else {
        cands.push_back(b);
        rows.push_back(row);
      }
    }
    // suffix unions for the coverage bound
    std::vector<std::uint64_t> suffix(cands.size() + 1, 0);
    for (std::size_t i = cands.size(); i-- > 0;) suffix[i] = suffix[i + 1] | rows[i];
    if ((one_row | suffix[0]) != full) return true;

    std::vector<Residue> picked;
    const std::function<bool(std::size_t, std::uint64_t)> walk = [&](std::size_t i, std::uint64_t covered) -> bool {
      if ((covered | suffix[i]) != full) return true;
      if (i == cands.size()) {
        if (picked.empty()) return true;
        return emit(chosen, picked);
      }
      picked.push_back(cands[i]);
      const bool go_on = walk(i + 1, covered | rows[i]);
      picked.pop_back();
      if (!go_on) return false;
      return walk(i + 1, covered);
    };
    return walk(0, one_row);
  }

  bool emit(const std::vector<std::size_t>& chosen, const std::vector<Residue>& picked) {
    Decomposition d{target_.empty_like(), target_.empty_like()};
    for (std::size_t i : chosen) d.a.set_bit(elems_[i]);
    d.b.set_bit(1);
    for (Residue b : picked) d.b.set_bit(b);
    if (productset(d.a, d.b) != target_)
      throw VerificationFailure("search emitted " + to_string(d.a) + "*" + to_string(d.b) + " != " +
                                to_string(target_));
    return visit_(d);
  }

  const ResidueSet& target_;
  std::uint32_t p_;
  std::vector<Residue> elems_;
  std::vector<ResidueSet> quotients_;
  Visitor visit_;
  std::uint64_t nodes_ = 0;
};

inline std::optional<ResidueSet> searchable_target(const ResidueSet& s, const SearchLimits& limits) {
  ResidueSet t = strip_zero(s);
  const std::size_t n = t.size();
  if (n < 2) return std::nullopt;
  if (n > limits.max_set_size || n > 64)
    throw LimitExceeded("|S \\ {0}| = " + std::to_string(n) + " exceeds search limit " +
                        std::to_string(limits.max_set_size));
  return t;
}

}  // namespace detail

/// Every class of nontrivial decompositions of S, sorted by canonical key.
[[nodiscard]] inline std::vector<DecompositionClass> find_decompositions(const ResidueSet& s,
                                                                         const SearchLimits& limits = {},
                                                                         SearchStats* stats = nullptr) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<DecompositionClass> out;
  const auto target = detail::searchable_target(s, limits);
  std::uint64_t nodes = 0;
  if (target) {
    std::set<DecompositionKey> keys;
    detail::DecompositionSearch search(*target, [&](const Decomposition& d) {
      keys.insert(canonical_key(d));
      return true;
    });
    nodes = search.run();
    for (const auto& key : keys) {
      Decomposition rep = from_key(s.modulus(), key);
      const Tag tag = classify_pair(rep.a, rep.b);
      const std::uint64_t orbit = orbit_size(rep);
      out.push_back({std::move(rep), tag, orbit});
    }
  }
  if (stats) {
    stats->nodes_visited = nodes;
    stats->elapsed_micros = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started).count());
  }
  return out;
}

[[nodiscard]] inline bool is_decomposable(const ResidueSet& s, const SearchLimits& limits = {}) {
  const auto target = detail::searchable_target(s, limits);
  if (!target) return false;
  bool found = false;
  detail::DecompositionSearch search(*target, [&](const Decomposition&) {
    found = true;
    return false;
  });
  search.run();
  return found;
}

/// Unpruned reference enumeration of normalized pairs (1 in B), |S \ {0}| <= 8.
///
/// Uses plain integer arithmetic and std::set, sharing nothing with the search
/// above. B is drawn from all subsets of a0^-1 T, where a0 = min A, since
/// a0 B must lie in T.
[[nodiscard]] inline std::vector<Decomposition> naive_oracle(const ResidueSet& s) {
  const std::uint32_t p = s.modulus();
  std::vector<std::uint64_t> t;
  for (Residue r : s.elements())
    if (r != 0) t.push_back(r);
  if (t.size() > 8) throw LimitExceeded("naive oracle supports |S \\ {0}| <= 8");
  std::vector<Decomposition> out;
  if (t.size() < 2) return out;
  const std::set<std::uint64_t> target(t.begin(), t.end());
  const std::size_t n = t.size();
  auto inverse = [p](std::uint64_t a) {
    for (std::uint64_t x = 1; x < p; ++x)
      if (a * x % p == 1) return x;
    return std::uint64_t{0};
  };
  for (std::uint32_t amask = 0; amask < (1u << n); ++amask) {
    if (std::popcount(amask) < 2) continue;
    std::vector<std::uint64_t> a;
    for (std::size_t i = 0; i < n; ++i)
      if (amask >> i & 1u) a.push_back(t[i]);
    const std::uint64_t a0inv = inverse(a.front());
    std::vector<std::uint64_t> pool;
    for (std::uint64_t x : t) pool.push_back(x * a0inv % p);
    for (std::uint32_t bmask = 0; bmask < (1u << n); ++bmask) {
      std::set<std::uint64_t> b;
      for (std::size_t i = 0; i < n; ++i)
        if (bmask >> i & 1u) b.insert(pool[i]);
      if (b.size() < 2 || !b.contains(1)) continue;
      std::set<std::uint64_t> prod;
      for (auto x : a)
        for (auto y : b) prod.insert(x * y % p);
      if (prod != target) continue;
      Decomposition d{ResidueSet(p), ResidueSet(p)};
      for (auto x : a) d.a.set_bit(static_cast<Residue>(x));
      for (auto y : b) d.b.set_bit(static_cast<Residue>(y));
      out.push_back(std::move(d));
    }
  }
  return out;
}

/// S \ {0} = h * {-2, 1, 4} for some h; h is tried over each element of S \ {0}.
[[nodiscard]] inline bool is_special_triple(const ResidueSet& s) {
  const ResidueSet t = strip_zero(s);
  if (t.size() != 3) return false;
  for (Residue h : t.elements())
    if (dilate(h, ResidueSet::of(s.modulus(), {-2, 1, 4})) == t) return true;
  return false;
}

struct SetReport {
  ResidueSet set;
  std::optional<IntervalSpec> interval;
  bool symmetric = false;
  bool special_triple = false;
  std::vector<DecompositionClass> classes;
  SearchStats stats;
};

[[nodiscard]] inline SetReport analyze_set(const ResidueSet& s, const SearchLimits& limits = {}) {
  SetReport report{s, is_interval(s), is_symmetric(s), is_special_triple(s), {}, {}};
  report.classes = find_decompositions(s, limits, &report.stats);
  return report;
}

}  // namespace mdecomp
