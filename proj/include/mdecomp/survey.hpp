#pragma once

/**
 * @file survey.hpp
 * @brief Batch drivers behind the command-line tool.
 *
 * - interval surveys over ranges of primes and lengths, with deterministic
 *   JSONL / CSV emission regardless of worker count;
 * - exhaustive classification of small integer progressions over Q;
 * - seeded randomized suites for the lemma checkers;
 * - JSON renderings of single-set reports and constructions.
 *
 * Wall-clock timings are emitted only on request, so default outputs are
 * byte-reproducible.
 */

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mdecomp/construct.hpp"
#include "mdecomp/decomp.hpp"
#include "mdecomp/error.hpp"
#include "mdecomp/fpset.hpp"
#include "mdecomp/lemmalab.hpp"
#include "mdecomp/rational.hpp"

namespace mdecomp {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON renderings
// ---------------------------------------------------------------------------

[[nodiscard]] inline ordered_json to_json(const ResidueSet& s) { return s.elements(); }

[[nodiscard]] inline ordered_json to_json(const RationalSet& s) {
  ordered_json out = ordered_json::array();
  for (const auto& x : s) {
    if (x.is_integer())
      out.push_back(x.num());
    else
      out.push_back(x.str());
  }
  return out;
}

[[nodiscard]] inline ordered_json to_json(const SetReport& r, bool timing) {
  ordered_json j;
  j["p"] = r.set.modulus();
  j["set"] = to_json(r.set);
  if (r.interval)
    j["interval"] = {{"n", r.interval->n}, {"N", r.interval->length}};
  else
    j["interval"] = nullptr;
  j["symmetric"] = r.symmetric;
  j["special_triple"] = r.special_triple;
  j["class_count"] = r.classes.size();
  ordered_json classes = ordered_json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"A", to_json(c.representative.a)},
                       {"B", to_json(c.representative.b)},
                       {"tag", to_string(c.tag)},
                       {"orbit_size", c.orbit_size}});
  }
  j["classes"] = std::move(classes);
  j["nodes_visited"] = r.stats.nodes_visited;
  if (timing) j["elapsed_micros"] = r.stats.elapsed_micros;
  return j;
}

[[nodiscard]] inline ordered_json to_json(const ConstructionResult& c) {
  ordered_json j;
  j["p"] = c.interval.modulus();
  j["interval"] = to_json(c.interval);
  j["A"] = to_json(c.a);
  j["B"] = to_json(c.b);
  j["verified"] = c.verified;
  return j;
}

/// Soundness re-check applied before any construction is printed.
inline void reverify(const ConstructionResult& c) {
  require_valid(c.interval, Decomposition{c.a, c.b});
}

// ---------------------------------------------------------------------------
// Interval survey
// ---------------------------------------------------------------------------

struct SurveyConfig {
  std::uint32_t prime_lo = 3;
  std::uint32_t prime_hi = 13;
  std::uint32_t length_lo = 1;
  std::uint32_t length_hi = 6;
  SearchLimits limits;
  unsigned workers = 1;
  bool timing = false;
};

struct SurveyRecord {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::uint32_t length = 0;
  bool symmetric = false;
  bool special_triple = false;
  bool skipped = false;
  std::vector<Tag> tags;  // one per class, in class order
  std::uint64_t nodes_visited = 0;
  std::uint64_t elapsed_micros = 0;

  [[nodiscard]] std::size_t class_count() const noexcept { return tags.size(); }
};

struct SurveySummary {
  std::size_t records = 0;
  std::size_t skipped = 0;
  std::size_t decomposable = 0;
  std::map<Tag, std::size_t> tag_totals{{Tag::SymmetricFactor, 0}, {Tag::DoublingPair, 0}, {Tag::Other, 0}};
};

[[nodiscard]] inline std::vector<std::uint32_t> primes_in(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = std::max<std::uint32_t>(lo, 3); q <= hi; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

[[nodiscard]] inline SurveyRecord survey_interval(const IntervalSpec& spec, const SearchLimits& limits) {
  const ResidueSet s = make_interval(spec);
  SurveyRecord rec{spec.p, spec.n, spec.length, is_symmetric(s), is_special_triple(s), false, {}, 0, 0};
  try {
    SearchStats stats;
    for (const auto& c : find_decompositions(s, limits, &stats)) rec.tags.push_back(c.tag);
    rec.nodes_visited = stats.nodes_visited;
    rec.elapsed_micros = stats.elapsed_micros;
  } catch (const LimitExceeded&) {
    rec.skipped = true;
  }
  return rec;
}

/// One record per (p, N, n) in range, sorted by (p, N, n).
[[nodiscard]] inline std::vector<SurveyRecord> run_survey(const SurveyConfig& cfg) {
  if (cfg.prime_lo > cfg.prime_hi) throw InvalidArgument("empty prime range");
  if (cfg.length_lo < 1 || cfg.length_lo > cfg.length_hi) throw InvalidArgument("empty length range");
  std::vector<IntervalSpec> items;
  for (std::uint32_t p : primes_in(cfg.prime_lo, cfg.prime_hi))
    for (std::uint32_t len = cfg.length_lo; len <= std::min(cfg.length_hi, p); ++len)
      for (std::uint32_t n = 0; n < p; ++n) items.push_back({p, n, len});

  std::vector<SurveyRecord> records(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
      try {
        records[i] = survey_interval(items[i], cfg.limits);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

[[nodiscard]] inline SurveySummary summarize(const std::vector<SurveyRecord>& records) {
  SurveySummary s;
  s.records = records.size();
  for (const auto& r : records) {
    if (r.skipped) ++s.skipped;
    if (!r.tags.empty()) ++s.decomposable;
    for (Tag t : r.tags) ++s.tag_totals[t];
  }
  return s;
}

[[nodiscard]] inline ordered_json to_json(const SurveyRecord& r, bool timing) {
  ordered_json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["N"] = r.length;
  j["symmetric"] = r.symmetric;
  j["special_triple"] = r.special_triple;
  j["skipped"] = r.skipped;
  j["class_count"] = r.class_count();
  ordered_json tags = ordered_json::array();
  for (Tag t : r.tags) tags.push_back(to_string(t));
  j["tags"] = std::move(tags);
  j["nodes_visited"] = r.nodes_visited;
  if (timing) j["elapsed_micros"] = r.elapsed_micros;
  return j;
}

[[nodiscard]] inline ordered_json to_json(const SurveySummary& s) {
  ordered_json totals;
  for (const auto& [tag, count] : s.tag_totals) totals[std::string(to_string(tag))] = count;
  return {{"summary",
           {{"records", s.records}, {"skipped", s.skipped}, {"decomposable", s.decomposable}, {"tags", totals}}}};
}

/// JSONL: one record per line, then a summary line. LF endings.
inline void write_jsonl(std::ostream& os, const std::vector<SurveyRecord>& records, bool timing) {
  for (const auto& r : records) os << to_json(r, timing).dump() << '\n';
  os << to_json(summarize(records)).dump() << '\n';
}

/// CSV projection; tags joined by '+'. The summary is not part of the table.
inline void write_csv(std::ostream& os, const std::vector<SurveyRecord>& records, bool timing) {
  os << "p,n,N,symmetric,special_triple,skipped,class_count,tags,nodes_visited";
  if (timing) os << ",elapsed_micros";
  os << "\r\n";
  for (const auto& r : records) {
    std::string tags;
    for (std::size_t i = 0; i < r.tags.size(); ++i) tags += (i ? "+" : "") + std::string(to_string(r.tags[i]));
    os << r.p << ',' << r.n << ',' << r.length << ',' << (r.symmetric ? "true" : "false") << ','
       << (r.special_triple ? "true" : "false") << ',' << (r.skipped ? "true" : "false") << ',' << r.class_count()
       << ',' << tags << ',' << r.nodes_visited;
    if (timing) os << ',' << r.elapsed_micros;
    os << "\r\n";
  }
}

// ---------------------------------------------------------------------------
// Exhaustive progression check over Q
// ---------------------------------------------------------------------------

struct RationalVerifyConfig {
  std::uint32_t length_lo = 3;
  std::uint32_t length_hi = 7;
  std::int64_t coef_lo = -12;
  std::int64_t coef_hi = 12;
};

struct RationalFinding {
  RationalSet progression;
  RationalDecomposition decomposition;
};

struct RationalVerifyReport {
  std::size_t progressions = 0;  // distinct sets scanned
  std::size_t decomposable = 0;
  std::map<Tag, std::size_t> tag_counts{{Tag::SymmetricFactor, 0}, {Tag::DoublingPair, 0}, {Tag::Other, 0}};
  std::vector<RationalFinding> doubling;
  std::vector<RationalFinding> other;
  std::vector<RationalFinding> doubling_off_family;  // DoublingPair on a target not h*{-2,1,4}

  [[nodiscard]] bool ok() const { return other.empty() && doubling_off_family.empty(); }
};

/// Every integer progression a, a+d, ..., of the given lengths with a, d in
/// the coefficient range (d != 0), deduplicated as sets.
[[nodiscard]] inline RationalVerifyReport rational_verify(const RationalVerifyConfig& cfg) {
  if (cfg.length_lo < 1 || cfg.length_lo > cfg.length_hi) throw InvalidArgument("empty length range");
  if (cfg.coef_lo > cfg.coef_hi) throw InvalidArgument("empty coefficient range");
  const std::int64_t bound = 1'000'000;
  if (std::max(std::abs(cfg.coef_lo), std::abs(cfg.coef_hi)) * (1 + std::int64_t{cfg.length_hi}) > bound)
    throw LimitExceeded("coefficient range too large");
  RationalVerifyReport rep;
  std::set<RationalSet> seen;
  for (std::uint32_t len = cfg.length_lo; len <= cfg.length_hi; ++len)
    for (std::int64_t a = cfg.coef_lo; a <= cfg.coef_hi; ++a)
      for (std::int64_t d = cfg.coef_lo; d <= cfg.coef_hi; ++d) {
        if (d == 0) continue;
        std::vector<Rational> v;
        for (std::uint32_t i = 0; i < len; ++i) v.emplace_back(a + d * static_cast<std::int64_t>(i));
        RationalSet prog(std::move(v));
        if (!seen.insert(prog).second) continue;
        ++rep.progressions;
        const auto decs = rational_decompositions(prog);
        if (!decs.empty()) ++rep.decomposable;
        for (const auto& dec : decs) {
          ++rep.tag_counts[dec.tag];
          if (dec.tag == Tag::Other) rep.other.push_back({prog, dec});
          if (dec.tag == Tag::DoublingPair) {
            rep.doubling.push_back({prog, dec});
            if (!is_doubling_target(prog.without_zero())) rep.doubling_off_family.push_back({prog, dec});
          }
        }
      }
  return rep;
}

[[nodiscard]] inline ordered_json to_json(const RationalVerifyReport& r) {
  auto finding = [](const RationalFinding& f) {
    return ordered_json{{"P", to_json(f.progression)},
                        {"A", to_json(f.decomposition.a)},
                        {"B", to_json(f.decomposition.b)},
                        {"tag", to_string(f.decomposition.tag)}};
  };
  ordered_json j;
  j["progressions"] = r.progressions;
  j["decomposable"] = r.decomposable;
  ordered_json counts;
  for (const auto& [tag, n] : r.tag_counts) counts[std::string(to_string(tag))] = n;
  j["tag_counts"] = counts;
  for (const auto* name : {"doubling", "other", "doubling_off_family"}) j[name] = ordered_json::array();
  for (const auto& f : r.doubling) j["doubling"].push_back(finding(f));
  for (const auto& f : r.other) j["other"].push_back(finding(f));
  for (const auto& f : r.doubling_off_family) j["doubling_off_family"].push_back(finding(f));
  j["ok"] = r.ok();
  return j;
}

// ---------------------------------------------------------------------------
// Seeded lemma suites
// ---------------------------------------------------------------------------

/// splitmix64 finalizer; derives independent per-trial seeds from a root seed.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator with portable bounded draws.
class TrialRng {
 public:
  TrialRng(std::uint64_t root, std::uint64_t stream, std::uint64_t trial)
      : engine_(mix_seed(mix_seed(root ^ mix_seed(stream)) + trial)) {}

  /// Uniform in [lo, hi] by rejection.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  std::uint32_t prime_in(std::uint32_t lo, std::uint32_t hi) {
    const auto ps = primes_in(lo, hi);
    return ps[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(ps.size()) - 1))];
  }

  /// Random k-subset of `pool` (partial Fisher-Yates).
  template <class T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i)
      std::swap(pool[i], pool[static_cast<std::size_t>(uniform(static_cast<std::int64_t>(i),
                                                               static_cast<std::int64_t>(pool.size()) - 1))]);
    pool.resize(k);
    return pool;
  }

  ResidueSet residue_subset(std::uint32_t p, std::size_t k, bool allow_zero) {
    std::vector<std::int64_t> pool;
    for (std::int64_t r = allow_zero ? 0 : 1; r < p; ++r) pool.push_back(r);
    return ResidueSet::of(p, sample(std::move(pool), k));
  }

 private:
  std::mt19937_64 engine_;
};

struct LemmaSuiteConfig {
  std::uint64_t seed = 1;
  std::size_t bourgain_trials = 500;
  std::size_t cauchy_davenport_trials = 500;
  std::size_t freiman_trials = 300;
  std::size_t positive_prop_trials = 300;
  std::size_t close_pair_trials = 200;
};

struct LemmaSuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t hypothesis_satisfied = 0;
  std::size_t violations = 0;
  std::string first_witness;  // description of the first violating instance
};

namespace detail {

inline void tally(LemmaSuiteResult& res, const LemmaVerdict& v, const std::string& witness) {
  ++res.trials;
  if (v.hypothesis_satisfied) ++res.hypothesis_satisfied;
  if (v.violated()) {
    ++res.violations;
    if (res.first_witness.empty()) res.first_witness = witness;
  }
}

inline ResidueSet ap_subset(TrialRng& rng, std::uint32_t p, std::size_t ap_len, std::size_t keep) {
  const std::int64_t start = rng.uniform(0, p - 1);
  const std::int64_t diff = rng.uniform(1, p - 1);
  std::vector<std::int64_t> ap;
  for (std::size_t i = 0; i < ap_len; ++i) ap.push_back(start + diff * static_cast<std::int64_t>(i));
  return ResidueSet::of(p, rng.sample(std::move(ap), keep));
}

}  // namespace detail

[[nodiscard]] inline LemmaSuiteResult bourgain_suite(const LemmaSuiteConfig& cfg) {
  LemmaSuiteResult res{"bourgain", 0, 0, 0, {}};
  for (std::size_t t = 0; t < cfg.bourgain_trials; ++t) {
    TrialRng rng(cfg.seed, 2, t);
    const std::uint32_t p = rng.prime_in(11, 61);
    const auto draw = [&] {
      for (;;) {
        auto s = rng.residue_subset(p, static_cast<std::size_t>(rng.uniform(1, 6)), true);
        if (!strip_zero(s).empty()) return s;
      }
    };
    const ResidueSet x = draw();
    const ResidueSet y = draw();
    detail::tally(res, check_bourgain(x, y), "p=" + std::to_string(p) + " X=" + to_string(x) + " Y=" + to_string(y));
  }
  return res;
}

[[nodiscard]] inline LemmaSuiteResult cauchy_davenport_suite(const LemmaSuiteConfig& cfg) {
  LemmaSuiteResult res{"cauchy_davenport", 0, 0, 0, {}};
  for (std::size_t t = 0; t < cfg.cauchy_davenport_trials; ++t) {
    TrialRng rng(cfg.seed, 5, t);
    const std::uint32_t p = rng.prime_in(3, 101);
    const ResidueSet x = rng.residue_subset(p, static_cast<std::size_t>(rng.uniform(1, p)), true);
    const ResidueSet y = rng.residue_subset(p, static_cast<std::size_t>(rng.uniform(1, p)), true);
    detail::tally(res, check_cauchy_davenport(x, y),
                  "p=" + std::to_string(p) + " X=" + to_string(x) + " Y=" + to_string(y));
  }
  return res;
}

/// Dense subsets of short progressions with |X| < p/35, over primes in [lo, hi].
[[nodiscard]] inline LemmaSuiteResult freiman_suite(const LemmaSuiteConfig& cfg, std::uint32_t lo, std::uint32_t hi) {
  LemmaSuiteResult res{"freiman[" + std::to_string(lo) + "," + std::to_string(hi) + "]", 0, 0, 0, {}};
  for (std::size_t t = 0; t < cfg.freiman_trials; ++t) {
    TrialRng rng(cfg.seed, 3, t);
    const std::uint32_t p = rng.prime_in(lo, hi);
    const std::int64_t max_size = std::max<std::int64_t>(1, (p - 1) / 35);
    const auto size = static_cast<std::size_t>(rng.uniform(1, max_size));
    const auto holes = static_cast<std::size_t>(rng.uniform(0, 2));
    const ResidueSet x = detail::ap_subset(rng, p, size + holes, size);
    detail::tally(res, check_freiman(x), "p=" + std::to_string(p) + " X=" + to_string(x));
  }
  return res;
}

[[nodiscard]] inline LemmaSuiteResult positive_prop_suite(const LemmaSuiteConfig& cfg) {
  LemmaSuiteResult res{"positive_prop_ap", 0, 0, 0, {}};
  for (std::size_t t = 0; t < cfg.positive_prop_trials; ++t) {
    TrialRng rng(cfg.seed, 4, t);
    const std::uint32_t p = rng.prime_in(103, 199);
    const auto m = static_cast<std::uint64_t>(rng.uniform(1, 4));
    const auto ap_len = static_cast<std::size_t>(rng.uniform(1, 8));
    const auto keep = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(ap_len)));
    const ResidueSet x = detail::ap_subset(rng, p, ap_len, keep);
    detail::tally(res, check_positive_prop_ap(x, m),
                  "p=" + std::to_string(p) + " m=" + std::to_string(m) + " X=" + to_string(x));
  }
  return res;
}

/// Random (delta, k, L, X) meeting the hypotheses; every eighth trial uses delta = 1/132.
[[nodiscard]] inline LemmaSuiteResult close_pair_suite(const LemmaSuiteConfig& cfg) {
  LemmaSuiteResult res{"close_pair", 0, 0, 0, {}};
  for (std::size_t t = 0; t < cfg.close_pair_trials; ++t) {
    TrialRng rng(cfg.seed, 6, t);
    ClosePairInput in;
    std::int64_t num = 1, den = 132;
    if (t % 8 != 0) {
      den = rng.uniform(2, 8);
      num = rng.uniform(1, den - 1);
    }
    in.delta = Rational(num, den);
    const Rational inv = Rational(1) / in.delta;
    const std::int64_t floor_inv = inv.num() / inv.den();
    in.length = rng.uniform(floor_inv + 1, std::max<std::int64_t>(floor_inv + 1, 600));
    // L > 1/delta, so kmax >= 1; the cap keeps delta^-k inside 64 bits for delta near 1
    std::uint32_t kmax = 0;
    for (Rational pw = inv; pw < Rational(in.length) && kmax < 6; pw = pw * inv) ++kmax;
    in.k = static_cast<std::uint32_t>(rng.uniform(1, kmax));
    in.offset = rng.uniform(-50, 50);
    // |X| >= delta L
    const std::int64_t min_size = (num * in.length + den - 1) / den;
    const auto size = static_cast<std::size_t>(rng.uniform(min_size, in.length));
    std::vector<std::int64_t> pool;
    for (std::int64_t v = in.offset + 1; v <= in.offset + in.length; ++v) pool.push_back(v);
    in.values = rng.sample(std::move(pool), size);
    std::sort(in.values.begin(), in.values.end());
    detail::tally(res, check_close_pair(in),
                  "delta=" + in.delta.str() + " k=" + std::to_string(in.k) + " L=" + std::to_string(in.length) +
                      " r=" + std::to_string(in.offset));
  }
  return res;
}

/// Pairs of same-difference progressions at p attaining |X+Y| = min(p, |X|+|Y|-1).
struct EqualityCensus {
  std::uint32_t p = 0;
  std::size_t pairs = 0;
  std::size_t equality = 0;
};

[[nodiscard]] inline EqualityCensus cauchy_davenport_equality_census(std::uint32_t p) {
  EqualityCensus c{p, 0, 0};
  for (std::uint32_t a = 1; a <= p; ++a)
    for (std::uint32_t b = 1; b <= p; ++b)
      for (Residue d = 1; d < p; ++d) {
        std::vector<std::int64_t> xs, ys;
        for (std::uint32_t i = 0; i < a; ++i) xs.push_back(std::int64_t{d} * i);
        for (std::uint32_t i = 0; i < b; ++i) ys.push_back(std::int64_t{d} * i);
        const auto v = check_cauchy_davenport(ResidueSet::of(p, xs), ResidueSet::of(p, ys));
        ++c.pairs;
        if (v.quantity("|X+Y|") == v.quantity("bound")) ++c.equality;
      }
  return c;
}

[[nodiscard]] inline std::vector<LemmaSuiteResult> run_lemma_suites(const LemmaSuiteConfig& cfg) {
  return {bourgain_suite(cfg),
          freiman_suite(cfg, 103, 199),
          freiman_suite(cfg, 211, 409),
          positive_prop_suite(cfg),
          cauchy_davenport_suite(cfg),
          close_pair_suite(cfg)};
}

[[nodiscard]] inline ordered_json to_json(const LemmaSuiteResult& r) {
  ordered_json j;
  j["lemma"] = r.name;
  j["trials"] = r.trials;
  j["hypothesis_satisfied"] = r.hypothesis_satisfied;
  j["violations"] = r.violations;
  if (!r.first_witness.empty()) j["witness"] = r.first_witness;
  return j;
}

}  // namespace mdecomp
