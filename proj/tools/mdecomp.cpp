// mdecomp: analyze, construct and survey multiplicative decompositions of intervals.
//
// Exit codes: 0 success, 2 usage, 3 verification failure, 4 resource limit.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdecomp/construct.hpp"
#include "mdecomp/decomp.hpp"
#include "mdecomp/survey.hpp"

using namespace mdecomp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;
constexpr int kExitLimit = 4;

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw InvalidArgument("bad integer in " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& s, std::string_view sep, std::string_view what) {
  const auto pos = s.find(sep, 1);  // skip a leading minus sign
  if (pos == std::string::npos) throw InvalidArgument(std::string(what) + " must look like A" + std::string(sep) + "B");
  return {parse_int(std::string_view(s).substr(0, pos), what), parse_int(std::string_view(s).substr(pos + sep.size()), what)};
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& s, std::string_view what) {
  const auto [lo, hi] = parse_pair(s, "..", what);
  if (lo < 0 || hi < lo || hi > INT32_MAX) throw InvalidArgument(std::string(what) + " range is empty or negative");
  return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)};
}

ResidueSet parse_set(std::uint32_t p, const std::string& s) {
  std::vector<std::int64_t> xs;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = std::min(s.find(',', start), s.size());
    xs.push_back(parse_int(std::string_view(s).substr(start, comma - start), "--set"));
    start = comma + 1;
  }
  return ResidueSet::of(p, xs);
}

ResidueSet target_set(std::uint32_t p, const std::string& interval, const std::string& set) {
  if (interval.empty() == set.empty()) throw InvalidArgument("give exactly one of --interval and --set");
  if (!set.empty()) return parse_set(p, set);
  const auto [a, b] = parse_pair(interval, ":", "--interval");
  return make_interval(interval_from_bounds(p, a, b));
}

// stdout unless a path is given
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw InvalidArgument("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Options {
  std::uint32_t p = 0;
  std::string interval, set, out, format = "jsonl";
  std::string primes = "3..13", lengths = "1..6", coeffs = "-12..12";
  std::size_t limit = SearchLimits{}.max_set_size;
  bool timing = false;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::int64_t L = 0, k1 = 0, k2 = 0;
  int sign = 1;
};

int cmd_analyze(const Options& o) {
  const ResidueSet s = target_set(o.p, o.interval, o.set);
  const SetReport r = analyze_set(s, SearchLimits{o.limit});
  for (const auto& c : r.classes) require_valid(s, c.representative);
  Output out(o.out);
  out.stream() << to_json(r, o.timing).dump(2) << '\n';
  out.finish();
  return 0;
}

int cmd_construct(const std::string& kind, const Options& o) {
  const ConstructionResult c = [&] {
    if (kind == "theorem2") {
      if (o.L < 0 || o.L > INT32_MAX) throw InvalidArgument("L out of range");
      return theorem2_decomposition(o.p, static_cast<std::uint32_t>(o.L));
    }
    if (kind == "theorem3") return theorem3_decomposition(o.p, o.k1, o.k2);
    if (kind == "triple") return special_triple(o.p, o.sign);
    return symmetric_decomposition(target_set(o.p, o.interval, o.set));
  }();
  reverify(c);
  Output out(o.out);
  out.stream() << to_json(c).dump(2) << '\n';
  out.finish();
  return 0;
}

int cmd_survey(const Options& o) {
  SurveyConfig cfg;
  std::tie(cfg.prime_lo, cfg.prime_hi) = parse_range(o.primes, "--primes");
  std::tie(cfg.length_lo, cfg.length_hi) = parse_range(o.lengths, "--lengths");
  cfg.limits.max_set_size = o.limit;
  cfg.workers = o.workers;
  cfg.timing = o.timing;
  Output out(o.out);
  const auto records = run_survey(cfg);
  if (o.format == "csv") {
    write_csv(out.stream(), records, o.timing);
    std::cerr << to_json(summarize(records)).dump() << '\n';
  } else {
    write_jsonl(out.stream(), records, o.timing);
  }
  out.finish();
  return 0;
}

int cmd_rational_verify(const Options& o) {
  RationalVerifyConfig cfg;
  std::tie(cfg.length_lo, cfg.length_hi) = parse_range(o.lengths, "--lengths");
  std::tie(cfg.coef_lo, cfg.coef_hi) = parse_pair(o.coeffs, "..", "--coeffs");
  const auto rep = rational_verify(cfg);
  Output out(o.out);
  out.stream() << to_json(rep).dump(2) << '\n';
  out.finish();
  if (!rep.ok()) {
    std::cerr << "counterexample found: see \"other\" / \"doubling_off_family\"\n";
    return kExitVerification;
  }
  return 0;
}

int cmd_lemmas(const Options& o) {
  LemmaSuiteConfig cfg;
  cfg.seed = o.seed;
  Output out(o.out);
  std::size_t violations = 0;
  for (const auto& r : run_lemma_suites(cfg)) {
    violations += r.violations;
    out.stream() << to_json(r).dump() << '\n';
  }
  const auto census = cauchy_davenport_equality_census(11);
  out.stream() << ordered_json{{"census", "cauchy_davenport_equality"},
                               {"p", census.p},
                               {"pairs", census.pairs},
                               {"equality", census.equality}}
                      .dump()
               << '\n';
  out.finish();
  return violations == 0 ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplicative decompositions of arithmetic progressions over F_p and Q"};
  app.require_subcommand(1);
  Options o;

  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "prime modulus")->required();
    sub->add_option("--interval", o.interval, "a:b, the residues a..b mod p");
    sub->add_option("--set", o.set, "comma-separated residues");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default stdout)"); };

  auto* analyze = app.add_subcommand("analyze", "all decomposition classes of one set");
  add_target(analyze);
  analyze->add_option("--limit", o.limit, "largest |S \\ {0}| searched");
  analyze->add_flag("--timing", o.timing, "include elapsed_micros");
  add_out(analyze);

  auto* construct = app.add_subcommand("construct", "explicit decompositions");
  construct->require_subcommand(1);
  auto* t2 = construct->add_subcommand("theorem2", "{1..L} for p = 1 mod 4");
  t2->add_option("--p", o.p)->required();
  t2->add_option("--L", o.L)->required();
  auto* t3 = construct->add_subcommand("theorem3", "[-k1, k2] with B = {1,2}");
  t3->add_option("--p", o.p)->required();
  t3->add_option("--k1", o.k1)->required();
  t3->add_option("--k2", o.k2)->required();
  auto* triple = construct->add_subcommand("triple", "+-{1/3 - 1, 1/3, 1/3 + 1}");
  triple->add_option("--p", o.p)->required();
  triple->add_option("--sign", o.sign)->check(CLI::IsMember({1, -1}));
  auto* symmetric = construct->add_subcommand("symmetric", "{1,-1} * S for symmetric S");
  add_target(symmetric);
  for (auto* sub : {t2, t3, triple, symmetric}) add_out(sub);

  auto* survey = app.add_subcommand("survey", "every interval over ranges of primes and lengths");
  survey->add_option("--primes", o.primes, "A..B")->capture_default_str();
  survey->add_option("--lengths", o.lengths, "A..B")->capture_default_str();
  survey->add_option("--limit", o.limit)->capture_default_str();
  survey->add_option("--format", o.format)->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  survey->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u))->capture_default_str();
  survey->add_flag("--timing", o.timing, "include elapsed_micros");
  add_out(survey);

  auto* rational = app.add_subcommand("rational-verify", "classify every small integer progression over Q");
  rational->add_option("--lengths", o.lengths, "A..B")->default_str("3..7");
  rational->add_option("--coeffs", o.coeffs, "first term and difference range")->capture_default_str();
  add_out(rational);

  auto* lemmas = app.add_subcommand("lemmas", "seeded randomized checks of the toolbox lemmas");
  lemmas->add_option("--seed", o.seed, "root seed")->required();
  add_out(lemmas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (rational->parsed() && rational->count("--lengths") == 0) o.lengths = "3..7";

  try {
    if (analyze->parsed()) return cmd_analyze(o);
    if (survey->parsed()) return cmd_survey(o);
    if (rational->parsed()) return cmd_rational_verify(o);
    if (lemmas->parsed()) return cmd_lemmas(o);
    for (auto* sub : {t2, t3, triple, symmetric})
      if (sub->parsed()) return cmd_construct(sub->get_name(), o);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const LimitExceeded& e) {
    std::cerr << "limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const ArithmeticOverflow& e) {
    std::cerr << "overflow: " << e.what() << '\n';
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
