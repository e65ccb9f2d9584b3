#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "powres/arith.hpp"
#include "powres/covering.hpp"
#include "powres/criterion.hpp"
#include "powres/prime_scan.hpp"
#include "powres/profile.hpp"

namespace powres::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kMaxTwistOrbit = 100'000;
constexpr std::uint64_t kMaxExhaustiveInstances = 1'000'000;
constexpr std::uint64_t kInlineAssignmentPoints = 4096;

struct Outcome {
  int code = kExitYes;
  json result;
  std::string text;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch) != 0; }),
               item.end());
    parts.push_back(item);
  }
  if (parts.empty()) {
    throw std::invalid_argument("expected a comma-separated list, got '" + text + "'");
  }
  return parts;
}

std::vector<BigInt> parse_set(const std::string& text) {
  std::vector<BigInt> out;
  for (const auto& part : split_commas(text)) {
    out.push_back(parse_integer(part));
  }
  return out;
}

std::vector<std::int64_t> parse_small_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& part : split_commas(text)) {
    const BigInt v = parse_integer(part);
    if (!v.fits_slong_p()) {
      throw std::invalid_argument("value out of range: " + part);
    }
    out.push_back(v.get_si());
  }
  return out;
}

void require_odd_prime(std::int64_t q) { QInput{q, {BigInt(1)}}.validate(); }

std::string str(const BigInt& v) { return v.get_str(); }

json big_list(std::span<const BigInt> values) {
  json out = json::array();
  for (const auto& v : values) {
    out.push_back(str(v));
  }
  return out;
}

json vector_json(const fq::VectorF& v) {
  json out = json::array();
  for (fq::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

json matrix_json(const fq::MatrixF& m) {
  json out = json::array();
  for (fq::Index i = 0; i < m.rows(); ++i) {
    out.push_back(vector_json(m.row(i).transpose()));
  }
  return out;
}

std::string vector_text(const fq::VectorF& v) {
  std::ostringstream os;
  os << "(";
  for (fq::Index i = 0; i < v.size(); ++i) {
    os << (i > 0 ? ", " : "") << v(i);
  }
  os << ")";
  return os.str();
}

std::string matrix_text(const fq::MatrixF& m, const std::string& indent) {
  std::ostringstream os;
  for (fq::Index i = 0; i < m.rows(); ++i) {
    os << indent;
    for (fq::Index j = 0; j < m.cols(); ++j) {
      os << (j > 0 ? " " : "") << m(i, j);
    }
    os << "\n";
  }
  return os.str();
}

json input_json(std::int64_t q, std::span<const BigInt> set) { return json{{"q", q}, {"set", big_list(set)}}; }

json profile_json(const ResidueProfile& profile) {
  json columns = json::array();
  for (std::size_t j = 0; j < profile.qfree_values.size(); ++j) {
    columns.push_back({{"source_index", profile.source_index[j]},
                       {"element", str(profile.source_values[j])},
                       {"qfree", str(profile.qfree_values[j])}});
  }
  return {{"q", profile.q},
          {"support_primes", big_list(profile.support_primes)},
          {"exponents", matrix_json(profile.exponents)},
          {"columns", columns}};
}

std::string profile_text(const ResidueProfile& profile) {
  std::ostringstream os;
  os << "support primes:";
  for (const auto& p : profile.support_primes) {
    os << " " << p.get_str();
  }
  os << "\ncolumns (q-free part <- element):";
  for (std::size_t j = 0; j < profile.qfree_values.size(); ++j) {
    os << " " << profile.qfree_values[j].get_str() << "<-" << profile.source_values[j].get_str();
  }
  os << "\nexponent matrix:\n" << matrix_text(profile.exponents, "  ");
  return os.str();
}

json trivial_json(const TrivialCertificate& t) {
  return {{"index", t.index}, {"element", str(t.element)}, {"root", str(t.root)}};
}

std::string fnv1a64(const std::vector<std::uint16_t>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : values) {
    for (int shift = 0; shift < 16; shift += 8) {
      h ^= (v >> shift) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json covering_json(const CoveringResult& covering, std::size_t planes) {
  std::vector<std::uint64_t> per_plane(planes, 0);
  for (auto h : covering.assignment) {
    ++per_plane[h];
  }
  json out{{"points", covering.assignment.size()}, {"per_hyperplane", per_plane},
           {"fnv1a64", fnv1a64(covering.assignment)}};
  if (covering.assignment.size() <= kInlineAssignmentPoints) {
    out["assignment"] = covering.assignment;
  }
  return out;
}

// ---------------------------------------------------------------- decide

Outcome cmd_decide(const QInput& input) {
  const auto decision = decide(input);
  Outcome o;
  o.result["verdict"] = std::string(to_string(decision.verdict));
  std::ostringstream text;
  text << "verdict: " << to_string(decision.verdict) << "\n";
  if (decision.trivial) {
    const auto& t = *decision.trivial;
    o.result["trivial"] = trivial_json(t);
    text << "element " << t.element.get_str() << " = (" << t.root.get_str() << ")^" << input.q << "\n";
    o.text = text.str();
    return o;
  }
  const auto& profile = *decision.profile;
  o.result["profile"] = profile_json(profile);
  o.result["hyperplanes"] = matrix_json(profile.exponents.transpose());
  text << profile_text(profile);
  const auto k = profile.dimension();
  if (decision.verdict == Verdict::Yes) {
    o.result["covering"] = covering_json(*decision.covering, static_cast<std::size_t>(profile.columns()));
    text << "certificate: every one of the " << decision.covering->assignment.size() << " points of F_" << input.q
         << "^" << k << " lies on an associated hyperplane (assignment fnv1a64 "
         << fnv1a64(decision.covering->assignment) << ")\n";
  } else {
    o.code = kExitNo;
    o.result["witness"] = vector_json(*decision.uncovered);
    text << "certificate: the point " << vector_text(*decision.uncovered) << " of F_" << input.q << "^" << k
         << " lies on no associated hyperplane\n";
  }
  o.text = text.str();
  return o;
}

// ----------------------------------------------------------- certificate

std::string identity_text(const ResidueProfile& profile, const SkalbaCertificate& cert, std::int64_t q) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < cert.exponents.size(); ++j) {
    if (cert.exponents[j] == 0) {
      continue;
    }
    os << (first ? "" : " * ") << profile.qfree_values[j].get_str() << "^" << cert.exponents[j];
    first = false;
  }
  if (first) {
    os << "1";
  }
  os << " = " << cert.product.get_str() << " = " << cert.root.get_str() << "^" << q;
  return os.str();
}

json certificate_json(const ResidueProfile& profile, const SkalbaCertificate& cert) {
  const auto q = profile.q;
  return {{"c", vector_json(cert.c)},
          {"f", vector_json(cert.f)},
          {"f_sum_mod_q", profile.field().reduce(cert.f.sum())},
          {"bases", big_list(profile.qfree_values)},
          {"exponents", cert.exponents},
          {"product", str(cert.product)},
          {"root", str(cert.root)},
          {"identity", identity_text(profile, cert, q)},
          {"verified", verify_certificate(profile, cert)}};
}

Outcome cmd_certificate(const QInput& input, const std::string& c_text) {
  const auto decision = decide(input);
  Outcome o;
  o.result["verdict"] = std::string(to_string(decision.verdict));
  std::ostringstream text;
  text << "verdict: " << to_string(decision.verdict) << "\n";
  if (decision.trivial) {
    const auto& t = *decision.trivial;
    o.result["trivial"] = trivial_json(t);
    o.result["identity"] = str(t.element) + " = " + str(t.root) + "^" + std::to_string(input.q);
    text << "trivial certificate: " << t.element.get_str() << " = " << t.root.get_str() << "^" << input.q << "\n";
    o.text = text.str();
    return o;
  }
  const auto& profile = *decision.profile;
  o.result["profile"] = profile_json(profile);
  const auto l = profile.columns();
  fq::VectorF c = fq::VectorF::Ones(l);
  if (!c_text.empty()) {
    const auto values = parse_small_list(c_text);
    if (static_cast<fq::Index>(values.size()) != l) {
      throw std::invalid_argument("--c needs " + std::to_string(l) + " entries (one per distinct q-free value)");
    }
    c = Eigen::Map<const fq::VectorF>(values.data(), l);
  }

  auto solved = skalba_solve(profile, c);
  if (decision.verdict == Verdict::Yes) {
    if (!solved || !verify_certificate(profile, *solved)) {
      throw InvariantViolation("covering family without a valid Skalba certificate");
    }
    o.result["certificate"] = certificate_json(profile, *solved);
    text << "c = " << vector_text(solved->c) << "\nf = " << vector_text(solved->f) << " (sum = "
         << profile.field().reduce(solved->f.sum()) << " mod " << input.q << ")\nidentity: "
         << identity_text(profile, *solved, input.q) << "\n";
  } else {
    o.code = kExitNo;
    const auto& d = *decision.uncovered;
    const auto failing = counterexample_c(profile, d);
    const auto row = fq::left_multiply(d, twisted_matrix(profile, failing), profile.field());
    o.result["witness"] = vector_json(d);
    o.result["failing_c"] = vector_json(failing);
    o.result["twisted_matrix"] = matrix_json(twisted_matrix(profile, failing));
    o.result["row"] = vector_json(row);
    text << "uncovered point d = " << vector_text(d) << "\nfailing c = " << vector_text(failing)
         << "\nd^T M(c) = " << vector_text(row) << "\n";
    if (!c_text.empty()) {
      json requested{{"c", vector_json(c)}, {"condition_holds", solved.has_value()}};
      if (solved) {
        requested["certificate"] = certificate_json(profile, *solved);
      }
      o.result["requested"] = requested;
    }
  }
  o.text = text.str();
  return o;
}

// ------------------------------------------------------------ scan, census

json report_json(const PrimeCheckReport& report) {
  json elements = json::array();
  for (const auto& e : report.per_element) {
    elements.push_back({{"element", str(e.element)}, {"is_residue", e.is_residue}});
  }
  return {{"p", report.p}, {"splits", report.splits}, {"per_element", elements}, {"outcome", report.outcome}};
}

Outcome cmd_scan(const QInput& input, std::uint64_t bound) {
  input.validate();
  Outcome o;
  o.result["bound"] = bound;
  const auto prime = find_counterexample_prime(input.elements, input.q, bound);
  std::ostringstream text;
  if (prime) {
    o.code = kExitNo;
    const auto report = has_qth_power_mod_p(input.elements, *prime, input.q);
    o.result["prime"] = *prime;
    o.result["report"] = report_json(report);
    text << "counterexample prime: " << *prime << "\n";
    for (const auto& e : report.per_element) {
      text << "  x^" << input.q << " = " << e.element.get_str() << (e.is_residue ? " is" : " is not")
           << " solvable mod " << *prime << "\n";
    }
  } else {
    o.result["prime"] = nullptr;
    text << "none <= " << bound << "\n";
  }
  o.text = text.str();
  return o;
}

json ratio_json(const Ratio& r) {
  return {{"numerator", r.numerator}, {"denominator", r.denominator}, {"value", r.value()}};
}

Outcome cmd_census(const QInput& input, std::uint64_t bound) {
  const auto report = census(input.elements, input.q, bound);
  Outcome o;
  o.result = {{"bound", report.bound},
              {"primes_checked", report.primes_checked},
              {"excluded_primes", report.excluded_primes},
              {"split_primes", report.split_primes},
              {"failing_count", report.failing_count},
              {"failing_primes", report.failing_primes},
              {"uncovered_points", report.uncovered_points},
              {"dimension", report.dimension},
              {"empirical_density", ratio_json(report.empirical)},
              {"predicted_density", ratio_json(report.predicted)},
              {"prediction_basis", "U / (q^k (q-1)), U = uncovered points of F_q^k; derived, "
                                   "assumes equidistributed residue-index vectors"}};
  std::ostringstream text;
  text << std::setprecision(6) << "primes checked: " << report.primes_checked << " (excluded " << report.excluded_primes
       << ", split " << report.split_primes << ")\nfailing primes: " << report.failing_count
       << "\nempirical density: " << report.empirical.value() << "\npredicted density (derived): "
       << report.predicted.numerator << "/" << report.predicted.denominator << " = " << report.predicted.value()
       << "\n";
  o.text = text.str();
  return o;
}

// ------------------------------------------------------------ synthesize

std::vector<BigInt> default_primes(std::int64_t q, fq::Index k) {
  std::vector<BigInt> out;
  for (BigInt p = 3; static_cast<fq::Index>(out.size()) < k; ++p) {
    if (p != q && is_probable_prime(p)) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<BigInt> realize(const std::vector<Hyperplane>& normals, const std::vector<BigInt>& primes) {
  std::vector<BigInt> set;
  for (const auto& h : normals) {
    BigInt value = 1;
    for (fq::Index i = 0; i < h.normal.size(); ++i) {
      BigInt pe;
      mpz_pow_ui(pe.get_mpz_t(), primes[static_cast<std::size_t>(i)].get_mpz_t(),
                 static_cast<unsigned long>(h.normal(i)));
      value *= pe;
    }
    set.push_back(value);
  }
  return set;
}

Outcome cmd_synthesize(std::int64_t q, fq::Index k, const std::string& primes_text, const std::string& twists,
                       std::uint64_t samples, std::uint64_t seed) {
  require_odd_prime(q);
  if (k < 2) {
    throw std::invalid_argument("--k must be at least 2");
  }
  std::vector<BigInt> primes;
  if (primes_text.empty()) {
    primes = default_primes(q, k);
  } else {
    primes = parse_set(primes_text);
    std::set<BigInt> distinct(primes.begin(), primes.end());
    if (distinct.size() != primes.size()) {
      throw std::invalid_argument("--primes must be distinct");
    }
    for (const auto& p : primes) {
      if (!is_probable_prime(p)) {
        throw std::invalid_argument("--primes: " + p.get_str() + " is not prime");
      }
    }
    if (static_cast<fq::Index>(primes.size()) < k) {
      throw std::invalid_argument("--primes needs at least k = " + std::to_string(k) + " primes");
    }
  }

  const auto normals = synthesize_covering(k, q);
  const QInput base{q, realize(normals, primes)};
  const auto verdict = decide(base).verdict;
  if (verdict == Verdict::No) {
    throw InvariantViolation("synthesized pencil set was not decided Yes");
  }

  Outcome o;
  json normals_json = json::array();
  for (const auto& h : normals) {
    normals_json.push_back(vector_json(h.normal));
  }
  o.result = {{"normals", normals_json},
              {"primes", big_list(primes)},
              {"set", big_list(base.elements)},
              {"verdict", std::string(to_string(verdict))}};
  std::ostringstream text;
  text << "pencil covering of F_" << q << "^" << k << ":\n";
  for (const auto& h : normals) {
    text << "  " << vector_text(h.normal) << "\n";
  }
  text << "set:";
  for (const auto& b : base.elements) {
    text << " " << b.get_str();
  }
  text << "\nverdict: " << to_string(verdict) << "\n";

  const auto l = static_cast<fq::Index>(base.elements.size());
  std::vector<fq::VectorF> orbit;
  if (twists == "all") {
    std::uint64_t size = 1;
    for (fq::Index j = 0; j < l; ++j) {
      size *= static_cast<std::uint64_t>(q - 1);
      if (size > kMaxTwistOrbit) {
        throw GuardError("twist orbit (q-1)^l exceeds " + std::to_string(kMaxTwistOrbit) + "; use --twists sample");
      }
    }
    fq::VectorF a = fq::VectorF::Ones(l);
    for (std::uint64_t n = 0; n < size; ++n) {
      orbit.push_back(a);
      for (fq::Index j = l - 1; j >= 0; --j) {
        if (a(j) < q - 1) {
          ++a(j);
          break;
        }
        a(j) = 1;
      }
    }
  } else if (twists == "sample") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(1, q - 1);
    for (std::uint64_t n = 0; n < samples; ++n) {
      fq::VectorF a(l);
      for (fq::Index j = 0; j < l; ++j) {
        a(j) = pick(rng);
      }
      orbit.push_back(a);
    }
  } else if (twists != "none") {
    throw std::invalid_argument("--twists must be none, all or sample");
  }

  if (!orbit.empty()) {
    json listed = json::array();
    std::uint64_t yes = 0;
    for (const auto& a : orbit) {
      const auto twisted = exponent_twist(base, a);
      const auto v = decide(twisted).verdict;
      yes += v == Verdict::No ? 0 : 1;
      listed.push_back({{"a", vector_json(a)}, {"set", big_list(twisted.elements)}, {"verdict", to_string(v)}});
    }
    o.result["twists"] = listed;
    o.result["twist_count"] = orbit.size();
    o.result["twists_yes"] = yes;
    text << "twists: " << orbit.size() << " sets, " << yes << " decided Yes\n";
    if (yes != orbit.size()) {
      o.code = kExitNo;
    }
  }
  o.text = text.str();
  return o;
}

// ---------------------------------------------------------- oracle-check

struct OracleTally {
  std::uint64_t instances = 0;
  std::uint64_t covering = 0;
  std::uint64_t non_covering = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t witness_failures = 0;
  json first_disagreement = nullptr;
};

void check_instance(const fq::MatrixF& nu, std::int64_t q, const std::vector<BigInt>& primes, OracleTally& tally) {
  const std::vector<BigInt> used(primes.begin(), primes.begin() + nu.rows());
  const auto profile = profile_from_exponents(q, nu, used);
  const auto planes = hyperplanes_of(profile);
  const auto result = covers(planes, profile.dimension(), q);
  const auto failure = skalba_first_failure(profile);
  ++tally.instances;
  (result.covered ? tally.covering : tally.non_covering) += 1;
  if (result.covered == failure.has_value()) {
    if (tally.disagreements++ == 0) {
      tally.first_disagreement = {{"exponents", matrix_json(nu)}, {"covered", result.covered}};
    }
    return;
  }
  bool witness_ok = true;
  if (result.covered) {
    const auto cert = skalba_solve(profile, fq::VectorF::Ones(nu.cols()));
    witness_ok = cert && verify_certificate(profile, *cert);
  } else {
    const auto c = counterexample_c(profile, *result.witness);
    witness_ok = !skalba_condition_holds(profile, c);
  }
  tally.witness_failures += witness_ok ? 0 : 1;
}

// Calls visit on every k x l matrix over F_q whose columns are all nonzero.
void for_each_exponent_matrix(fq::Index k, fq::Index l, std::int64_t q,
                              const std::function<void(const fq::MatrixF&)>& visit) {
  const std::uint64_t nonzero = point_count(k, q) - 1;
  std::vector<std::uint64_t> ranks(static_cast<std::size_t>(l), 1);
  fq::MatrixF nu(k, l);
  while (true) {
    for (fq::Index j = 0; j < l; ++j) {
      nu.col(j) = point_from_rank(ranks[static_cast<std::size_t>(j)], k, q);
    }
    visit(nu);
    fq::Index j = l - 1;
    while (j >= 0 && ranks[static_cast<std::size_t>(j)] == nonzero) {
      ranks[static_cast<std::size_t>(j)] = 1;
      --j;
    }
    if (j < 0) {
      return;
    }
    ++ranks[static_cast<std::size_t>(j)];
  }
}

Outcome cmd_oracle_check(std::int64_t q, fq::Index k_max, fq::Index l_max, const std::string& mode,
                         std::uint64_t seed, std::uint64_t trials) {
  require_odd_prime(q);
  if (k_max < 1 || l_max < 1) {
    throw std::invalid_argument("--k-max and --l-max must be at least 1");
  }
  std::vector<BigInt> primes;
  for (BigInt p = 2; static_cast<fq::Index>(primes.size()) < k_max; ++p) {
    if (p != q && is_probable_prime(p)) {
      primes.push_back(p);
    }
  }

  OracleTally tally;
  if (mode == "exhaustive") {
    const std::uint64_t choices = point_count(k_max, q, kMaxExhaustiveInstances) - 1;
    std::uint64_t total = 1;
    for (fq::Index l = 0; l < l_max; ++l) {
      total *= choices;
      if (total > kMaxExhaustiveInstances) {
        throw GuardError("exhaustive oracle check would visit more than " + std::to_string(kMaxExhaustiveInstances) +
                         " matrices; use --mode random");
      }
    }
    for (fq::Index k = 1; k <= k_max; ++k) {
      for (fq::Index l = 1; l <= l_max; ++l) {
        for_each_exponent_matrix(k, l, q, [&](const fq::MatrixF& nu) { check_instance(nu, q, primes, tally); });
      }
    }
  } else if (mode == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<fq::Index> pick_k(1, k_max);
    std::uniform_int_distribution<fq::Index> pick_l(1, l_max);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const auto k = pick_k(rng);
      const auto l = pick_l(rng);
      const std::uint64_t nonzero = point_count(k, q) - 1;
      std::uniform_int_distribution<std::uint64_t> pick_col(1, nonzero);
      fq::MatrixF nu(k, l);
      for (fq::Index j = 0; j < l; ++j) {
        nu.col(j) = point_from_rank(pick_col(rng), k, q);
      }
      check_instance(nu, q, primes, tally);
    }
  } else {
    throw std::invalid_argument("--mode must be exhaustive or random");
  }

  Outcome o;
  o.result = {{"instances", tally.instances},
              {"covering", tally.covering},
              {"non_covering", tally.non_covering},
              {"disagreements", tally.disagreements},
              {"witness_failures", tally.witness_failures},
              {"first_disagreement", tally.first_disagreement}};
  std::ostringstream text;
  text << "instances: " << tally.instances << " (covering " << tally.covering << ", non-covering "
       << tally.non_covering << ")\ndisagreements: " << tally.disagreements
       << "\nwitness failures: " << tally.witness_failures << "\n";
  o.text = text.str();
  o.code = tally.disagreements == 0 && tally.witness_failures == 0 ? kExitYes : kExitNo;
  return o;
}

void emit(std::ostream& out, bool as_json, const std::string& command, const json& input, const Outcome& outcome,
          double ms) {
  if (as_json) {
    json envelope{{"schema_version", kSchemaVersion},
                  {"command", command},
                  {"input", input},
                  {"result", outcome.result},
                  {"timing_ms", ms}};
    out << envelope.dump() << "\n";
  } else {
    out << outcome.text;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide whether a set of integers contains a q-th power modulo almost every prime.", "powres-cli"};
  app.require_subcommand(1);

  std::int64_t q = 0;
  std::string set_text;
  bool as_json = false;
  std::string c_text;
  std::uint64_t bound = 0;
  fq::Index k = 2;
  std::string primes_text;
  std::string twists = "none";
  std::uint64_t samples = 16;
  std::uint64_t seed = 42;
  fq::Index k_max = 2;
  fq::Index l_max = 3;
  std::string mode = "exhaustive";
  std::uint64_t trials = 200;

  auto add_common = [&](CLI::App* sub, bool with_set) {
    sub->add_option("--q", q, "odd prime exponent")->required();
    if (with_set) {
      sub->add_option("--set", set_text, "comma-separated nonzero integers, e.g. 2,3,6,12")->required();
    }
    sub->add_flag("--json", as_json, "emit the JSON envelope");
  };

  auto* decide_cmd = app.add_subcommand("decide", "decide the almost-all-primes property");
  add_common(decide_cmd, true);

  auto* cert_cmd = app.add_subcommand("certificate", "emit an integer certificate or a failing twist");
  add_common(cert_cmd, true);
  cert_cmd->add_option("--c", c_text, "twist vector, comma-separated entries in [1, q-1] (default all ones)");

  auto* scan_cmd = app.add_subcommand("scan", "search for a prime modulo which no element is a q-th power");
  add_common(scan_cmd, true);
  scan_cmd->add_option("--bound", bound, "largest prime to examine")->required();

  auto* census_cmd = app.add_subcommand("census", "density of failing primes versus prediction");
  add_common(census_cmd, true);
  census_cmd->add_option("--bound", bound, "largest prime to examine")->required();

  auto* synth_cmd = app.add_subcommand("synthesize", "build a pencil covering and an integer set realizing it");
  add_common(synth_cmd, false);
  synth_cmd->add_option("--k", k, "ambient dimension (>= 2)")->required();
  synth_cmd->add_option("--primes", primes_text, "comma-separated distinct primes (default: first k odd primes != q)");
  synth_cmd->add_option("--twists", twists, "none | all | sample");
  synth_cmd->add_option("--samples", samples, "number of sampled twists");
  synth_cmd->add_option("--seed", seed, "seed for sampled twists");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "compare the covering test with the brute-force oracle");
  add_common(oracle_cmd, false);
  oracle_cmd->add_option("--k-max", k_max, "largest dimension");
  oracle_cmd->add_option("--l-max", l_max, "largest number of columns");
  oracle_cmd->add_option("--mode", mode, "exhaustive | random");
  oracle_cmd->add_option("--seed", seed, "seed for random mode");
  oracle_cmd->add_option("--trials", trials, "instances in random mode");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome outcome;
    json input;
    if (sub == synth_cmd) {
      input = {{"q", q}, {"k", k}, {"primes", primes_text}, {"twists", twists}};
      outcome = cmd_synthesize(q, k, primes_text, twists, samples, seed);
    } else if (sub == oracle_cmd) {
      input = {{"q", q}, {"k_max", k_max}, {"l_max", l_max}, {"mode", mode}, {"seed", seed}, {"trials", trials}};
      outcome = cmd_oracle_check(q, k_max, l_max, mode, seed, trials);
    } else {
      QInput qinput{q, parse_set(set_text)};
      qinput.validate();
      input = input_json(q, qinput.elements);
      if (sub == decide_cmd) {
        outcome = cmd_decide(qinput);
      } else if (sub == cert_cmd) {
        if (!c_text.empty()) {
          input["c"] = c_text;
        }
        outcome = cmd_certificate(qinput, c_text);
      } else if (sub == scan_cmd) {
        input["bound"] = bound;
        if (bound > kMaxScanBound) {
          throw GuardError("--bound must not exceed " + std::to_string(kMaxScanBound));
        }
        outcome = cmd_scan(qinput, bound);
      } else {
        input["bound"] = bound;
        if (bound > kMaxScanBound) {
          throw GuardError("--bound must not exceed " + std::to_string(kMaxScanBound));
        }
        outcome = cmd_census(qinput, bound);
      }
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    emit(out, as_json, command, input, outcome, ms);
    return outcome.code;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace powres::cli
