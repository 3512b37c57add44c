#include "ccsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccsp/errors.hpp"
#include "ccsp/rng.hpp"

namespace ccsp {

// ---------------------------------------------------------------------------
// Assignment / PartialAssignment

Assignment Assignment::from_mask(int n, std::uint64_t mask) {
  Assignment a(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) a[static_cast<std::size_t>(v)] = (mask >> v) & 1U;
  return a;
}

Assignment Assignment::from_string(const std::string& s) {
  Assignment a(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] == '0' || s[i] == '1', ErrorCode::kInvalidArgument,
            "assignment string must contain only 0 and 1");
    a[i] = static_cast<std::uint8_t>(s[i] - '0');
  }
  return a;
}

std::uint64_t Assignment::to_mask() const {
  require(bits_.size() <= 64, ErrorCode::kInvalidArgument, "assignment wider than 64 bits");
  std::uint64_t m = 0;
  for (std::size_t v = 0; v < bits_.size(); ++v)
    if (bits_[v]) m |= std::uint64_t{1} << v;
  return m;
}

Assignment Assignment::complement() const {
  Assignment out(*this);
  for (auto& b : out.bits_) b ^= 1U;
  return out;
}

std::string Assignment::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
  return s;
}

void PartialAssignment::fix(std::size_t v, int bit) {
  require(bit == 0 || bit == 1, ErrorCode::kInvalidArgument, "fixed value must be 0 or 1");
  values_[v] = static_cast<std::uint8_t>(bit);
}

std::vector<int> PartialAssignment::unfixed() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < values_.size(); ++v)
    if (values_[v] == kUnfixed) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> PartialAssignment::fixed() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < values_.size(); ++v)
    if (values_[v] != kUnfixed) out.push_back(static_cast<int>(v));
  return out;
}

VarSet PartialAssignment::unfixed_set() const {
  VarSet s = 0;
  for (std::size_t v = 0; v < values_.size(); ++v)
    if (values_[v] == kUnfixed) s |= singleton(static_cast<int>(v));
  return s;
}

bool PartialAssignment::total() const {
  return std::none_of(values_.begin(), values_.end(), [](auto x) { return x == kUnfixed; });
}

Assignment PartialAssignment::to_assignment() const {
  require(total(), ErrorCode::kContract, "partial assignment still has unfixed variables");
  return Assignment(values_);
}

std::string PartialAssignment::to_string() const {
  std::string s(values_.size(), '*');
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != kUnfixed) s[i] = values_[i] ? '1' : '0';
  return s;
}

// ---------------------------------------------------------------------------
// Nae3Instance

Nae3Instance::Nae3Instance(int n) : n_(n) {
  require(n >= 3, ErrorCode::kInvalidArgument, "an NAE-3-SAT instance needs n >= 3");
  slots_.assign(binomial(n, 3), 0);
}

namespace {

struct SortedTriple {
  std::array<int, 3> vars;
  std::array<int, 3> perm;  // perm[j] = original position of sorted member j
};

SortedTriple sort_triple(std::array<int, 3> t) {
  SortedTriple s{t, {0, 1, 2}};
  std::sort(s.perm.begin(), s.perm.end(), [&](int x, int y) { return t[x] < t[y]; });
  for (int j = 0; j < 3; ++j) s.vars[j] = t[s.perm[j]];
  return s;
}

}  // namespace

bool Nae3Instance::has(int u, int v, int w) const {
  const auto s = sort_triple({u, v, w});
  if (s.vars[0] < 0 || s.vars[2] >= n_ || s.vars[0] == s.vars[1] || s.vars[1] == s.vars[2])
    return false;
  return has(triple_rank(s.vars[0], s.vars[1], s.vars[2]));
}

Polarity Nae3Instance::polarity(int u, int v, int w, int member) const {
  const auto s = sort_triple({u, v, w});
  const auto rank = triple_rank(s.vars[0], s.vars[1], s.vars[2]);
  require(has(u, v, w), ErrorCode::kMissingConstraint, "no constraint on this triple");
  const std::array<int, 3> orig{u, v, w};
  for (int j = 0; j < 3; ++j)
    if (s.vars[j] == orig[static_cast<std::size_t>(member)])
      return static_cast<Polarity>((neg_mask(rank) >> j) & 1U);
  fail(ErrorCode::kInvalidArgument, "member index out of range");
}

void Nae3Instance::set_clause_sorted(int a, int b, int c, std::uint8_t neg_mask) {
  require(0 <= a && a < b && b < c && c < n_, ErrorCode::kInvalidArgument,
          "clause needs three distinct in-range variables");
  const auto rank = triple_rank(a, b, c);
  if (!(slots_[rank] & kPresent)) ++present_;
  slots_[rank] = static_cast<std::uint8_t>(kPresent | (neg_mask & 7U));
}

void Nae3Instance::set_clause(const NaeClause& clause) {
  const auto s = sort_triple(clause.vars);
  std::uint8_t mask = 0;
  for (int j = 0; j < 3; ++j)
    if (clause.pol[static_cast<std::size_t>(s.perm[j])] == Polarity::kNegative)
      mask |= static_cast<std::uint8_t>(1U << j);
  set_clause_sorted(s.vars[0], s.vars[1], s.vars[2], mask);
}

void Nae3Instance::remove(std::uint64_t rank) {
  if (slots_[rank] & kPresent) --present_;
  slots_[rank] = 0;
}

Nae3Instance Nae3Instance::complemented() const {
  Nae3Instance out(*this);
  for (auto& s : out.slots_)
    if (s & kPresent) s ^= 7U;
  return out;
}

// ---------------------------------------------------------------------------
// KcspInstance

KcspInstance::KcspInstance(int n, int k) : n_(n), k_(k) {
  require(k >= 2 && k <= n, ErrorCode::kInvalidArgument, "k-CSP needs 2 <= k <= n");
  require(k <= 16, ErrorCode::kSize, "arity above 16 is not supported");
  const std::uint64_t subsets = binomial(n, k);
  require(subsets < (std::uint64_t{1} << 40) >> k, ErrorCode::kSize, "k-CSP table too large");
  present_.assign(subsets, 0);
  bits_.assign(subsets << k, 0);
}

void KcspInstance::set_table(const std::vector<int>& sorted_vars,
                             const std::vector<std::uint8_t>& table) {
  require(static_cast<int>(sorted_vars.size()) == k_, ErrorCode::kInvalidArgument,
          "subset size differs from the arity");
  for (std::size_t j = 0; j < sorted_vars.size(); ++j) {
    require(sorted_vars[j] >= 0 && sorted_vars[j] < n_, ErrorCode::kInvalidArgument,
            "variable out of range");
    require(j == 0 || sorted_vars[j - 1] < sorted_vars[j], ErrorCode::kInvalidArgument,
            "subset must be strictly ascending");
  }
  require(table.size() == (std::size_t{1} << k_), ErrorCode::kInvalidArgument,
          "truth table must have 2^k entries");
  require(std::any_of(table.begin(), table.end(), [](auto b) { return b == 0; }),
          ErrorCode::kInvalidArgument, "every constraint must reject at least one assignment");
  const auto rank = colex_rank(sorted_vars);
  if (!present_[rank]) ++present_count_;
  present_[rank] = 1;
  for (std::size_t j = 0; j < table.size(); ++j) bits_[(rank << k_) + j] = table[j] ? 1 : 0;
}

std::string KcspInstance::table_string(std::uint64_t rank) const {
  std::string s(std::size_t{1} << k_, '0');
  for (std::size_t j = 0; j < s.size(); ++j)
    if (bits_[(rank << k_) + j]) s[j] = '1';
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

bool eval_nae(const Nae3Instance& inst, std::array<int, 3> triple, std::array<int, 3> bits) {
  const auto s = sort_triple(triple);
  require(s.vars[0] >= 0 && s.vars[2] < inst.n() && s.vars[0] != s.vars[1] &&
              s.vars[1] != s.vars[2],
          ErrorCode::kMissingConstraint, "not a valid variable triple");
  const auto rank = Nae3Instance::triple_rank(s.vars[0], s.vars[1], s.vars[2]);
  require(inst.has(rank), ErrorCode::kMissingConstraint, "no constraint on this triple");
  return !inst.violated(rank, bits[static_cast<std::size_t>(s.perm[0])],
                        bits[static_cast<std::size_t>(s.perm[1])],
                        bits[static_cast<std::size_t>(s.perm[2])]);
}

std::uint64_t count_violated(const Nae3Instance& inst, const Assignment& a) {
  require(a.size() == static_cast<std::size_t>(inst.n()), ErrorCode::kInvalidArgument,
          "assignment length differs from the variable count");
  std::uint64_t count = 0;
  inst.for_each_constraint([&](int x, int y, int z, std::uint64_t rank) {
    if (inst.violated(rank, a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)],
                      a[static_cast<std::size_t>(z)]))
      ++count;
  });
  return count;
}

double val_assignment(const Nae3Instance& inst, const Assignment& a) {
  const auto count = count_violated(inst, a);
  if (inst.num_constraints() == 0) return 0.0;
  return static_cast<double>(count) / static_cast<double>(inst.num_constraints());
}

std::uint64_t count_violated(const KcspInstance& inst, const Assignment& a) {
  require(a.size() == static_cast<std::size_t>(inst.n()), ErrorCode::kInvalidArgument,
          "assignment length differs from the variable count");
  std::uint64_t count = 0;
  for_each_lex_subset(inst.n(), inst.k(), [&](const std::vector<int>& vars) {
    const auto rank = colex_rank(vars);
    if (!inst.has(rank)) return;
    std::uint32_t idx = 0;
    for (int v : vars) idx = (idx << 1) | a[static_cast<std::size_t>(v)];
    if (!inst.satisfied(rank, idx)) ++count;
  });
  return count;
}

double val_kcsp(const KcspInstance& inst, const Assignment& a) {
  const auto count = count_violated(inst, a);
  if (inst.num_constraints() == 0) return 0.0;
  return static_cast<double>(count) / static_cast<double>(inst.num_constraints());
}

// ---------------------------------------------------------------------------
// Generators

Nae3Instance gen_random_nae3(int n, std::uint64_t seed) {
  Nae3Instance inst(n);
  Rng rng(seed);
  for (int c = 2; c < n; ++c)
    for (int b = 1; b < c; ++b)
      for (int a = 0; a < b; ++a)
        inst.set_clause_sorted(a, b, c, static_cast<std::uint8_t>(rng.below(8)));
  return inst;
}

PlantedInstance gen_planted_nae3(int n, double corruption, std::uint64_t seed) {
  require(corruption >= 0.0 && corruption <= 1.0, ErrorCode::kInvalidArgument,
          "corruption fraction must lie in [0, 1]");
  Nae3Instance inst(n);
  Rng rng(seed);
  Assignment planted(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) planted[static_cast<std::size_t>(v)] = rng.below(2) ? 1 : 0;
  std::uint64_t violated = 0;
  for (int c = 2; c < n; ++c)
    for (int b = 1; b < c; ++b)
      for (int a = 0; a < b; ++a) {
        // Negation masks violated by the planted bits are x and x^7.
        const auto x = static_cast<std::uint8_t>(planted[static_cast<std::size_t>(a)] |
                                                 (planted[static_cast<std::size_t>(b)] << 1) |
                                                 (planted[static_cast<std::size_t>(c)] << 2));
        std::uint8_t mask;
        if (rng.bernoulli(corruption)) {
          mask = rng.below(2) ? static_cast<std::uint8_t>(x ^ 7U) : x;
          ++violated;
        } else {
          std::uint8_t sat[6];
          int k = 0;
          for (std::uint8_t m = 0; m < 8; ++m)
            if (m != x && m != (x ^ 7U)) sat[k++] = m;
          mask = sat[rng.below(6)];
        }
        inst.set_clause_sorted(a, b, c, mask);
      }
  return {std::move(inst), std::move(planted), violated};
}

Nae3Instance densify_reduction(int n0, const std::vector<NaeClause>& clauses, double eps,
                               int max_total_n) {
  require(eps > 0.0 && eps < 1.0 / 1000.0, ErrorCode::kInvalidArgument,
          "eps must lie in (0, 1/1000)");
  require(n0 >= 1, ErrorCode::kInvalidArgument, "need at least one original variable");
  const double wanted = std::ceil(3.0 * n0 / eps);
  const int cap = max_total_n - n0;
  require(cap >= 3, ErrorCode::kInvalidArgument,
          "max_total_n leaves room for fewer than three dummy variables");
  const int dummies = wanted < cap ? static_cast<int>(wanted) : cap;
  const int n = n0 + dummies;
  Nae3Instance out(n);
  for (const auto& cl : clauses) {
    for (int v : cl.vars)
      require(v >= 0 && v < n0, ErrorCode::kInvalidArgument, "clause variable out of range");
    const auto s = sort_triple(cl.vars);
    require(s.vars[0] != s.vars[1] && s.vars[1] != s.vars[2], ErrorCode::kInvalidArgument,
            "clause variables must be distinct");
    require(!out.has(Nae3Instance::triple_rank(s.vars[0], s.vars[1], s.vars[2])),
            ErrorCode::kInvalidArgument, "duplicate clause on one triple");
    out.set_clause(cl);
  }
  // Dummies are the highest indices, so each new clause is already sorted and
  // the negated literal is the largest member: (x, y, not z).
  constexpr std::uint8_t kLastNegated = 4;
  for (int z = n0; z < n; ++z)
    for (int y = n0; y < z; ++y) {
      for (int x = n0; x < y; ++x) out.set_clause_sorted(x, y, z, kLastNegated);
      for (int v = 0; v < n0; ++v) out.set_clause_sorted(v, y, z, kLastNegated);
    }
  return out;
}

Nae3Instance induced_instance(const Nae3Instance& inst, const std::vector<int>& w) {
  for (std::size_t j = 0; j < w.size(); ++j)
    require(w[j] >= 0 && w[j] < inst.n() && (j == 0 || w[j - 1] < w[j]),
            ErrorCode::kInvalidArgument, "subset must be ascending and in range");
  const int m = static_cast<int>(w.size());
  Nae3Instance out(m);
  for (int c = 2; c < m; ++c)
    for (int b = 1; b < c; ++b)
      for (int a = 0; a < b; ++a) {
        const auto rank = Nae3Instance::triple_rank(w[static_cast<std::size_t>(a)],
                                                    w[static_cast<std::size_t>(b)],
                                                    w[static_cast<std::size_t>(c)]);
        if (inst.has(rank)) out.set_clause_sorted(a, b, c, inst.neg_mask(rank));
      }
  return out;
}

KcspInstance nae_to_kcsp(const Nae3Instance& inst) {
  KcspInstance out(inst.n(), 3);
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    std::vector<std::uint8_t> table(8);
    for (int j = 0; j < 8; ++j)
      table[static_cast<std::size_t>(j)] =
          inst.violated(rank, (j >> 2) & 1, (j >> 1) & 1, j & 1) ? 0 : 1;
    out.set_table({a, b, c}, table);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  fail(ErrorCode::kParse, "line " + std::to_string(line) + ": " + msg);
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == 'c';
}

std::string triple_name(int u, int v, int w) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(w) + ")";
}

}  // namespace

AnyInstance parse_instance(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::string kind;
  long long n = 0;
  long long third = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream hs(line);
    std::string p;
    if (!(hs >> p >> kind >> n >> third) || p != "p")
      parse_fail(lineno, "expected header 'p nae3 <n> <m>' or 'p kcsp <n> <k>'");
    std::string extra;
    if (hs >> extra) parse_fail(lineno, "trailing tokens after header");
    break;
  }
  if (kind.empty()) parse_fail(lineno, "missing header");

  if (kind == "nae3") {
    if (n < 3 || n > 4096) parse_fail(lineno, "n must lie in [3, 4096]");
    if (third < 0 || static_cast<std::uint64_t>(third) > binomial(static_cast<int>(n), 3))
      parse_fail(lineno, "clause count out of range");
    Nae3Instance inst(static_cast<int>(n));
    long long seen = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skip_line(line)) continue;
      std::istringstream ls(line);
      long long u, v, w;
      int pu, pv, pw;
      if (!(ls >> u >> v >> w >> pu >> pv >> pw)) parse_fail(lineno, "expected '<u> <v> <w> <pu> <pv> <pw>'");
      std::string extra;
      if (ls >> extra) parse_fail(lineno, "trailing tokens");
      if (!(1 <= u && u < v && v < w && w <= n))
        parse_fail(lineno, "variables must be 1-based and strictly ascending, got " +
                               triple_name(static_cast<int>(u), static_cast<int>(v),
                                           static_cast<int>(w)));
      for (int pb : {pu, pv, pw})
        if (pb != 0 && pb != 1) parse_fail(lineno, "polarity bits must be 0 or 1");
      const int a = static_cast<int>(u - 1), b = static_cast<int>(v - 1), c = static_cast<int>(w - 1);
      if (inst.has(Nae3Instance::triple_rank(a, b, c)))
        parse_fail(lineno, "duplicate triple " + triple_name(static_cast<int>(u),
                                                              static_cast<int>(v),
                                                              static_cast<int>(w)));
      const auto mask = static_cast<std::uint8_t>((pu ? 0 : 1) | (pv ? 0 : 2) | (pw ? 0 : 4));
      inst.set_clause_sorted(a, b, c, mask);
      ++seen;
    }
    if (seen != third)
      parse_fail(lineno, "header announces " + std::to_string(third) + " clauses, found " +
                             std::to_string(seen));
    return inst;
  }

  if (kind == "kcsp") {
    if (n < 2 || n > 4096) parse_fail(lineno, "n must lie in [2, 4096]");
    if (third < 2 || third > n || third > 16) parse_fail(lineno, "k must satisfy 2 <= k <= min(n, 16)");
    const int k = static_cast<int>(third);
    KcspInstance inst(static_cast<int>(n), k);
    while (std::getline(in, line)) {
      ++lineno;
      if (skip_line(line)) continue;
      std::istringstream ls(line);
      std::vector<int> vars(static_cast<std::size_t>(k));
      for (auto& x : vars) {
        long long t;
        if (!(ls >> t)) parse_fail(lineno, "expected " + std::to_string(k) + " variables and a table");
        if (t < 1 || t > n) parse_fail(lineno, "variable out of range");
        x = static_cast<int>(t - 1);
      }
      for (std::size_t j = 1; j < vars.size(); ++j)
        if (vars[j - 1] >= vars[j]) parse_fail(lineno, "variables must be strictly ascending");
      std::string table;
      if (!(ls >> table)) parse_fail(lineno, "missing truth table");
      std::string extra;
      if (ls >> extra) parse_fail(lineno, "trailing tokens");
      if (table.size() != (std::size_t{1} << k))
        parse_fail(lineno, "truth table must have 2^k characters");
      std::vector<std::uint8_t> bits(table.size());
      for (std::size_t j = 0; j < table.size(); ++j) {
        if (table[j] != '0' && table[j] != '1') parse_fail(lineno, "truth table must be 0/1");
        bits[j] = static_cast<std::uint8_t>(table[j] - '0');
      }
      if (inst.has(colex_rank(vars))) parse_fail(lineno, "duplicate subset");
      if (std::none_of(bits.begin(), bits.end(), [](auto b) { return b == 0; }))
        parse_fail(lineno, "truth table accepts every assignment");
      inst.set_table(vars, bits);
    }
    return inst;
  }

  parse_fail(lineno, "unknown instance kind '" + kind + "'");
}

AnyInstance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

AnyInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Nae3Instance& inst) {
  out << "p nae3 " << inst.n() << ' ' << inst.num_constraints() << '\n';
  if (!inst.complete())
    out << "c incomplete: " << inst.num_triples() - inst.num_constraints() << " of "
        << inst.num_triples() << " triples have no constraint\n";
  for_each_lex_subset(inst.n(), 3, [&](const std::vector<int>& t) {
    const auto rank = Nae3Instance::triple_rank(t[0], t[1], t[2]);
    if (!inst.has(rank)) return;
    const auto m = inst.neg_mask(rank);
    out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << ' ' << ((m & 1) ? 0 : 1) << ' '
        << ((m & 2) ? 0 : 1) << ' ' << ((m & 4) ? 0 : 1) << '\n';
  });
}

void write_instance(std::ostream& out, const KcspInstance& inst) {
  out << "p kcsp " << inst.n() << ' ' << inst.k() << '\n';
  for_each_lex_subset(inst.n(), inst.k(), [&](const std::vector<int>& vars) {
    const auto rank = colex_rank(vars);
    if (!inst.has(rank)) return;
    for (int v : vars) out << v + 1 << ' ';
    out << inst.table_string(rank) << '\n';
  });
}

std::string to_text(const Nae3Instance& inst) {
  std::ostringstream s;
  write_instance(s, inst);
  return s.str();
}

std::string to_text(const KcspInstance& inst) {
  std::ostringstream s;
  write_instance(s, inst);
  return s.str();
}

void write_instance(const std::filesystem::path& path, const AnyInstance& inst) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  std::visit([&](const auto& x) { write_instance(out, x); }, inst);
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

std::uint64_t content_hash(const AnyInstance& inst) {
  const std::string text = std::visit([](const auto& x) { return to_text(x); }, inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ccsp
