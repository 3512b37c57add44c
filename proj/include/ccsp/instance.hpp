#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "ccsp/combinatorics.hpp"

namespace ccsp {

/// Literal pattern of one variable inside a clause: Id (b -> b) or the
/// complement (b -> 1-b).
enum class Polarity : std::uint8_t { kPositive = 0, kNegative = 1 };

inline int apply(Polarity p, int bit) { return bit ^ static_cast<int>(p); }

inline Polarity flip(Polarity p) {
  return p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
}

/// Total Boolean assignment to n variables.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, std::uint8_t fill = 0) : bits_(n, fill) {}
  explicit Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static Assignment from_mask(int n, std::uint64_t mask);
  /// Parses a 0/1 string, first character = variable 0.
  static Assignment from_string(const std::string& s);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t v) const { return bits_[v]; }
  std::uint8_t& operator[](std::size_t v) { return bits_[v]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Bit v of the result is the value of variable v (requires n <= 64).
  std::uint64_t to_mask() const;
  Assignment complement() const;
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Per-variable value in {0, 1/2, 1}; 1/2 marks an unfixed variable.
class PartialAssignment {
 public:
  static constexpr std::uint8_t kUnfixed = 2;

  PartialAssignment() = default;
  explicit PartialAssignment(std::size_t n) : values_(n, kUnfixed) {}

  std::size_t size() const { return values_.size(); }
  bool is_fixed(std::size_t v) const { return values_[v] != kUnfixed; }
  std::uint8_t value(std::size_t v) const { return values_[v]; }
  /// Value as a real number: 0, 0.5 or 1.
  double real_value(std::size_t v) const {
    return values_[v] == kUnfixed ? 0.5 : static_cast<double>(values_[v]);
  }
  void fix(std::size_t v, int bit);

  std::vector<int> unfixed() const;
  std::vector<int> fixed() const;
  VarSet unfixed_set() const;
  bool total() const;
  /// Requires a total partial assignment.
  Assignment to_assignment() const;
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> values_;
};

/// NAE clause over three distinct variables, given in any order.
struct NaeClause {
  std::array<int, 3> vars{};
  std::array<Polarity, 3> pol{};
};

/// NAE-3-SAT instance with at most one constraint per variable triple. Triples
/// live in a flat array indexed by colex rank; each slot stores the negation
/// pattern of its three members (bit j for the j-th smallest) and a presence
/// bit. A complete instance has every slot present.
class Nae3Instance {
 public:
  Nae3Instance() = default;
  /// Empty (no constraints) instance over n variables.
  explicit Nae3Instance(int n);

  int n() const { return n_; }
  std::uint64_t num_triples() const { return slots_.size(); }
  std::uint64_t num_constraints() const { return present_; }
  bool complete() const { return present_ == slots_.size(); }

  static std::uint64_t triple_rank(int a, int b, int c) {
    return static_cast<std::uint64_t>(a) + binomial(b, 2) + binomial(c, 3);
  }

  bool has(std::uint64_t rank) const { return slots_[rank] & kPresent; }
  bool has(int u, int v, int w) const;
  /// Negation pattern of a present triple, bit j = member j is negated.
  std::uint8_t neg_mask(std::uint64_t rank) const { return slots_[rank] & 7U; }
  Polarity polarity(int u, int v, int w, int member) const;

  /// Sets (or replaces) the constraint on a triple.
  void set_clause(const NaeClause& clause);
  void set_clause_sorted(int a, int b, int c, std::uint8_t neg_mask);
  void remove(std::uint64_t rank);

  /// True iff the constraint on sorted triple `rank` is violated by the given
  /// bits of its sorted members.
  bool violated(std::uint64_t rank, int ba, int bb, int bc) const {
    const std::uint8_t m = neg_mask(rank);
    const int la = ba ^ (m & 1);
    const int lb = bb ^ ((m >> 1) & 1);
    const int lc = bc ^ ((m >> 2) & 1);
    return la == lb && lb == lc;
  }

  /// Calls f(a, b, c, rank) over present triples with a < b < c, in rank order.
  template <class F>
  void for_each_constraint(F&& f) const {
    std::uint64_t rank = 0;
    for (int c = 2; c < n_; ++c)
      for (int b = 1; b < c; ++b)
        for (int a = 0; a < b; ++a, ++rank)
          if (slots_[rank] & kPresent) f(a, b, c, rank);
  }

  /// Same instance with every polarity complemented.
  Nae3Instance complemented() const;

  friend bool operator==(const Nae3Instance&, const Nae3Instance&) = default;

 private:
  static constexpr std::uint8_t kPresent = 8;
  int n_ = 0;
  std::uint64_t present_ = 0;
  std::vector<std::uint8_t> slots_;
};

/// k-CSP with one truth table per k-subset (2^k bits; bit j is the value of
/// the assignment whose binary expansion is j, smallest variable most
/// significant). Tables are indexed by colex rank.
class KcspInstance {
 public:
  KcspInstance() = default;
  KcspInstance(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t num_subsets() const { return present_.size(); }
  std::uint64_t num_constraints() const { return present_count_; }
  bool complete() const { return present_count_ == present_.size(); }
  bool has(std::uint64_t rank) const { return present_[rank] != 0; }

  /// Installs a table (length 2^k) for the sorted subset; every table must
  /// reject at least one assignment.
  void set_table(const std::vector<int>& sorted_vars, const std::vector<std::uint8_t>& table);
  bool satisfied(std::uint64_t rank, std::uint32_t assignment_index) const {
    return bits_[(rank << k_) + assignment_index] != 0;
  }
  std::string table_string(std::uint64_t rank) const;

  friend bool operator==(const KcspInstance&, const KcspInstance&) = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::uint64_t present_count_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<std::uint8_t> bits_;
};

struct PlantedInstance {
  Nae3Instance instance;
  Assignment planted;
  std::uint64_t violated_count = 0;
};

/// Evaluates an NAE constraint; members and bits may be in any order.
bool eval_nae(const Nae3Instance& inst, std::array<int, 3> triple, std::array<int, 3> bits);

/// Number of present constraints violated by `a`.
std::uint64_t count_violated(const Nae3Instance& inst, const Assignment& a);

/// Fraction of present constraints violated by `a`.
double val_assignment(const Nae3Instance& inst, const Assignment& a);

std::uint64_t count_violated(const KcspInstance& inst, const Assignment& a);
double val_kcsp(const KcspInstance& inst, const Assignment& a);

Nae3Instance gen_random_nae3(int n, std::uint64_t seed);
PlantedInstance gen_planted_nae3(int n, double corruption, std::uint64_t seed);

/// Dense instance from an arbitrary NAE clause list over n0 variables.
/// Adds ceil(3 n0 / eps) dummy variables, capped so that the total variable
/// count does not exceed max_total_n.
Nae3Instance densify_reduction(int n0, const std::vector<NaeClause>& clauses, double eps,
                               int max_total_n);

/// Sub-instance on the variables of `w` (ascending), re-indexed 0..|w|-1.
Nae3Instance induced_instance(const Nae3Instance& inst, const std::vector<int>& w);

/// The NAE instance as a 3-CSP with explicit truth tables.
KcspInstance nae_to_kcsp(const Nae3Instance& inst);

/// Result of reading an instance file.
using AnyInstance = std::variant<Nae3Instance, KcspInstance>;

AnyInstance parse_instance(std::istream& in);
AnyInstance parse_instance_string(const std::string& text);
AnyInstance read_instance(const std::filesystem::path& path);

void write_instance(std::ostream& out, const Nae3Instance& inst);
void write_instance(std::ostream& out, const KcspInstance& inst);
std::string to_text(const Nae3Instance& inst);
std::string to_text(const KcspInstance& inst);
void write_instance(const std::filesystem::path& path, const AnyInstance& inst);

/// FNV-1a hash of the canonical text serialization.
std::uint64_t content_hash(const AnyInstance& inst);

}  // namespace ccsp
