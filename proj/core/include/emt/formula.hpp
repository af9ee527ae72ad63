#ifndef EMT_FORMULA_HPP
#define EMT_FORMULA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "emt/structure.hpp"

namespace emt {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class AtomKind { Eq, Neq, Rel };

// Variable reference: free slot x_{k+1}, bound slot y_{k+1}, parameter z_{k+1}.
struct ArgRef {
  enum class Slot { Free, Bound, Param };
  Slot slot = Slot::Free;
  unsigned index = 0;
  bool operator==(const ArgRef&) const = default;
  auto operator<=>(const ArgRef&) const = default;
};

// A single atom. Only positive atoms occur in Sigma-p-1 formulas; `negated`
// can be set only on the classical (Sigma-c-1) side of the totalization
// translation.
struct Atom {
  AtomKind kind = AtomKind::Eq;
  std::string rel;  // relation name; empty for Eq/Neq
  std::vector<ArgRef> args;
  bool negated = false;
  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

// One existentially quantified finite conjunction.
struct Disjunct {
  unsigned bound_count = 0;
  std::vector<Atom> conjuncts;  // nonempty
  bool operator==(const Disjunct&) const = default;
  auto operator<=>(const Disjunct&) const = default;
};

unsigned max_free_index_used(const Atom& a);       // 0 when none; else max k+1 over Free k
unsigned max_free_index_used(const Disjunct& d);

// ---------------------------------------------------------------------------
// Template generators: the DSL's representation of infinite disjunctions.
// One integer parameter n plus a repetition macro keeps the index set c.e.
// by construction.
// ---------------------------------------------------------------------------

struct AffineExpr {
  enum class Base { Const, N, RepVar };
  Base base = Base::Const;
  long long offset = 0;
  bool operator==(const AffineExpr&) const = default;
};

struct BoundDecl {
  std::string name;
  bool indexed = false;  // plain `y` vs `y[lo..hi]`
  AffineExpr lo, hi;     // indexed only
  bool operator==(const BoundDecl&) const = default;
};

struct TemplateArg {
  ArgRef::Slot slot = ArgRef::Slot::Free;
  unsigned index = 0;        // Free/Param slot index
  std::string bound_name;    // Bound only
  bool bound_indexed = false;
  AffineExpr bound_index;
  bool operator==(const TemplateArg&) const = default;
};

struct TemplateAtom {
  AtomKind kind = AtomKind::Eq;
  std::string rel;
  std::vector<TemplateArg> args;
  bool negated = false;
  bool operator==(const TemplateAtom&) const = default;
};

struct RepBlock {
  std::string var;
  AffineExpr lo, hi;
  std::vector<TemplateAtom> atoms;
  bool operator==(const RepBlock&) const = default;
};

class DisjunctGenerator {
 public:
  DisjunctGenerator(std::string name, std::uint64_t first, std::optional<std::uint64_t> last,
                    std::vector<BoundDecl> bounds, std::vector<TemplateAtom> atoms,
                    std::vector<RepBlock> reps);

  // disjunct at parameter value n; n is clamped into [first, last].
  Disjunct instantiate(std::uint64_t n) const;

  const std::string& name() const { return name_; }
  std::uint64_t first() const { return first_; }
  std::optional<std::uint64_t> last() const { return last_; }
  const std::vector<BoundDecl>& bounds() const { return bounds_; }
  const std::vector<TemplateAtom>& atoms() const { return atoms_; }
  const std::vector<RepBlock>& reps() const { return reps_; }
  unsigned max_free_index_used() const;

  bool operator==(const DisjunctGenerator&) const = default;

 private:
  std::string name_;
  std::uint64_t first_ = 1;
  std::optional<std::uint64_t> last_;
  std::vector<BoundDecl> bounds_;
  std::vector<TemplateAtom> atoms_;
  std::vector<RepBlock> reps_;
};

// ---------------------------------------------------------------------------
// Formulas and families
// ---------------------------------------------------------------------------

enum class Polarity { Positive, Classical };

// A Sigma-p-1 formula: a stream of disjuncts, explicit ones first and then
// generator instances interleaved round-robin. The stream is total: the
// disjunct at every index is computable.
class SigmaP1Formula {
 public:
  SigmaP1Formula() = default;  // empty disjunction (false), zero free vars
  SigmaP1Formula(unsigned free_count, unsigned param_count, std::vector<Disjunct> disjuncts,
                 std::vector<DisjunctGenerator> generators = {}, Polarity pol = Polarity::Positive);

  static SigmaP1Formula empty(unsigned free_count, unsigned param_count = 0);

  unsigned free_count() const { return free_count_; }
  unsigned param_count() const { return param_count_; }
  Polarity polarity() const { return polarity_; }
  bool finite() const { return generators_.empty(); }
  std::size_t explicit_count() const { return disjuncts_.size(); }
  const std::vector<Disjunct>& explicit_disjuncts() const { return disjuncts_; }
  const std::vector<DisjunctGenerator>& generators() const { return generators_; }

  // Stream position -> disjunct; nullopt once a finite stream is exhausted.
  std::optional<Disjunct> stream_at(std::uint64_t index) const;

  // For finite streams: any stage >= this value gives exact truth.
  std::uint64_t exact_stage() const;

  bool operator==(const SigmaP1Formula&) const = default;

 private:
  unsigned free_count_ = 0;
  unsigned param_count_ = 0;
  Polarity polarity_ = Polarity::Positive;
  std::vector<Disjunct> disjuncts_;
  std::vector<DisjunctGenerator> generators_;
};

// An arity-indexed family (phi_i)_i generated by one rule. Template modes
// instantiate a shared disjunct body at each arity, keeping only disjuncts
// whose free references fit; the per-arity mode carries explicit formulas.
class SigmaP1Family {
 public:
  SigmaP1Family() = default;

  static SigmaP1Family uniform(std::string name, unsigned param_count, std::vector<Disjunct> disjuncts,
                               std::vector<DisjunctGenerator> generators = {}, Polarity pol = Polarity::Positive);
  static SigmaP1Family listed(std::string name, unsigned param_count, std::vector<unsigned> arities,
                              std::vector<Disjunct> disjuncts, std::vector<DisjunctGenerator> generators = {},
                              Polarity pol = Polarity::Positive);
  static SigmaP1Family per_arity(std::string name, unsigned param_count,
                                 std::map<unsigned, SigmaP1Formula> formulas);

  const std::string& name() const { return name_; }
  unsigned param_count() const { return param_count_; }
  Polarity polarity() const { return polarity_; }
  SigmaP1Formula at(unsigned arity) const;
  std::vector<unsigned> covered_arities(unsigned max_len) const;

  enum class Mode { Uniform, Listed, PerArity };
  Mode mode() const { return mode_; }
  const std::vector<unsigned>& listed_arities() const { return arities_; }
  const std::vector<Disjunct>& template_disjuncts() const { return disjuncts_; }
  const std::vector<DisjunctGenerator>& template_generators() const { return generators_; }
  const std::map<unsigned, SigmaP1Formula>& per_arity_formulas() const { return formulas_; }

  bool operator==(const SigmaP1Family&) const = default;

 private:
  unsigned max_template_arity() const;

  std::string name_;
  unsigned param_count_ = 0;
  Polarity polarity_ = Polarity::Positive;
  Mode mode_ = Mode::Uniform;
  std::vector<unsigned> arities_;          // Listed
  std::vector<Disjunct> disjuncts_;        // Uniform/Listed
  std::vector<DisjunctGenerator> generators_;
  std::map<unsigned, SigmaP1Formula> formulas_;  // PerArity
};

// ---------------------------------------------------------------------------
// Stage-bounded satisfaction
// ---------------------------------------------------------------------------

// Backtracking search over bound-variable assignments, variable order as
// written. Exact on finite universes.
bool sat_disjunct(const PositiveWorld& w, const Disjunct& d, const Tuple& assignment, const Tuple& params);

// True iff some disjunct with stream index <= stage is satisfied. Monotone
// in stage; exact for finite streams once stage >= exact_stage().
bool sat_stage(const PositiveWorld& w, const SigmaP1Formula& f, const Tuple& assignment, const Tuple& params,
               std::uint64_t stage);

// { ā : |ā| <= max_len and sat_stage(w, phi_{|ā|}, ā, params, stage) }.
std::set<Tuple> define_relation(const PositiveWorld& w, const SigmaP1Family& fam, const Tuple& params,
                                unsigned max_len, std::uint64_t stage);

// ---------------------------------------------------------------------------
// Text form (.spf). The classical entry points additionally accept `not`
// before atoms; every parser rejects `!` and `->` outright.
// ---------------------------------------------------------------------------

std::vector<SigmaP1Family> parse_families(const std::string& text);
std::vector<SigmaP1Family> parse_classical_families(const std::string& text);
const SigmaP1Family& find_family(const std::vector<SigmaP1Family>& fams, const std::string& name);

std::string write_family(const SigmaP1Family& fam);
std::string write_formula(const SigmaP1Formula& f);
std::string write_disjunct(const Disjunct& d);
std::string write_atom(const Atom& a);

}  // namespace emt

#endif
