#ifndef EMT_EOP_HPP
#define EMT_EOP_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emt/coding.hpp"

namespace emt {

// One axiom <D, x>: conclude x from the finite premise set D.
struct Axiom {
  std::vector<Code> premises;  // sorted, duplicate-free
  Code conclusion = 0;

  static Axiom make(Code conclusion, std::vector<Code> premises);
  bool operator==(const Axiom&) const = default;
  auto operator<=>(const Axiom&) const = default;
};

// pair(conclusion, tuplecode(sorted premises)); throws coding_error on
// overflow (compiled operators routinely exceed the code space, which is
// why they use the AllAtOnce stage policy below).
Code axiom_code(const Axiom& a);

// A stage-enumerable set of axioms.
//
// ByCode operators follow the convention that the stage-s approximation
// contains no axiom whose code exceeds s; this is the policy of every
// catalog-decoded and file-loaded operator. Compiled operators are finite
// objects already truncated by their compile stage and expose all axioms at
// every stage (their codes overflow the code space, so the bookkeeping bound
// cannot apply to them).
class EnumOperator {
 public:
  enum class StagePolicy { ByCode, AllAtOnce };

  EnumOperator() = default;
  static EnumOperator from_axioms(std::vector<Axiom> axioms, StagePolicy policy = StagePolicy::ByCode);

  const std::vector<Axiom>& axioms() const { return axioms_; }
  StagePolicy policy() const { return policy_; }
  std::vector<Axiom> at_stage(std::optional<std::uint64_t> stage) const;
  std::size_t size() const { return axioms_.size(); }

  bool operator==(const EnumOperator&) const = default;

 private:
  std::vector<Axiom> axioms_;
  StagePolicy policy_ = StagePolicy::ByCode;
};

// { x : some axiom <D,x> enumerated by the stage bound has D ⊆ X }.
// Omitting the stage means "all axioms".
std::set<Code> apply(const EnumOperator& op, const std::set<Code>& X, std::optional<std::uint64_t> stage = {});

// Total decoding of the fixed operator catalog: e decodes via tuplecode to a
// list of axiom codes, each axiom = pair(conclusion, tuplecode(premises)).
// Malformed parts decode to fewer axioms.
EnumOperator catalog_operator(Code e);

// Canonical index of a finite operator; nullopt when the code space
// overflows (common for compiled operators).
std::optional<Code> operator_index(const EnumOperator& op);

// K_X at stage: { x <= stage : x ∈ apply(catalog_operator(x), X, stage) }.
// Note: under the pinned monotone coding no operator can conclude its own
// index, so this set is provably empty; see the module tests.
std::set<Code> kleene_set_stage(const std::set<Code>& X, std::uint64_t stage);

// Stage approximation of the enumeration jump J_e(X) = X ⊕ K̄_X.
struct JumpSplit {
  std::set<Code> confirmed_k;            // members of K seen so far
  std::set<Code> complement_candidates;  // x <= stage not yet in K
  std::set<Code> join(const std::set<Code>& X) const;  // X ⊕ candidates, even/odd
  bool operator==(const JumpSplit&) const = default;
};
JumpSplit enumeration_jump_stage(const std::set<Code>& X, std::uint64_t stage);

// Operator file (.eop): lines `axiom <x> : <d1> <d2> ...` (premises may be
// empty). Line order is the enumeration order; the stage-s approximation is
// still bounded by axiom code, so an axiom enters at stage = its code.
EnumOperator parse_operator(const std::string& text);
std::string write_operator(const EnumOperator& op);

}  // namespace emt

#endif
