#ifndef EMT_DIAGRAM_HPP
#define EMT_DIAGRAM_HPP

#include <set>
#include <vector>

#include "emt/coding.hpp"
#include "emt/structure.hpp"

namespace emt {

// A stage-enumerable set of codes. Stage s exposes the codes <= s; the union
// over all stages is the whole set. For finite structures the whole set is
// reached at a computable stage (the largest code).
class PositiveDiagram {
 public:
  PositiveDiagram() = default;
  explicit PositiveDiagram(std::set<Code> codes) : codes_(std::move(codes)) {}

  const std::set<Code>& all() const { return codes_; }
  std::set<Code> at_stage(Code s) const;
  Code stabilization_stage() const;  // least s with at_stage(s) == all()

 private:
  std::set<Code> codes_;
};

// P(A) = (=) ⊕ (≠) ⊕ R_0 ⊕ R_1 ⊕ ... under the kind-tag coding, enumerated
// in ascending code order.
PositiveDiagram positive_diagram(const FiniteStructure& s);
PositiveDiagram positive_diagram(const PulledStructure& s);

// Diagram of the induced substructure on the entries of ā, restricted to the
// first |ā| relation symbols. Element-coded.
std::set<Code> restriction_diagram(const FiniteStructure& s, const Tuple& abar);

// P_A(ā): the restriction diagram pulled back along the index function of ā.
// Index-coded: every index tuple naming a true fact is included.
std::set<Code> partial_pullback(const FiniteStructure& s, const Tuple& abar);

// f^{-1}(A) on the first m indices; m defaults to the enumeration's window.
// Throws when f restricted to the window misses an element.
PulledStructure pullback_structure(const NumberedEnumeration& f, const FiniteStructure& s);
PulledStructure pullback_structure(const NumberedEnumeration& f, const FiniteStructure& s, Elem m);

// Quotient of a pullback by its congruence, on least representatives,
// renumbered ascending. Throws invariant_error when the congruence does not
// respect some relation.
FiniteStructure canonical_copy(const PulledStructure& pb);

}  // namespace emt

#endif
