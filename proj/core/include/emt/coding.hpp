#ifndef EMT_CODING_HPP
#define EMT_CODING_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace emt {

// Natural-number codes. Everything enumerable in the engine lives in this
// type: fact codes, tuple codes, axiom codes, operator indices.
using Code = std::uint64_t;

// Structure elements and index positions.
using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

// Cantor pairing: pair(x,y) = (x+y)(x+y+1)/2 + y.
// Throws coding_error on uint64 overflow; desk-scale inputs never overflow.
Code pair(Code x, Code y);
std::pair<Code, Code> unpair(Code z);

// Tuple coding with an explicit length header:
//   tuplecode(())        = pair(0, 0) = 0
//   tuplecode((a))       = pair(1, a)
//   tuplecode((a,..,z))  = pair(k, pair(a, pair(.., z)))   (right-nested)
Code tuplecode(const std::vector<Code>& t);
Code tuplecode(const Tuple& t);

// Total decode of the payload shape; returns nullopt only for the
// non-canonical empty header pair(0, p) with p != 0.
std::optional<std::vector<Code>> decode_tuple(Code z);

// Fact kinds: 0 equality, 1 inequality, i+2 for relation i.
inline constexpr Code kFactEq = 0;
inline constexpr Code kFactNeq = 1;
inline constexpr Code relation_kind(std::size_t rel_index) { return static_cast<Code>(rel_index) + 2; }

struct Fact {
  Code kind = 0;
  Tuple args;
  bool operator==(const Fact&) const = default;
  auto operator<=>(const Fact&) const = default;
};

// encode_fact(kind, args) = pair(kind, tuplecode(args)).
Code encode_fact(Code kind, const Tuple& args);
Code encode_fact(const Fact& f);

// Inverse of encode_fact; nullopt when the argument part is not a canonical
// tuple code or an entry exceeds Elem range.
std::optional<Fact> decode_fact(Code c);

// Even/odd join: X ⊕ Y = {2x : x ∈ X} ∪ {2y+1 : y ∈ Y}.
Code join_left(Code x);
Code join_right(Code y);

// Three-way join used for morphism oracles: slots 3k, 3k+1, 3k+2.
Code join3(unsigned slot, Code x);

}  // namespace emt

#endif
