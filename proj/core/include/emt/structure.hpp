#ifndef EMT_STRUCTURE_HPP
#define EMT_STRUCTURE_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emt/coding.hpp"

namespace emt {

struct RelationSymbol {
  std::string name;
  unsigned arity = 0;  // always >= 1
  bool operator==(const RelationSymbol&) const = default;
};

// Ordered relational signature. The position of a symbol fixes its fact kind:
// relation i codes as kind i+2.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<RelationSymbol> rels);

  std::size_t size() const { return rels_.size(); }
  const RelationSymbol& at(std::size_t i) const { return rels_.at(i); }
  const std::vector<RelationSymbol>& relations() const { return rels_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<RelationSymbol> rels_;
};

// Read access to the positive information of a structure-like object.
// Finite structures answer equality natively; pullbacks along enumerations
// answer it through the induced congruence.
class PositiveWorld {
 public:
  virtual ~PositiveWorld() = default;
  virtual const Signature& signature() const = 0;
  virtual Elem universe_size() const = 0;
  virtual bool eq(Elem a, Elem b) const = 0;
  virtual bool rel_holds(std::size_t rel, const Tuple& args) const = 0;
  bool neq(Elem a, Elem b) const { return !eq(a, b); }
};

// A finite relational structure on universe {0..n-1}, the ground truth for
// all semantics in the engine. Immutable after construction.
class FiniteStructure final : public PositiveWorld {
 public:
  FiniteStructure() = default;
  FiniteStructure(Signature sig, Elem size);
  FiniteStructure(Signature sig, Elem size, std::vector<std::set<Tuple>> facts);

  void add_fact(std::size_t rel, Tuple args);  // construction phase only
  void add_fact(const std::string& rel, Tuple args);

  const Signature& signature() const override { return sig_; }
  Elem universe_size() const override { return size_; }
  bool eq(Elem a, Elem b) const override { return a == b; }
  bool rel_holds(std::size_t rel, const Tuple& args) const override;

  const std::set<Tuple>& facts(std::size_t rel) const { return facts_.at(rel); }
  bool operator==(const FiniteStructure&) const = default;

 private:
  Signature sig_;
  Elem size_ = 0;
  std::vector<std::set<Tuple>> facts_;
};

// Pullback f^{-1}(A): the structure induced on index space {0..m-1} by an
// enumeration f, with the congruence f^{-1}(=) explicit. Fact sets are
// materialized at construction; the object owns all its data.
class PulledStructure final : public PositiveWorld {
 public:
  PulledStructure(const FiniteStructure& source, std::vector<Elem> image);

  const Signature& signature() const override { return sig_; }
  Elem universe_size() const override { return size_; }
  bool eq(Elem a, Elem b) const override { return image_.at(a) == image_.at(b); }
  bool rel_holds(std::size_t rel, const Tuple& args) const override;

  // The element of the source structure index i names.
  Elem image(Elem i) const { return image_.at(i); }
  const std::vector<Elem>& images() const { return image_; }
  const std::set<Tuple>& facts(std::size_t rel) const { return facts_.at(rel); }

 private:
  Signature sig_;
  Elem size_ = 0;
  std::vector<Elem> image_;
  std::vector<std::set<Tuple>> facts_;
};

// A countable structure presented in stages: generator(s) yields a finite
// induced substructure, nondecreasing in s.
class StagedStructure {
 public:
  StagedStructure(std::string description, std::function<FiniteStructure(std::uint64_t)> gen)
      : description_(std::move(description)), gen_(std::move(gen)) {}

  FiniteStructure at_stage(std::uint64_t s) const { return gen_(s); }
  const std::string& description() const { return description_; }

  static StagedStructure constant(FiniteStructure s);

  // The graph fixture used throughout the jump tests: one looped apex, one
  // circle of length n+1 per bit, apex linked to the least element of circle
  // n exactly when bit n is set. Stage s realizes circles 0..min(s, bits-1).
  static StagedStructure cycles(std::vector<bool> bits);

 private:
  std::string description_;
  std::function<FiniteStructure(std::uint64_t)> gen_;
};

// A total map omega -> universe given by an explicit finite prefix repeated
// cyclically. The prefix length is the index window all pullbacks use.
class NumberedEnumeration {
 public:
  explicit NumberedEnumeration(Tuple prefix);
  static NumberedEnumeration identity(Elem n);

  Elem operator()(std::size_t i) const { return prefix_[i % prefix_.size()]; }
  std::size_t window() const { return prefix_.size(); }
  const Tuple& prefix() const { return prefix_; }

  // Throws invariant_error naming a missed element when f restricted to the
  // window is not onto {0..n-1}.
  void require_surjective(Elem n) const;

 private:
  Tuple prefix_;
};

// Text round trip for structure files (External Interfaces):
//   signature <name>/<arity> ... | universe <n> | fact <name> <a1> ... <ak>
//   builtin cycles <bits>
// Parsing `builtin cycles` yields a staged structure instead.
struct ParsedStructureFile {
  std::optional<FiniteStructure> finite;
  std::optional<StagedStructure> staged;
};
ParsedStructureFile parse_structure_file(const std::string& text);
FiniteStructure parse_structure(const std::string& text);  // finite only, errors on builtin
std::string write_structure(const FiniteStructure& s);

// Brute-force isomorphism search; intended for desk-scale universes (n <= 8).
std::optional<std::vector<Elem>> find_isomorphism(const FiniteStructure& a, const FiniteStructure& b);
bool is_isomorphism(const FiniteStructure& a, const FiniteStructure& b, const std::vector<Elem>& map);
std::vector<std::vector<Elem>> automorphisms(const FiniteStructure& a);

}  // namespace emt

#endif
