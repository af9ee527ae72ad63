#ifndef EMT_CATALOG_HPP
#define EMT_CATALOG_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "emt/formula.hpp"

namespace emt {

// A fixed, versioned enumeration of all finite-disjunct Sigma-p-1 formulas
// over a signature ("the grammar walk"). Rows are emitted in one global
// deterministic order; each row is a formula together with its designated
// arity, and the per-arity subsequence realizes the classic indexing
// "phi_{i,j} = the i-th formula with j free variables".
//
// Walk order (catalog version emt-catalog-1):
//   * weight of an atom = 1; weight of a disjunct = 2*bound_count + #atoms;
//     weight of a formula = designated arity + sum of disjunct weights.
//   * rows are ordered by (weight, arity, body), bodies in lexicographic
//     order over their strictly increasing disjunct-id sequences.
//   * disjunct ids at one arity are ordered by (weight, enumeration order):
//     bound_count ascending, then atom sets as lexicographic combinations of
//     atom ids; atom ids order by (kind, relation position, argument list)
//     with variables ordered x1 < .. < xj < y1 < .. < yb.
//   * only canonical disjuncts are enumerated: conjunct sets sorted and
//     duplicate-free, every bound variable used, and the disjunct equal to
//     its minimum over all bound-variable relabelings.
//   * a formula's designated arity is the largest free index it mentions;
//     designated arities start at 1 (signatures have no 0-ary relations).
//
// The walk is total and injective: every canonical finite-disjunct formula
// appears in exactly one row.
class FormulaCatalog {
 public:
  explicit FormulaCatalog(Signature sig);

  struct Row {
    unsigned arity = 0;
    SigmaP1Formula formula;
  };

  static constexpr const char* kVersion = "emt-catalog-1";

  const Signature& signature() const { return sig_; }

  // Global row access (the slice indexing of the positive Kleene predicate).
  const Row& row(std::uint64_t r) const;

  // The i-th formula with exactly j free variables (paper-style indexing).
  SigmaP1Formula formula_at(std::uint64_t i, unsigned j) const;

  // Global row of the i-th arity-j formula.
  std::uint64_t global_row_of(std::uint64_t i, unsigned j) const;

  // Canonical form under the walk's disjunct normalization; formulas must
  // use every bound variable of every disjunct. Used by the completeness
  // scans to locate arbitrary DSL formulas in the walk.
  std::vector<Disjunct> canonicalize(const std::vector<Disjunct>& disjuncts) const;

  // Scans rows [0, scan_bound) for a formula with the given designated arity
  // and canonical body; returns the global row or nullopt.
  std::optional<std::uint64_t> locate(const std::vector<Disjunct>& disjuncts, unsigned arity,
                                      std::uint64_t scan_bound) const;

  std::uint64_t rows_generated() const { return rows_.size(); }

 private:
  struct DisjunctPool;
  void ensure_rows(std::uint64_t count) const;
  void ensure_arity_rows(unsigned arity, std::uint64_t count) const;
  void generate_weight_level() const;

  Signature sig_;
  mutable std::uint64_t next_weight_ = 2;
  mutable std::vector<Row> rows_;
  mutable std::map<unsigned, std::vector<std::uint64_t>> by_arity_;  // arity -> global rows
  mutable std::map<unsigned, std::vector<std::vector<Disjunct>>> pools_;  // arity -> per-weight disjunct lists
};

// Indices i <= catalog_depth (at arity |ā|) whose catalog formula is
// satisfied by ā at the stage bound.
std::set<std::uint64_t> sigma1p_type(const PositiveWorld& w, const FormulaCatalog& catalog, const Tuple& abar,
                                     std::uint64_t catalog_depth, std::uint64_t stage);

}  // namespace emt

#endif
