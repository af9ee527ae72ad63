#include "emt/formula.hpp"

#include <algorithm>
#include <functional>

#include "emt/errors.hpp"

namespace emt {

unsigned max_free_index_used(const Atom& a) {
  unsigned m = 0;
  for (const auto& r : a.args)
    if (r.slot == ArgRef::Slot::Free) m = std::max(m, r.index + 1);
  return m;
}

unsigned max_free_index_used(const Disjunct& d) {
  unsigned m = 0;
  for (const auto& a : d.conjuncts) m = std::max(m, max_free_index_used(a));
  return m;
}

namespace {

std::uint64_t eval_affine(const AffineExpr& e, std::uint64_t n, std::uint64_t rep, bool rep_valid,
                          const std::string& where) {
  long long base = 0;
  switch (e.base) {
    case AffineExpr::Base::Const: base = 0; break;
    case AffineExpr::Base::N: base = static_cast<long long>(n); break;
    case AffineExpr::Base::RepVar:
      if (!rep_valid) throw usage_error("rep variable used outside rep block in " + where);
      base = static_cast<long long>(rep);
      break;
  }
  long long v = base + e.offset;
  if (v < 0) throw usage_error("negative index in " + where);
  return static_cast<std::uint64_t>(v);
}

void validate_disjunct(const Disjunct& d, unsigned free_count, unsigned param_count, Polarity pol) {
  if (d.conjuncts.empty()) throw invariant_error("disjunct with empty conjunction");
  for (const auto& a : d.conjuncts) {
    if (a.negated && pol == Polarity::Positive) throw invariant_error("negated atom in a positive formula");
    if (a.kind != AtomKind::Rel && a.args.size() != 2)
      throw invariant_error("equality atoms take exactly two arguments");
    for (const auto& r : a.args) {
      switch (r.slot) {
        case ArgRef::Slot::Free:
          if (r.index >= free_count) throw invariant_error("free variable x" + std::to_string(r.index + 1) + " out of range");
          break;
        case ArgRef::Slot::Bound:
          if (r.index >= d.bound_count) throw invariant_error("bound variable reference out of range");
          break;
        case ArgRef::Slot::Param:
          if (r.index >= param_count) throw invariant_error("parameter z" + std::to_string(r.index + 1) + " out of range");
          break;
      }
    }
  }
}

}  // namespace

DisjunctGenerator::DisjunctGenerator(std::string name, std::uint64_t first, std::optional<std::uint64_t> last,
                                     std::vector<BoundDecl> bounds, std::vector<TemplateAtom> atoms,
                                     std::vector<RepBlock> reps)
    : name_(std::move(name)),
      first_(first),
      last_(last),
      bounds_(std::move(bounds)),
      atoms_(std::move(atoms)),
      reps_(std::move(reps)) {
  if (last_ && *last_ < first_) throw usage_error("generator '" + name_ + "' has an empty range");
}

unsigned DisjunctGenerator::max_free_index_used() const {
  unsigned m = 0;
  auto scan = [&m](const std::vector<TemplateAtom>& atoms) {
    for (const auto& a : atoms)
      for (const auto& r : a.args)
        if (r.slot == ArgRef::Slot::Free) m = std::max(m, r.index + 1);
  };
  scan(atoms_);
  for (const auto& rb : reps_) scan(rb.atoms);
  return m;
}

Disjunct DisjunctGenerator::instantiate(std::uint64_t n) const {
  n = std::max(n, first_);
  if (last_) n = std::min(n, *last_);
  const std::string where = "generator '" + name_ + "'";

  struct Range {
    unsigned base;
    std::uint64_t lo;
    std::uint64_t count;
    bool indexed;
  };
  std::map<std::string, Range> slot_of;
  unsigned total = 0;
  for (const auto& b : bounds_) {
    if (slot_of.count(b.name)) throw usage_error("duplicate bound variable '" + b.name + "' in " + where);
    if (!b.indexed) {
      slot_of[b.name] = {total, 0, 1, false};
      total += 1;
    } else {
      std::uint64_t lo = eval_affine(b.lo, n, 0, false, where);
      std::uint64_t hi_plus;
      {
        // hi can evaluate below lo; that declares zero slots.
        long long hi = 0;
        switch (b.hi.base) {
          case AffineExpr::Base::Const: hi = b.hi.offset; break;
          case AffineExpr::Base::N: hi = static_cast<long long>(n) + b.hi.offset; break;
          case AffineExpr::Base::RepVar: throw usage_error("rep variable in bound declaration of " + where);
        }
        hi_plus = hi < static_cast<long long>(lo) ? lo : static_cast<std::uint64_t>(hi) + 1;
      }
      std::uint64_t count = hi_plus - lo;
      slot_of[b.name] = {total, lo, count, true};
      total += static_cast<unsigned>(count);
    }
  }

  auto resolve = [&](const TemplateArg& t, std::uint64_t rep, bool rep_valid) -> ArgRef {
    switch (t.slot) {
      case ArgRef::Slot::Free: return {ArgRef::Slot::Free, t.index};
      case ArgRef::Slot::Param: return {ArgRef::Slot::Param, t.index};
      case ArgRef::Slot::Bound: break;
    }
    auto it = slot_of.find(t.bound_name);
    if (it == slot_of.end()) throw usage_error("undeclared bound variable '" + t.bound_name + "' in " + where);
    const Range& r = it->second;
    if (!t.bound_indexed) {
      if (r.indexed) throw usage_error("bound variable '" + t.bound_name + "' needs an index in " + where);
      return {ArgRef::Slot::Bound, r.base};
    }
    std::uint64_t idx = eval_affine(t.bound_index, n, rep, rep_valid, where);
    if (idx < r.lo || idx - r.lo >= r.count)
      throw usage_error("index " + std::to_string(idx) + " outside declaration of '" + t.bound_name + "' in " + where);
    return {ArgRef::Slot::Bound, r.base + static_cast<unsigned>(idx - r.lo)};
  };

  auto expand_atom = [&](const TemplateAtom& ta, std::uint64_t rep, bool rep_valid) -> Atom {
    Atom a;
    a.kind = ta.kind;
    a.rel = ta.rel;
    a.negated = ta.negated;
    a.args.reserve(ta.args.size());
    for (const auto& arg : ta.args) a.args.push_back(resolve(arg, rep, rep_valid));
    return a;
  };

  Disjunct d;
  d.bound_count = total;
  for (const auto& ta : atoms_) d.conjuncts.push_back(expand_atom(ta, 0, false));
  for (const auto& rb : reps_) {
    std::uint64_t lo = eval_affine(rb.lo, n, 0, false, where);
    long long hi = 0;
    switch (rb.hi.base) {
      case AffineExpr::Base::Const: hi = rb.hi.offset; break;
      case AffineExpr::Base::N: hi = static_cast<long long>(n) + rb.hi.offset; break;
      case AffineExpr::Base::RepVar: throw usage_error("rep variable in rep bound of " + where);
    }
    for (long long i = static_cast<long long>(lo); i <= hi; ++i)
      for (const auto& ta : rb.atoms) d.conjuncts.push_back(expand_atom(ta, static_cast<std::uint64_t>(i), true));
  }
  if (d.conjuncts.empty()) throw invariant_error("generator '" + name_ + "' produced an empty conjunction at n=" + std::to_string(n));
  return d;
}

SigmaP1Formula::SigmaP1Formula(unsigned free_count, unsigned param_count, std::vector<Disjunct> disjuncts,
                               std::vector<DisjunctGenerator> generators, Polarity pol)
    : free_count_(free_count),
      param_count_(param_count),
      polarity_(pol),
      disjuncts_(std::move(disjuncts)),
      generators_(std::move(generators)) {
  for (const auto& d : disjuncts_) validate_disjunct(d, free_count_, param_count_, polarity_);
  for (const auto& g : generators_) {
    // Validate a probe instance; per-instance range checks happen at use.
    validate_disjunct(g.instantiate(g.first()), free_count_, param_count_, polarity_);
  }
}

SigmaP1Formula SigmaP1Formula::empty(unsigned free_count, unsigned param_count) {
  return SigmaP1Formula(free_count, param_count, {}, {});
}

std::optional<Disjunct> SigmaP1Formula::stream_at(std::uint64_t index) const {
  if (index < disjuncts_.size()) return disjuncts_[index];
  if (generators_.empty()) return std::nullopt;
  std::uint64_t m = index - disjuncts_.size();
  std::uint64_t g = m % generators_.size();
  std::uint64_t t = m / generators_.size();
  const auto& gen = generators_[g];
  return gen.instantiate(gen.first() + t);
}

std::uint64_t SigmaP1Formula::exact_stage() const {
  if (!finite()) throw usage_error("exact_stage is defined for finite disjunct streams only");
  return disjuncts_.empty() ? 0 : disjuncts_.size() - 1;
}

SigmaP1Family SigmaP1Family::uniform(std::string name, unsigned param_count, std::vector<Disjunct> disjuncts,
                                     std::vector<DisjunctGenerator> generators, Polarity pol) {
  SigmaP1Family f;
  f.name_ = std::move(name);
  f.param_count_ = param_count;
  f.polarity_ = pol;
  f.mode_ = Mode::Uniform;
  f.disjuncts_ = std::move(disjuncts);
  f.generators_ = std::move(generators);
  f.at(f.max_template_arity());  // validate the template once
  return f;
}

SigmaP1Family SigmaP1Family::listed(std::string name, unsigned param_count, std::vector<unsigned> arities,
                                    std::vector<Disjunct> disjuncts, std::vector<DisjunctGenerator> generators,
                                    Polarity pol) {
  SigmaP1Family f;
  f.name_ = std::move(name);
  f.param_count_ = param_count;
  f.polarity_ = pol;
  f.mode_ = Mode::Listed;
  std::sort(arities.begin(), arities.end());
  arities.erase(std::unique(arities.begin(), arities.end()), arities.end());
  f.arities_ = std::move(arities);
  f.disjuncts_ = std::move(disjuncts);
  f.generators_ = std::move(generators);
  for (unsigned a : f.arities_) f.at(a);
  return f;
}

SigmaP1Family SigmaP1Family::per_arity(std::string name, unsigned param_count,
                                       std::map<unsigned, SigmaP1Formula> formulas) {
  SigmaP1Family f;
  f.name_ = std::move(name);
  f.param_count_ = param_count;
  f.mode_ = Mode::PerArity;
  for (const auto& [arity, phi] : formulas) {
    if (phi.free_count() != arity) throw invariant_error("per-arity formula free count mismatch");
    if (phi.param_count() != param_count) throw invariant_error("per-arity formula parameter count mismatch");
  }
  f.formulas_ = std::move(formulas);
  return f;
}

SigmaP1Formula SigmaP1Family::at(unsigned arity) const {
  if (mode_ == Mode::PerArity) {
    auto it = formulas_.find(arity);
    if (it != formulas_.end()) return it->second;
    return SigmaP1Formula::empty(arity, param_count_);
  }
  if (mode_ == Mode::Listed && !std::binary_search(arities_.begin(), arities_.end(), arity))
    return SigmaP1Formula::empty(arity, param_count_);
  std::vector<Disjunct> ds;
  for (const auto& d : disjuncts_)
    if (emt::max_free_index_used(d) <= arity) ds.push_back(d);
  std::vector<DisjunctGenerator> gs;
  for (const auto& g : generators_)
    if (g.max_free_index_used() <= arity) gs.push_back(g);
  return SigmaP1Formula(arity, param_count_, std::move(ds), std::move(gs), polarity_);
}

std::vector<unsigned> SigmaP1Family::covered_arities(unsigned max_len) const {
  std::vector<unsigned> out;
  if (mode_ == Mode::PerArity) {
    for (const auto& [arity, phi] : formulas_)
      if (arity <= max_len && (phi.explicit_count() > 0 || !phi.generators().empty())) out.push_back(arity);
    return out;
  }
  for (unsigned a = 0; a <= max_len; ++a) {
    if (mode_ == Mode::Listed && !std::binary_search(arities_.begin(), arities_.end(), a)) continue;
    bool any = false;
    for (const auto& d : disjuncts_)
      if (emt::max_free_index_used(d) <= a) { any = true; break; }
    if (!any)
      for (const auto& g : generators_)
        if (g.max_free_index_used() <= a) { any = true; break; }
    if (any) out.push_back(a);
  }
  return out;
}

unsigned SigmaP1Family::max_template_arity() const {
  unsigned m = 0;
  for (const auto& d : disjuncts_) m = std::max(m, emt::max_free_index_used(d));
  for (const auto& g : generators_) m = std::max(m, g.max_free_index_used());
  return m;
}

// ---------------------------------------------------------------------------
// Satisfaction
// ---------------------------------------------------------------------------

namespace {

Elem resolve_arg(const ArgRef& r, const Tuple& assignment, const Tuple& bound, const Tuple& params) {
  switch (r.slot) {
    case ArgRef::Slot::Free: return assignment.at(r.index);
    case ArgRef::Slot::Bound: return bound.at(r.index);
    case ArgRef::Slot::Param: return params.at(r.index);
  }
  throw usage_error("bad slot");
}

bool atom_true(const PositiveWorld& w, const Atom& a, const Tuple& assignment, const Tuple& bound,
               const Tuple& params) {
  bool value;
  switch (a.kind) {
    case AtomKind::Eq: {
      Elem x = resolve_arg(a.args[0], assignment, bound, params);
      Elem y = resolve_arg(a.args[1], assignment, bound, params);
      value = w.eq(x, y);
      break;
    }
    case AtomKind::Neq: {
      Elem x = resolve_arg(a.args[0], assignment, bound, params);
      Elem y = resolve_arg(a.args[1], assignment, bound, params);
      value = w.neq(x, y);
      break;
    }
    case AtomKind::Rel: {
      auto idx = w.signature().index_of(a.rel);
      if (!idx) throw usage_error("unknown relation '" + a.rel + "'");
      if (w.signature().at(*idx).arity != a.args.size())
        throw usage_error("arity mismatch for relation '" + a.rel + "'");
      Tuple args(a.args.size());
      for (std::size_t k = 0; k < a.args.size(); ++k) args[k] = resolve_arg(a.args[k], assignment, bound, params);
      value = w.rel_holds(*idx, args);
      break;
    }
    default: value = false;
  }
  return a.negated ? !value : value;
}

}  // namespace

bool sat_disjunct(const PositiveWorld& w, const Disjunct& d, const Tuple& assignment, const Tuple& params) {
  const Elem n = w.universe_size();
  // Atoms become checkable once every bound variable they mention is set;
  // checking them as early as possible prunes the search.
  std::vector<unsigned> ready_at(d.conjuncts.size(), 0);
  for (std::size_t i = 0; i < d.conjuncts.size(); ++i)
    for (const auto& r : d.conjuncts[i].args)
      if (r.slot == ArgRef::Slot::Bound) ready_at[i] = std::max(ready_at[i], r.index + 1);

  Tuple bound;
  bound.reserve(d.bound_count);

  auto check_level = [&](unsigned level) {
    for (std::size_t i = 0; i < d.conjuncts.size(); ++i)
      if (ready_at[i] == level && !atom_true(w, d.conjuncts[i], assignment, bound, params)) return false;
    return true;
  };

  std::function<bool(unsigned)> go = [&](unsigned level) -> bool {
    if (!check_level(level)) return false;
    if (level == d.bound_count) return true;
    for (Elem v = 0; v < n; ++v) {
      bound.push_back(v);
      if (go(level + 1)) return true;
      bound.pop_back();
    }
    return false;
  };
  if (d.bound_count > 0 && n == 0) return false;
  return go(0);
}

bool sat_stage(const PositiveWorld& w, const SigmaP1Formula& f, const Tuple& assignment, const Tuple& params,
               std::uint64_t stage) {
  if (assignment.size() != f.free_count()) throw usage_error("assignment length does not match free variable count");
  if (params.size() != f.param_count()) throw usage_error("parameter length does not match parameter count");
  for (std::uint64_t i = 0; i <= stage; ++i) {
    auto d = f.stream_at(i);
    if (!d) break;
    if (sat_disjunct(w, *d, assignment, params)) return true;
  }
  return false;
}

std::set<Tuple> define_relation(const PositiveWorld& w, const SigmaP1Family& fam, const Tuple& params,
                                unsigned max_len, std::uint64_t stage) {
  std::set<Tuple> out;
  const Elem n = w.universe_size();
  for (unsigned a : fam.covered_arities(max_len)) {
    SigmaP1Formula phi = fam.at(a);
    Tuple t(a, 0);
    bool done = (n == 0 && a > 0);
    while (!done) {
      if (sat_stage(w, phi, t, params, stage)) out.insert(t);
      std::size_t k = a;
      while (true) {
        if (k == 0) { done = true; break; }
        --k;
        if (++t[k] < n) break;
        t[k] = 0;
      }
    }
  }
  return out;
}

}  // namespace emt
