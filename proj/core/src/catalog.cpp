#include "emt/catalog.hpp"

#include <algorithm>
#include <functional>

#include "emt/errors.hpp"

namespace emt {

namespace {

constexpr std::uint64_t kRowGuard = 2'000'000;

int kind_rank(const Atom& a, const Signature& sig) {
  switch (a.kind) {
    case AtomKind::Eq: return 0;
    case AtomKind::Neq: return 1;
    case AtomKind::Rel: {
      auto idx = sig.index_of(a.rel);
      return 2 + static_cast<int>(idx.value_or(sig.size()));
    }
  }
  return 0;
}

bool atom_less(const Atom& a, const Atom& b, const Signature& sig) {
  int ra = kind_rank(a, sig), rb = kind_rank(b, sig);
  if (ra != rb) return ra < rb;
  return a.args < b.args;
}

// Lexicographically next k-combination of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] != i + n - k) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// All atoms over free vars x1..xj and bound vars y1..yb in walk order.
std::vector<Atom> atom_pool(const Signature& sig, unsigned j, unsigned b) {
  std::vector<ArgRef> vars;
  for (unsigned k = 0; k < j; ++k) vars.push_back({ArgRef::Slot::Free, k});
  for (unsigned k = 0; k < b; ++k) vars.push_back({ArgRef::Slot::Bound, k});
  std::vector<Atom> out;
  auto add_tuples = [&](AtomKind kind, const std::string& rel, unsigned arity) {
    if (vars.empty()) return;
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
      Atom a;
      a.kind = kind;
      a.rel = rel;
      for (std::size_t k = 0; k < arity; ++k) a.args.push_back(vars[idx[k]]);
      out.push_back(std::move(a));
      std::size_t k = arity;
      bool done = false;
      while (true) {
        if (k == 0) { done = true; break; }
        --k;
        if (++idx[k] < vars.size()) break;
        idx[k] = 0;
      }
      if (done) break;
    }
  };
  add_tuples(AtomKind::Eq, "", 2);
  add_tuples(AtomKind::Neq, "", 2);
  for (const auto& r : sig.relations()) add_tuples(AtomKind::Rel, r.name, r.arity);
  return out;
}

bool uses_all_bound(const std::vector<Atom>& atoms, unsigned b) {
  std::vector<bool> used(b, false);
  for (const auto& a : atoms)
    for (const auto& r : a.args)
      if (r.slot == ArgRef::Slot::Bound) used[r.index] = true;
  return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
}

std::vector<Atom> relabel_sorted(const std::vector<Atom>& atoms, const std::vector<unsigned>& perm,
                                 const Signature& sig) {
  std::vector<Atom> out = atoms;
  for (auto& a : out)
    for (auto& r : a.args)
      if (r.slot == ArgRef::Slot::Bound) r.index = perm[r.index];
  std::sort(out.begin(), out.end(), [&](const Atom& x, const Atom& y) { return atom_less(x, y, sig); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool atom_list_less(const std::vector<Atom>& a, const std::vector<Atom>& b, const Signature& sig) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [&](const Atom& x, const Atom& y) { return atom_less(x, y, sig); });
}

// Minimum over bound-variable relabelings of the sorted duplicate-free
// conjunct list; the walk enumerates exactly the fixed points of this map.
std::vector<Atom> min_relabeling(const std::vector<Atom>& atoms, unsigned b, const Signature& sig) {
  std::vector<unsigned> perm(b);
  for (unsigned k = 0; k < b; ++k) perm[k] = k;
  std::vector<Atom> best = relabel_sorted(atoms, perm, sig);
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto cand = relabel_sorted(atoms, perm, sig);
    if (atom_list_less(cand, best, sig)) best = cand;
  }
  return best;
}

}  // namespace

FormulaCatalog::FormulaCatalog(Signature sig) : sig_(std::move(sig)) {}

const FormulaCatalog::Row& FormulaCatalog::row(std::uint64_t r) const {
  ensure_rows(r + 1);
  return rows_[r];
}

SigmaP1Formula FormulaCatalog::formula_at(std::uint64_t i, unsigned j) const {
  if (j == 0) return SigmaP1Formula::empty(0);  // no 0-ary templates in the walk
  ensure_arity_rows(j, i + 1);
  return rows_[by_arity_.at(j)[i]].formula;
}

std::uint64_t FormulaCatalog::global_row_of(std::uint64_t i, unsigned j) const {
  if (j == 0) throw usage_error("the catalog has no 0-ary rows");
  ensure_arity_rows(j, i + 1);
  return by_arity_.at(j)[i];
}

void FormulaCatalog::ensure_rows(std::uint64_t count) const {
  while (rows_.size() < count) {
    if (rows_.size() > kRowGuard) throw usage_error("catalog row guard exceeded");
    generate_weight_level();
  }
}

void FormulaCatalog::ensure_arity_rows(unsigned arity, std::uint64_t count) const {
  while (by_arity_[arity].size() < count) {
    if (rows_.size() > kRowGuard) throw usage_error("catalog row guard exceeded");
    generate_weight_level();
  }
}

void FormulaCatalog::generate_weight_level() const {
  const std::uint64_t W = next_weight_++;
  for (unsigned j = 1; j + 1 <= W; ++j) {
    const unsigned B = static_cast<unsigned>(W - j);
    // Grow the per-weight disjunct pools for arity j up to weight B.
    auto& pools = pools_[j];
    while (pools.size() < B) {
      const unsigned w = static_cast<unsigned>(pools.size()) + 1;  // weight being generated
      std::vector<Disjunct> level;
      for (unsigned b = 0; 2 * b + 1 <= w; ++b) {
        const unsigned natoms = w - 2 * b;
        auto atoms = atom_pool(sig_, j, b);
        if (atoms.size() < natoms) continue;
        std::vector<std::size_t> comb(natoms);
        for (unsigned k = 0; k < natoms; ++k) comb[k] = k;
        do {
          std::vector<Atom> chosen;
          chosen.reserve(natoms);
          for (std::size_t idx : comb) chosen.push_back(atoms[idx]);
          if (uses_all_bound(chosen, b) && min_relabeling(chosen, b, sig_) == chosen) {
            Disjunct d;
            d.bound_count = b;
            d.conjuncts = std::move(chosen);
            level.push_back(std::move(d));
          }
        } while (next_combination(comb, atoms.size()));
      }
      pools.push_back(std::move(level));
    }

    // Flat id order: (weight, index within weight).
    std::vector<const Disjunct*> flat;
    std::vector<unsigned> weights;
    for (unsigned w = 1; w <= B; ++w)
      for (const auto& d : pools[w - 1]) {
        flat.push_back(&d);
        weights.push_back(w);
      }

    std::vector<std::size_t> chosen_ids;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t start, unsigned remaining) {
      for (std::size_t id = start; id < flat.size(); ++id) {
        if (weights[id] > remaining) break;  // flat is weight-ascending
        chosen_ids.push_back(id);
        if (weights[id] == remaining) {
          unsigned maxfree = 0;
          for (std::size_t cid : chosen_ids) maxfree = std::max(maxfree, max_free_index_used(*flat[cid]));
          if (maxfree == j) {
            std::vector<Disjunct> body;
            body.reserve(chosen_ids.size());
            for (std::size_t cid : chosen_ids) body.push_back(*flat[cid]);
            rows_.push_back(Row{j, SigmaP1Formula(j, 0, std::move(body))});
            by_arity_[j].push_back(rows_.size() - 1);
          }
        } else {
          rec(id + 1, remaining - weights[id]);
        }
        chosen_ids.pop_back();
      }
    };
    rec(0, B);
  }
}

std::vector<Disjunct> FormulaCatalog::canonicalize(const std::vector<Disjunct>& disjuncts) const {
  std::vector<Disjunct> out;
  for (const auto& d : disjuncts) {
    if (!uses_all_bound(d.conjuncts, d.bound_count))
      throw usage_error("catalog normal form requires every bound variable to be used");
    Disjunct c;
    c.bound_count = d.bound_count;
    c.conjuncts = min_relabeling(d.conjuncts, d.bound_count, sig_);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::uint64_t> FormulaCatalog::locate(const std::vector<Disjunct>& disjuncts, unsigned arity,
                                                    std::uint64_t scan_bound) const {
  auto target = canonicalize(disjuncts);
  unsigned maxfree = 0;
  for (const auto& d : target) maxfree = std::max(maxfree, max_free_index_used(d));
  if (maxfree != arity) return std::nullopt;
  for (std::uint64_t r = 0; r < scan_bound; ++r) {
    const Row& row_r = row(r);
    if (row_r.arity != arity) continue;
    auto body = row_r.formula.explicit_disjuncts();
    std::sort(body.begin(), body.end());
    if (body == target) return r;
  }
  return std::nullopt;
}

std::set<std::uint64_t> sigma1p_type(const PositiveWorld& w, const FormulaCatalog& catalog, const Tuple& abar,
                                     std::uint64_t catalog_depth, std::uint64_t stage) {
  for (Elem e : abar)
    if (e >= w.universe_size()) throw usage_error("tuple entry outside universe");
  std::set<std::uint64_t> out;
  const unsigned j = static_cast<unsigned>(abar.size());
  for (std::uint64_t i = 0; i <= catalog_depth; ++i) {
    SigmaP1Formula phi = catalog.formula_at(i, j);
    if (sat_stage(w, phi, abar, {}, stage)) out.insert(i);
  }
  return out;
}

}  // namespace emt
