#include "emt/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "emt/errors.hpp"

namespace emt {

std::set<Code> PositiveDiagram::at_stage(Code s) const {
  std::set<Code> out;
  for (Code c : codes_) {
    if (c > s) break;
    out.insert(c);
  }
  return out;
}

Code PositiveDiagram::stabilization_stage() const {
  return codes_.empty() ? 0 : *codes_.rbegin();
}

namespace {

template <class World>
std::set<Code> diagram_codes(const World& w) {
  std::set<Code> out;
  const Elem n = w.universe_size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      if (w.eq(a, b)) out.insert(encode_fact(kFactEq, {a, b}));
      else out.insert(encode_fact(kFactNeq, {a, b}));
    }
  for (std::size_t r = 0; r < w.signature().size(); ++r) {
    const unsigned arity = w.signature().at(r).arity;
    Tuple t(arity, 0);
    if (n == 0) continue;
    bool done = false;
    while (!done) {
      if (w.rel_holds(r, t)) out.insert(encode_fact(relation_kind(r), t));
      std::size_t k = arity;
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

}  // namespace

PositiveDiagram positive_diagram(const FiniteStructure& s) {
  // Finite structures hold their facts explicitly, so walk the fact sets
  // instead of all tuples.
  std::set<Code> out;
  const Elem n = s.universe_size();
  for (Elem a = 0; a < n; ++a) out.insert(encode_fact(kFactEq, {a, a}));
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (a != b) out.insert(encode_fact(kFactNeq, {a, b}));
  for (std::size_t r = 0; r < s.signature().size(); ++r)
    for (const auto& t : s.facts(r)) out.insert(encode_fact(relation_kind(r), t));
  return PositiveDiagram(std::move(out));
}

PositiveDiagram positive_diagram(const PulledStructure& s) {
  return PositiveDiagram(diagram_codes(s));
}

std::set<Code> restriction_diagram(const FiniteStructure& s, const Tuple& abar) {
  for (Elem e : abar)
    if (e >= s.universe_size()) throw usage_error("tuple entry " + std::to_string(e) + " outside universe");
  std::set<Elem> universe(abar.begin(), abar.end());
  std::set<Code> out;
  for (Elem a : universe) out.insert(encode_fact(kFactEq, {a, a}));
  for (Elem a : universe)
    for (Elem b : universe)
      if (a != b) out.insert(encode_fact(kFactNeq, {a, b}));
  const std::size_t cut = std::min<std::size_t>(abar.size(), s.signature().size());
  for (std::size_t r = 0; r < cut; ++r)
    for (const auto& t : s.facts(r)) {
      bool inside = std::all_of(t.begin(), t.end(), [&](Elem e) { return universe.count(e) > 0; });
      if (inside) out.insert(encode_fact(relation_kind(r), t));
    }
  return out;
}

std::set<Code> partial_pullback(const FiniteStructure& s, const Tuple& abar) {
  for (Elem e : abar)
    if (e >= s.universe_size()) throw usage_error("tuple entry " + std::to_string(e) + " outside universe");
  std::set<Code> out;
  const Elem m = static_cast<Elem>(abar.size());
  for (Elem i = 0; i < m; ++i)
    for (Elem j = 0; j < m; ++j) {
      if (abar[i] == abar[j]) out.insert(encode_fact(kFactEq, {i, j}));
      else out.insert(encode_fact(kFactNeq, {i, j}));
    }
  const std::size_t cut = std::min<std::size_t>(abar.size(), s.signature().size());
  for (std::size_t r = 0; r < cut; ++r) {
    const unsigned arity = s.signature().at(r).arity;
    if (m == 0) continue;
    Tuple idx(arity, 0);
    bool done = false;
    while (!done) {
      Tuple mapped(arity);
      for (unsigned k = 0; k < arity; ++k) mapped[k] = abar[idx[k]];
      if (s.rel_holds(r, mapped)) out.insert(encode_fact(relation_kind(r), idx));
      std::size_t k = arity;
      while (true) {
        if (k == 0) { done = true; break; }
        --k;
        if (++idx[k] < m) break;
        idx[k] = 0;
      }
    }
  }
  return out;
}

PulledStructure pullback_structure(const NumberedEnumeration& f, const FiniteStructure& s) {
  return pullback_structure(f, s, static_cast<Elem>(f.window()));
}

PulledStructure pullback_structure(const NumberedEnumeration& f, const FiniteStructure& s, Elem m) {
  std::vector<Elem> image(m);
  std::vector<bool> hit(s.universe_size(), false);
  for (Elem i = 0; i < m; ++i) {
    Elem v = f(i);
    if (v >= s.universe_size()) throw invariant_error("enumeration value " + std::to_string(v) + " outside universe");
    image[i] = v;
    hit[v] = true;
  }
  for (Elem e = 0; e < s.universe_size(); ++e)
    if (!hit[e]) throw invariant_error("enumeration misses element " + std::to_string(e));
  return PulledStructure(s, std::move(image));
}

FiniteStructure canonical_copy(const PulledStructure& pb) {
  const Elem m = pb.universe_size();
  // Least representative of every congruence class.
  std::vector<Elem> rep(m);
  for (Elem i = 0; i < m; ++i) {
    rep[i] = i;
    for (Elem j = 0; j < i; ++j)
      if (pb.eq(i, j)) { rep[i] = rep[j]; break; }
  }
  std::vector<Elem> reps;
  for (Elem i = 0; i < m; ++i)
    if (rep[i] == i) reps.push_back(i);
  std::map<Elem, Elem> renumber;
  for (Elem k = 0; k < reps.size(); ++k) renumber[reps[k]] = k;

  // The congruence must respect every relation.
  for (std::size_t r = 0; r < pb.signature().size(); ++r) {
    for (const auto& t : pb.facts(r)) {
      Tuple reduced(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) reduced[k] = rep[t[k]];
      if (!pb.rel_holds(r, reduced))
        throw invariant_error("congruence does not respect " + pb.signature().at(r).name);
    }
  }

  FiniteStructure out(pb.signature(), static_cast<Elem>(reps.size()));
  for (std::size_t r = 0; r < pb.signature().size(); ++r)
    for (const auto& t : pb.facts(r)) {
      Tuple mapped(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) mapped[k] = renumber.at(rep[t[k]]);
      out.add_fact(r, std::move(mapped));
    }
  return out;
}

}  // namespace emt
