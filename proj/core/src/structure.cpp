#include "emt/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "emt/errors.hpp"

namespace emt {

Signature::Signature(std::vector<RelationSymbol> rels) : rels_(std::move(rels)) {
  std::set<std::string> seen;
  for (const auto& r : rels_) {
    if (r.arity == 0) throw invariant_error("zero-arity relation '" + r.name + "' is not allowed");
    if (r.name.empty()) throw invariant_error("relation with empty name");
    if (!seen.insert(r.name).second) throw invariant_error("duplicate relation name '" + r.name + "'");
  }
}

std::optional<std::size_t> Signature::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < rels_.size(); ++i)
    if (rels_[i].name == name) return i;
  return std::nullopt;
}

FiniteStructure::FiniteStructure(Signature sig, Elem size)
    : sig_(std::move(sig)), size_(size), facts_(sig_.size()) {}

FiniteStructure::FiniteStructure(Signature sig, Elem size, std::vector<std::set<Tuple>> facts)
    : sig_(std::move(sig)), size_(size), facts_(std::move(facts)) {
  if (facts_.size() != sig_.size()) throw invariant_error("fact table count does not match signature");
  for (std::size_t i = 0; i < facts_.size(); ++i)
    for (const auto& t : facts_[i]) {
      if (t.size() != sig_.at(i).arity) throw invariant_error("arity mismatch in facts of " + sig_.at(i).name);
      for (Elem e : t)
        if (e >= size_) throw invariant_error("fact entry outside universe in " + sig_.at(i).name);
    }
}

void FiniteStructure::add_fact(std::size_t rel, Tuple args) {
  if (rel >= sig_.size()) throw usage_error("relation index out of range");
  if (args.size() != sig_.at(rel).arity)
    throw invariant_error("arity mismatch for " + sig_.at(rel).name + ": got " + std::to_string(args.size()));
  for (Elem e : args)
    if (e >= size_) throw invariant_error("fact entry " + std::to_string(e) + " outside universe");
  facts_[rel].insert(std::move(args));
}

void FiniteStructure::add_fact(const std::string& rel, Tuple args) {
  auto idx = sig_.index_of(rel);
  if (!idx) throw usage_error("unknown relation '" + rel + "'");
  add_fact(*idx, std::move(args));
}

bool FiniteStructure::rel_holds(std::size_t rel, const Tuple& args) const {
  return facts_.at(rel).count(args) > 0;
}

PulledStructure::PulledStructure(const FiniteStructure& source, std::vector<Elem> image)
    : sig_(source.signature()), size_(static_cast<Elem>(image.size())), image_(std::move(image)) {
  for (Elem e : image_)
    if (e >= source.universe_size()) throw invariant_error("enumeration value outside source universe");
  facts_.resize(sig_.size());
  for (std::size_t r = 0; r < sig_.size(); ++r) {
    const unsigned a = sig_.at(r).arity;
    Tuple idx(a, 0);
    // enumerate all index tuples of length a over {0..m-1}
    bool done = size_ == 0 && a > 0;
    if (a == 0) continue;
    while (!done) {
      Tuple mapped(a);
      for (unsigned k = 0; k < a; ++k) mapped[k] = image_[idx[k]];
      if (source.rel_holds(r, mapped)) facts_[r].insert(idx);
      unsigned k = a;
      while (k > 0) {
        --k;
        if (++idx[k] < size_) break;
        idx[k] = 0;
        if (k == 0) done = true;
      }
    }
  }
}

bool PulledStructure::rel_holds(std::size_t rel, const Tuple& args) const {
  return facts_.at(rel).count(args) > 0;
}

StagedStructure StagedStructure::constant(FiniteStructure s) {
  return StagedStructure("constant", [s = std::move(s)](std::uint64_t) { return s; });
}

StagedStructure StagedStructure::cycles(std::vector<bool> bits) {
  std::string desc = "cycles ";
  for (bool b : bits) desc += b ? '1' : '0';
  auto gen = [bits = std::move(bits)](std::uint64_t stage) {
    Signature sig({{"E", 2}});
    std::uint64_t circles = bits.empty() ? 0 : std::min<std::uint64_t>(stage + 1, bits.size());
    Elem n = 1;
    for (std::uint64_t c = 0; c < circles; ++c) n += static_cast<Elem>(c + 1);
    FiniteStructure s(sig, n);
    s.add_fact(0, {0, 0});  // looped apex
    Elem next = 1;
    for (std::uint64_t c = 0; c < circles; ++c) {
      Elem first = next;
      Elem len = static_cast<Elem>(c + 1);
      for (Elem k = 0; k < len; ++k) s.add_fact(0, {first + k, first + (k + 1) % len});
      if (bits[c]) s.add_fact(0, {0, first});
      next += len;
    }
    return s;
  };
  return StagedStructure(desc, std::move(gen));
}

NumberedEnumeration::NumberedEnumeration(Tuple prefix) : prefix_(std::move(prefix)) {
  if (prefix_.empty()) throw usage_error("enumeration prefix must be nonempty");
}

NumberedEnumeration NumberedEnumeration::identity(Elem n) {
  if (n == 0) throw usage_error("identity enumeration needs a nonempty universe");
  Tuple p(n);
  std::iota(p.begin(), p.end(), 0);
  return NumberedEnumeration(std::move(p));
}

void NumberedEnumeration::require_surjective(Elem n) const {
  std::vector<bool> hit(n, false);
  for (Elem v : prefix_)
    if (v < n) hit[v] = true;
  for (Elem e = 0; e < n; ++e)
    if (!hit[e]) throw invariant_error("enumeration misses element " + std::to_string(e));
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

unsigned long parse_number(const std::string& t, std::size_t lineno, std::size_t col) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(t, &used);
    if (used != t.size()) throw parse_error("trailing characters in number '" + t + "'", lineno, col);
    return v;
  } catch (const parse_error&) {
    throw;
  } catch (...) {
    throw parse_error("expected a number, got '" + t + "'", lineno, col);
  }
}

}  // namespace

ParsedStructureFile parse_structure_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  std::vector<RelationSymbol> rels;
  std::optional<Elem> universe;
  std::vector<std::pair<std::string, Tuple>> facts;
  std::optional<std::vector<bool>> cycle_bits;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "signature") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto slash = toks[i].find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 >= toks[i].size())
          throw parse_error("expected <name>/<arity>", lineno, i);
        RelationSymbol r;
        r.name = toks[i].substr(0, slash);
        try {
          r.arity = static_cast<unsigned>(parse_number(toks[i].substr(slash + 1), lineno, i));
        } catch (const parse_error&) {
          throw;
        } catch (...) {
          throw parse_error("bad arity in '" + toks[i] + "'", lineno, i);
        }
        if (r.arity == 0) throw parse_error("zero-arity relations are not allowed", lineno, i);
        rels.push_back(std::move(r));
      }
    } else if (head == "universe") {
      if (toks.size() != 2) throw parse_error("universe takes one argument", lineno, 1);
      universe = static_cast<Elem>(parse_number(toks[1], lineno, 1));
    } else if (head == "fact") {
      if (toks.size() < 3) throw parse_error("fact needs a relation and arguments", lineno, 1);
      Tuple args;
      for (std::size_t i = 2; i < toks.size(); ++i) args.push_back(static_cast<Elem>(parse_number(toks[i], lineno, i)));
      facts.emplace_back(toks[1], std::move(args));
    } else if (head == "builtin") {
      if (toks.size() != 3 || toks[1] != "cycles") throw parse_error("only 'builtin cycles <bits>' is supported", lineno, 1);
      std::vector<bool> bits;
      for (char c : toks[2]) {
        if (c != '0' && c != '1') throw parse_error("cycle bits must be 0/1", lineno, 2);
        bits.push_back(c == '1');
      }
      cycle_bits = std::move(bits);
    } else {
      throw parse_error("unknown directive '" + head + "'", lineno, 0);
    }
  }

  ParsedStructureFile out;
  if (cycle_bits) {
    if (universe || !facts.empty() || !rels.empty())
      throw parse_error("builtin cycles cannot be combined with explicit directives", lineno, 0);
    out.staged = StagedStructure::cycles(*cycle_bits);
    return out;
  }
  if (!universe) throw parse_error("missing 'universe' directive", lineno, 0);
  FiniteStructure s{Signature(std::move(rels)), *universe};
  for (auto& [name, args] : facts) s.add_fact(name, std::move(args));
  out.finite = std::move(s);
  return out;
}

FiniteStructure parse_structure(const std::string& text) {
  auto parsed = parse_structure_file(text);
  if (!parsed.finite) throw usage_error("expected a finite structure, got a staged builtin");
  return *parsed.finite;
}

std::string write_structure(const FiniteStructure& s) {
  std::ostringstream out;
  out << "# emt pstruct v1\n";
  out << "signature";
  for (const auto& r : s.signature().relations()) out << ' ' << r.name << '/' << r.arity;
  out << '\n';
  out << "universe " << s.universe_size() << '\n';
  for (std::size_t r = 0; r < s.signature().size(); ++r)
    for (const auto& t : s.facts(r)) {
      out << "fact " << s.signature().at(r).name;
      for (Elem e : t) out << ' ' << e;
      out << '\n';
    }
  return out.str();
}

bool is_isomorphism(const FiniteStructure& a, const FiniteStructure& b, const std::vector<Elem>& map) {
  if (a.signature() != b.signature()) return false;
  if (a.universe_size() != b.universe_size() || map.size() != a.universe_size()) return false;
  std::vector<bool> hit(b.universe_size(), false);
  for (Elem v : map) {
    if (v >= b.universe_size() || hit[v]) return false;
    hit[v] = true;
  }
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    if (a.facts(r).size() != b.facts(r).size()) return false;
    for (const auto& t : a.facts(r)) {
      Tuple m(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) m[k] = map[t[k]];
      if (!b.rel_holds(r, m)) return false;
    }
  }
  return true;
}

std::optional<std::vector<Elem>> find_isomorphism(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.signature() != b.signature() || a.universe_size() != b.universe_size()) return std::nullopt;
  std::vector<Elem> perm(a.universe_size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_isomorphism(a, b, perm)) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::vector<std::vector<Elem>> automorphisms(const FiniteStructure& a) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> perm(a.universe_size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_isomorphism(a, a, perm)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace emt
