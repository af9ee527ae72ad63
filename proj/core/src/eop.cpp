#include "emt/eop.hpp"

#include <algorithm>
#include <sstream>

#include "emt/errors.hpp"

namespace emt {

Axiom Axiom::make(Code conclusion, std::vector<Code> premises) {
  std::sort(premises.begin(), premises.end());
  premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
  return Axiom{std::move(premises), conclusion};
}

Code axiom_code(const Axiom& a) { return pair(a.conclusion, tuplecode(a.premises)); }

EnumOperator EnumOperator::from_axioms(std::vector<Axiom> axioms, StagePolicy policy) {
  for (auto& a : axioms) a = Axiom::make(a.conclusion, a.premises);
  std::sort(axioms.begin(), axioms.end());
  axioms.erase(std::unique(axioms.begin(), axioms.end()), axioms.end());
  EnumOperator op;
  op.axioms_ = std::move(axioms);
  op.policy_ = policy;
  return op;
}

std::vector<Axiom> EnumOperator::at_stage(std::optional<std::uint64_t> stage) const {
  if (!stage || policy_ == StagePolicy::AllAtOnce) return axioms_;
  std::vector<Axiom> out;
  for (const auto& a : axioms_) {
    Code c;
    try {
      c = axiom_code(a);
    } catch (const coding_error&) {
      continue;  // code space exceeded: never exposed under the bound convention
    }
    if (c <= *stage) out.push_back(a);
  }
  return out;
}

std::set<Code> apply(const EnumOperator& op, const std::set<Code>& X, std::optional<std::uint64_t> stage) {
  std::set<Code> out;
  for (const auto& a : op.at_stage(stage)) {
    bool fires = std::all_of(a.premises.begin(), a.premises.end(), [&](Code d) { return X.count(d) > 0; });
    if (fires) out.insert(a.conclusion);
  }
  return out;
}

EnumOperator catalog_operator(Code e) {
  std::vector<Axiom> axioms;
  auto codes = decode_tuple(e);
  if (codes) {
    for (Code ac : *codes) {
      auto [conclusion, premcode] = unpair(ac);
      auto prems = decode_tuple(premcode);
      if (!prems) continue;  // malformed tail: skip this axiom
      axioms.push_back(Axiom::make(conclusion, std::move(*prems)));
    }
  }
  return EnumOperator::from_axioms(std::move(axioms), EnumOperator::StagePolicy::ByCode);
}

std::optional<Code> operator_index(const EnumOperator& op) {
  try {
    std::vector<Code> codes;
    codes.reserve(op.axioms().size());
    for (const auto& a : op.axioms()) codes.push_back(axiom_code(a));
    std::sort(codes.begin(), codes.end());
    return tuplecode(codes);
  } catch (const coding_error&) {
    return std::nullopt;
  }
}

std::set<Code> kleene_set_stage(const std::set<Code>& X, std::uint64_t stage) {
  std::set<Code> out;
  for (Code x = 0; x <= stage; ++x) {
    EnumOperator op = catalog_operator(x);
    if (apply(op, X, stage).count(x)) out.insert(x);
  }
  return out;
}

std::set<Code> JumpSplit::join(const std::set<Code>& X) const {
  std::set<Code> out;
  for (Code a : X) out.insert(join_left(a));
  for (Code k : complement_candidates) out.insert(join_right(k));
  return out;
}

JumpSplit enumeration_jump_stage(const std::set<Code>& X, std::uint64_t stage) {
  JumpSplit split;
  split.confirmed_k = kleene_set_stage(X, stage);
  for (Code x = 0; x <= stage; ++x)
    if (!split.confirmed_k.count(x)) split.complement_candidates.insert(x);
  return split;
}

EnumOperator parse_operator(const std::string& text) {
  std::vector<Axiom> axioms;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') continue;
    if (head != "axiom") throw parse_error("expected 'axiom'", lineno, 1);
    Code conclusion;
    std::string colon;
    if (!(ls >> conclusion >> colon) || colon != ":")
      throw parse_error("expected 'axiom <x> : <premises>'", lineno, 1);
    std::vector<Code> prems;
    Code d;
    while (ls >> d) prems.push_back(d);
    if (!ls.eof()) throw parse_error("bad premise list", lineno, 1);
    axioms.push_back(Axiom::make(conclusion, std::move(prems)));
  }
  return EnumOperator::from_axioms(std::move(axioms), EnumOperator::StagePolicy::ByCode);
}

std::string write_operator(const EnumOperator& op) {
  std::ostringstream out;
  out << "# emt eop v1\n";
  for (const auto& a : op.axioms()) {
    out << "axiom " << a.conclusion << " :";
    for (Code d : a.premises) out << ' ' << d;
    out << '\n';
  }
  return out.str();
}

}  // namespace emt
