#include <cctype>
#include <sstream>

#include "emt/errors.hpp"
#include "emt/formula.hpp"

namespace emt {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer. One line at a time; `#` starts a comment. The tokens `!` and
// `->` are rejected outright: positivity of the language is syntactic.
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind { Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Dot, DotDot, Amp, EqSign, Neq, Colon, Plus, Minus, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint64_t number = 0;
  std::size_t col = 0;
};

std::vector<Token> lex_line(const std::string& line, std::size_t lineno, bool allow_not) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto bail = [&](const std::string& msg, std::size_t col) { throw parse_error(msg, lineno, col + 1); };
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t col = i;
    if (c == '!') bail("negation token '!' is not allowed in positive formulas", col);
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>')
      bail("implication token '->' is not allowed in positive formulas", col);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      std::string word = line.substr(i, j - i);
      if (word == "not" && !allow_not)
        bail("negation keyword 'not' is not allowed in positive formulas", col);
      out.push_back({Token::Kind::Ident, word, 0, col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      Token t{Token::Kind::Number, line.substr(i, j - i), 0, col};
      t.number = std::stoull(t.text);
      out.push_back(t);
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Token::Kind::LParen, "(", 0, col}); ++i; break;
      case ')': out.push_back({Token::Kind::RParen, ")", 0, col}); ++i; break;
      case '[': out.push_back({Token::Kind::LBracket, "[", 0, col}); ++i; break;
      case ']': out.push_back({Token::Kind::RBracket, "]", 0, col}); ++i; break;
      case ',': out.push_back({Token::Kind::Comma, ",", 0, col}); ++i; break;
      case '&': out.push_back({Token::Kind::Amp, "&", 0, col}); ++i; break;
      case '=': out.push_back({Token::Kind::EqSign, "=", 0, col}); ++i; break;
      case ':': out.push_back({Token::Kind::Colon, ":", 0, col}); ++i; break;
      case '+': out.push_back({Token::Kind::Plus, "+", 0, col}); ++i; break;
      case '-': out.push_back({Token::Kind::Minus, "-", 0, col}); ++i; break;
      case '.':
        if (i + 1 < line.size() && line[i + 1] == '.') { out.push_back({Token::Kind::DotDot, "..", 0, col}); i += 2; }
        else { out.push_back({Token::Kind::Dot, ".", 0, col}); ++i; }
        break;
      case '<':
        if (i + 1 < line.size() && line[i + 1] == '>') { out.push_back({Token::Kind::Neq, "<>", 0, col}); i += 2; }
        else bail("unexpected '<'", col);
        break;
      default: bail(std::string("unexpected character '") + c + "'", col);
    }
  }
  out.push_back({Token::Kind::End, "", 0, line.size()});
  return out;
}

// Cursor over one line's tokens.
struct Cursor {
  const std::vector<Token>* toks;
  std::size_t pos = 0;
  std::size_t lineno = 0;

  const Token& peek() const { return (*toks)[pos]; }
  const Token& get() { return (*toks)[pos++]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, lineno, peek().col + 1); }
  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    ++pos;
  }
};

// variable classification: x<digits> free, z<digits> param, rest bound names
std::optional<std::pair<ArgRef::Slot, unsigned>> classify_var(const std::string& w) {
  if (w.size() < 2) return std::nullopt;
  if (w[0] != 'x' && w[0] != 'z') return std::nullopt;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(w[i]))) return std::nullopt;
  unsigned k = static_cast<unsigned>(std::stoul(w.substr(1)));
  if (k == 0) return std::nullopt;
  return std::make_pair(w[0] == 'x' ? ArgRef::Slot::Free : ArgRef::Slot::Param, k - 1);
}

AffineExpr parse_affine(Cursor& c, const std::string& nvar, const std::string& repvar) {
  AffineExpr e;
  const Token& t = c.peek();
  if (t.kind == Token::Kind::Number) {
    e.base = AffineExpr::Base::Const;
    e.offset = static_cast<long long>(c.get().number);
  } else if (t.kind == Token::Kind::Ident) {
    if (t.text == nvar) e.base = AffineExpr::Base::N;
    else if (!repvar.empty() && t.text == repvar) e.base = AffineExpr::Base::RepVar;
    else c.fail("unknown index variable '" + t.text + "'");
    c.get();
    if (c.peek().kind == Token::Kind::Plus) {
      c.get();
      if (c.peek().kind != Token::Kind::Number) c.fail("expected a number after '+'");
      e.offset = static_cast<long long>(c.get().number);
    } else if (c.peek().kind == Token::Kind::Minus) {
      c.get();
      if (c.peek().kind != Token::Kind::Number) c.fail("expected a number after '-'");
      e.offset = -static_cast<long long>(c.get().number);
    }
  } else {
    c.fail("expected an index expression");
  }
  return e;
}

TemplateArg parse_template_arg(Cursor& c, const std::string& nvar, const std::string& repvar) {
  if (c.peek().kind != Token::Kind::Ident) c.fail("expected a variable");
  std::string w = c.get().text;
  TemplateArg a;
  if (auto cls = classify_var(w)) {
    a.slot = cls->first;
    a.index = cls->second;
    if (c.peek().kind == Token::Kind::LBracket) c.fail("free and parameter variables cannot be indexed");
    return a;
  }
  a.slot = ArgRef::Slot::Bound;
  a.bound_name = w;
  if (c.peek().kind == Token::Kind::LBracket) {
    c.get();
    a.bound_indexed = true;
    a.bound_index = parse_affine(c, nvar, repvar);
    c.expect(Token::Kind::RBracket, "']'");
  }
  return a;
}

TemplateAtom parse_template_atom(Cursor& c, const std::string& nvar, const std::string& repvar, bool allow_not) {
  TemplateAtom atom;
  if (allow_not && c.peek().kind == Token::Kind::Ident && c.peek().text == "not") {
    c.get();
    atom.negated = true;
  }
  // Either rel(args...) or <arg> = <arg> / <arg> <> <arg>.
  if (c.peek().kind != Token::Kind::Ident) c.fail("expected an atom");
  // Lookahead: identifier followed by '(' is a relation application.
  std::size_t save = c.pos;
  std::string first = c.get().text;
  if (c.peek().kind == Token::Kind::LParen && !classify_var(first)) {
    atom.kind = AtomKind::Rel;
    atom.rel = first;
    c.get();
    if (c.peek().kind == Token::Kind::RParen) c.fail("relation atoms need at least one argument");
    while (true) {
      atom.args.push_back(parse_template_arg(c, nvar, repvar));
      if (c.peek().kind == Token::Kind::Comma) { c.get(); continue; }
      break;
    }
    c.expect(Token::Kind::RParen, "')'");
    return atom;
  }
  c.pos = save;
  atom.args.push_back(parse_template_arg(c, nvar, repvar));
  if (c.peek().kind == Token::Kind::EqSign) atom.kind = AtomKind::Eq;
  else if (c.peek().kind == Token::Kind::Neq) atom.kind = AtomKind::Neq;
  else c.fail("expected '=' or '<>'");
  if (atom.negated) c.fail("'not' applies to relation atoms; use '<>' or '=' directly");
  c.get();
  atom.args.push_back(parse_template_arg(c, nvar, repvar));
  return atom;
}

std::vector<BoundDecl> parse_bound_decls(Cursor& c, const std::string& nvar) {
  std::vector<BoundDecl> out;
  while (c.peek().kind == Token::Kind::Ident) {
    BoundDecl b;
    b.name = c.get().text;
    if (classify_var(b.name))
      c.fail("bound variable '" + b.name + "' clashes with the x<k>/z<k> naming");
    if (c.peek().kind == Token::Kind::LBracket) {
      c.get();
      b.indexed = true;
      b.lo = parse_affine(c, nvar, "");
      c.expect(Token::Kind::DotDot, "'..'");
      b.hi = parse_affine(c, nvar, "");
      c.expect(Token::Kind::RBracket, "']'");
    }
    out.push_back(std::move(b));
  }
  return out;
}

// disjunct [exists <decls> .] atom (& atom)*
// with, in generator context, `rep i=a..b : atoms...` allowed as final item.
struct ParsedBody {
  std::vector<BoundDecl> bounds;
  std::vector<TemplateAtom> atoms;
  std::vector<RepBlock> reps;
};

ParsedBody parse_body(Cursor& c, const std::string& nvar, bool allow_rep, bool allow_not) {
  ParsedBody out;
  if (c.peek().kind == Token::Kind::Ident && c.peek().text == "exists") {
    c.get();
    out.bounds = parse_bound_decls(c, nvar);
    c.expect(Token::Kind::Dot, "'.' after bound variable declarations");
  }
  while (true) {
    if (c.peek().kind == Token::Kind::Ident && c.peek().text == "rep") {
      if (!allow_rep) c.fail("'rep' is only allowed inside generators");
      c.get();
      RepBlock rb;
      if (c.peek().kind != Token::Kind::Ident) c.fail("expected a rep variable");
      rb.var = c.get().text;
      c.expect(Token::Kind::EqSign, "'='");
      rb.lo = parse_affine(c, nvar, rb.var);
      c.expect(Token::Kind::DotDot, "'..'");
      rb.hi = parse_affine(c, nvar, rb.var);
      c.expect(Token::Kind::Colon, "':'");
      while (true) {
        rb.atoms.push_back(parse_template_atom(c, nvar, rb.var, allow_not));
        if (c.peek().kind == Token::Kind::Amp) { c.get(); continue; }
        break;
      }
      out.reps.push_back(std::move(rb));
      if (!c.at_end()) c.fail("a rep block must end the disjunct");
      break;
    }
    out.atoms.push_back(parse_template_atom(c, nvar, "", allow_not));
    if (c.peek().kind == Token::Kind::Amp) { c.get(); continue; }
    break;
  }
  if (!c.at_end()) c.fail("trailing tokens after disjunct");
  return out;
}

Disjunct body_to_disjunct(const ParsedBody& body, std::size_t lineno) {
  if (!body.reps.empty()) throw parse_error("'rep' is only allowed inside generators", lineno, 1);
  // An explicit disjunct is a degenerate generator instance.
  DisjunctGenerator g("disjunct", 0, 0, body.bounds, body.atoms, body.reps);
  return g.instantiate(0);
}

struct FamilyDraft {
  std::string name;
  unsigned params = 0;
  bool uniform = true;
  std::vector<unsigned> arities;
  std::vector<Disjunct> disjuncts;
  std::vector<DisjunctGenerator> generators;
  bool saw_arity = false;
};

SigmaP1Family finish(FamilyDraft& d, Polarity pol) {
  if (d.uniform)
    return SigmaP1Family::uniform(d.name, d.params, std::move(d.disjuncts), std::move(d.generators), pol);
  return SigmaP1Family::listed(d.name, d.params, std::move(d.arities), std::move(d.disjuncts),
                               std::move(d.generators), pol);
}

std::vector<SigmaP1Family> parse_impl(const std::string& text, bool allow_not) {
  const Polarity pol = allow_not ? Polarity::Classical : Polarity::Positive;
  std::vector<SigmaP1Family> out;
  std::optional<FamilyDraft> cur;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = lex_line(line, lineno, allow_not);
    Cursor c{&toks, 0, lineno};
    if (c.at_end()) continue;
    if (c.peek().kind != Token::Kind::Ident) c.fail("expected a directive");
    std::string head = c.get().text;

    if (head == "family") {
      if (cur) out.push_back(finish(*cur, pol));
      cur.emplace();
      if (c.peek().kind != Token::Kind::Ident) c.fail("expected a family name");
      cur->name = c.get().text;
      if (!c.at_end()) c.fail("trailing tokens after family name");
      continue;
    }
    if (!cur) c.fail("directive outside a family block");

    if (head == "params") {
      if (c.peek().kind != Token::Kind::Number) c.fail("expected a parameter count");
      cur->params = static_cast<unsigned>(c.get().number);
      if (!c.at_end()) c.fail("trailing tokens after params");
    } else if (head == "arity") {
      cur->saw_arity = true;
      if (c.peek().kind == Token::Kind::Ident && c.peek().text == "uniform") {
        c.get();
        cur->uniform = true;
      } else {
        cur->uniform = false;
        while (c.peek().kind == Token::Kind::Number) cur->arities.push_back(static_cast<unsigned>(c.get().number));
        if (cur->arities.empty()) c.fail("expected 'uniform' or a list of arities");
      }
      if (!c.at_end()) c.fail("trailing tokens after arity");
    } else if (head == "disjunct") {
      auto body = parse_body(c, "", false, allow_not);
      cur->disjuncts.push_back(body_to_disjunct(body, lineno));
    } else if (head == "generator") {
      if (c.peek().kind != Token::Kind::Ident) c.fail("expected a generator name");
      std::string gname = c.get().text;
      c.expect(Token::Kind::LParen, "'('");
      if (c.peek().kind != Token::Kind::Ident) c.fail("expected the generator variable");
      std::string nvar = c.get().text;
      if (c.peek().kind != Token::Kind::Ident || c.peek().text != "in") c.fail("expected 'in'");
      c.get();
      if (c.peek().kind != Token::Kind::Number) c.fail("expected the range start");
      std::uint64_t first = c.get().number;
      c.expect(Token::Kind::DotDot, "'..'");
      std::optional<std::uint64_t> last;
      if (c.peek().kind == Token::Kind::Number) last = c.get().number;
      c.expect(Token::Kind::RParen, "')'");
      c.expect(Token::Kind::Colon, "':'");
      auto body = parse_body(c, nvar, true, allow_not);
      cur->generators.emplace_back(gname, first, last, std::move(body.bounds), std::move(body.atoms),
                                   std::move(body.reps));
    } else {
      c.fail("unknown directive '" + head + "'");
    }
  }
  if (cur) out.push_back(finish(*cur, pol));
  return out;
}

}  // namespace

std::vector<SigmaP1Family> parse_families(const std::string& text) { return parse_impl(text, false); }

std::vector<SigmaP1Family> parse_classical_families(const std::string& text) { return parse_impl(text, true); }

const SigmaP1Family& find_family(const std::vector<SigmaP1Family>& fams, const std::string& name) {
  for (const auto& f : fams)
    if (f.name() == name) return f;
  throw usage_error("no family named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Printer. Canonical form; parse(write(x)) == x on template families.
// ---------------------------------------------------------------------------

namespace {

std::string arg_name(const ArgRef& r) {
  switch (r.slot) {
    case ArgRef::Slot::Free: return "x" + std::to_string(r.index + 1);
    case ArgRef::Slot::Bound: return "y" + std::to_string(r.index + 1);
    case ArgRef::Slot::Param: return "z" + std::to_string(r.index + 1);
  }
  return "?";
}

std::string affine_str(const AffineExpr& e, const std::string& nvar, const std::string& repvar) {
  std::string base;
  switch (e.base) {
    case AffineExpr::Base::Const: return std::to_string(e.offset);
    case AffineExpr::Base::N: base = nvar; break;
    case AffineExpr::Base::RepVar: base = repvar; break;
  }
  if (e.offset == 0) return base;
  if (e.offset > 0) return base + "+" + std::to_string(e.offset);
  return base + "-" + std::to_string(-e.offset);
}

std::string template_arg_str(const TemplateArg& a, const std::string& nvar, const std::string& repvar) {
  switch (a.slot) {
    case ArgRef::Slot::Free: return "x" + std::to_string(a.index + 1);
    case ArgRef::Slot::Param: return "z" + std::to_string(a.index + 1);
    case ArgRef::Slot::Bound: break;
  }
  if (!a.bound_indexed) return a.bound_name;
  return a.bound_name + "[" + affine_str(a.bound_index, nvar, repvar) + "]";
}

std::string template_atom_str(const TemplateAtom& a, const std::string& nvar, const std::string& repvar) {
  std::string out;
  if (a.negated) out += "not ";
  if (a.kind == AtomKind::Rel) {
    out += a.rel + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += template_arg_str(a.args[i], nvar, repvar);
    }
    out += ")";
    return out;
  }
  out += template_arg_str(a.args[0], nvar, repvar);
  out += a.kind == AtomKind::Eq ? " = " : " <> ";
  out += template_arg_str(a.args[1], nvar, repvar);
  return out;
}

}  // namespace

std::string write_atom(const Atom& a) {
  std::string out;
  if (a.negated) out += "not ";
  if (a.kind == AtomKind::Rel) {
    out += a.rel + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += arg_name(a.args[i]);
    }
    out += ")";
    return out;
  }
  out += arg_name(a.args[0]);
  out += a.kind == AtomKind::Eq ? " = " : " <> ";
  out += arg_name(a.args[1]);
  return out;
}

std::string write_disjunct(const Disjunct& d) {
  std::string out = "disjunct ";
  if (d.bound_count > 0) {
    out += "exists";
    for (unsigned i = 0; i < d.bound_count; ++i) out += " y" + std::to_string(i + 1);
    out += " . ";
  }
  for (std::size_t i = 0; i < d.conjuncts.size(); ++i) {
    if (i) out += " & ";
    out += write_atom(d.conjuncts[i]);
  }
  return out;
}

namespace {

std::string write_generator(const DisjunctGenerator& g) {
  std::string out = "generator " + g.name() + "(n in " + std::to_string(g.first()) + "..";
  if (g.last()) out += std::to_string(*g.last());
  out += "): ";
  if (!g.bounds().empty()) {
    out += "exists";
    for (const auto& b : g.bounds()) {
      out += " " + b.name;
      if (b.indexed) out += "[" + affine_str(b.lo, "n", "") + ".." + affine_str(b.hi, "n", "") + "]";
    }
    out += " . ";
  }
  bool first = true;
  for (const auto& a : g.atoms()) {
    if (!first) out += " & ";
    first = false;
    out += template_atom_str(a, "n", "");
  }
  for (const auto& rb : g.reps()) {
    if (!first) out += " & ";
    first = false;
    out += "rep " + rb.var + "=" + affine_str(rb.lo, "n", rb.var) + ".." + affine_str(rb.hi, "n", rb.var) + " : ";
    for (std::size_t i = 0; i < rb.atoms.size(); ++i) {
      if (i) out += " & ";
      out += template_atom_str(rb.atoms[i], "n", rb.var);
    }
  }
  return out;
}

}  // namespace

std::string write_formula(const SigmaP1Formula& f) {
  std::ostringstream out;
  out << "# free " << f.free_count() << " params " << f.param_count() << "\n";
  for (const auto& d : f.explicit_disjuncts()) out << write_disjunct(d) << "\n";
  for (const auto& g : f.generators()) out << write_generator(g) << "\n";
  return out.str();
}

std::string write_family(const SigmaP1Family& fam) {
  std::ostringstream out;
  out << "family " << fam.name() << "\n";
  out << "params " << fam.param_count() << "\n";
  switch (fam.mode()) {
    case SigmaP1Family::Mode::Uniform: {
      out << "arity uniform\n";
      for (const auto& d : fam.template_disjuncts()) out << write_disjunct(d) << "\n";
      for (const auto& g : fam.template_generators()) out << write_generator(g) << "\n";
      break;
    }
    case SigmaP1Family::Mode::Listed: {
      out << "arity";
      for (unsigned a : fam.listed_arities()) out << ' ' << a;
      out << "\n";
      for (const auto& d : fam.template_disjuncts()) out << write_disjunct(d) << "\n";
      for (const auto& g : fam.template_generators()) out << write_generator(g) << "\n";
      break;
    }
    case SigmaP1Family::Mode::PerArity: {
      // Display form: one commented block per arity. Not a template file.
      for (const auto& [arity, phi] : fam.per_arity_formulas()) {
        out << "# arity " << arity << "\n";
        for (const auto& d : phi.explicit_disjuncts()) out << write_disjunct(d) << "\n";
      }
      break;
    }
  }
  return out.str();
}

}  // namespace emt
