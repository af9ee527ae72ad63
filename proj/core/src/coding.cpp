#include "emt/coding.hpp"

#include <cmath>
#include <limits>

#include "emt/errors.hpp"

namespace emt {

namespace {

Code checked_add(Code a, Code b) {
  Code r = a + b;
  if (r < a) throw coding_error("pairing overflow");
  return r;
}

Code checked_mul(Code a, Code b) {
  if (a != 0 && b > std::numeric_limits<Code>::max() / a) throw coding_error("pairing overflow");
  return a * b;
}

}  // namespace

Code pair(Code x, Code y) {
  Code s = checked_add(x, y);
  // s*(s+1)/2 without intermediate overflow: one factor is even.
  Code tri = (s % 2 == 0) ? checked_mul(s / 2, s + 1) : checked_mul(s, (s + 1) / 2);
  return checked_add(tri, y);
}

std::pair<Code, Code> unpair(Code z) {
  // Seed s ~ (sqrt(8z+1)-1)/2 from floating point, then refine with exact
  // triangular numbers; the float slop is at most a few steps.
  auto tri = [](Code n) { return (n % 2 == 0) ? (n / 2) * (n + 1) : n * ((n + 1) / 2); };
  Code s = static_cast<Code>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while (s > 0 && tri(s) > z) --s;
  while (tri(s + 1) <= z) ++s;
  Code t = tri(s);
  Code y = z - t;
  Code x = s - y;
  return {x, y};
}

Code tuplecode(const std::vector<Code>& t) {
  if (t.empty()) return pair(0, 0);
  if (t.size() == 1) return pair(1, t[0]);
  Code payload = t.back();
  for (std::size_t i = t.size() - 1; i-- > 0;) payload = pair(t[i], payload);
  return pair(static_cast<Code>(t.size()), payload);
}

Code tuplecode(const Tuple& t) {
  std::vector<Code> u(t.begin(), t.end());
  return tuplecode(u);
}

std::optional<std::vector<Code>> decode_tuple(Code z) {
  auto [len, payload] = unpair(z);
  if (len == 0) {
    if (payload != 0) return std::nullopt;
    return std::vector<Code>{};
  }
  std::vector<Code> out;
  out.reserve(static_cast<std::size_t>(len));
  if (len == 1) {
    out.push_back(payload);
    return out;
  }
  Code rest = payload;
  for (Code i = 0; i + 1 < len; ++i) {
    auto [a, b] = unpair(rest);
    out.push_back(a);
    rest = b;
  }
  out.push_back(rest);
  return out;
}

Code encode_fact(Code kind, const Tuple& args) { return pair(kind, tuplecode(args)); }

Code encode_fact(const Fact& f) { return encode_fact(f.kind, f.args); }

std::optional<Fact> decode_fact(Code c) {
  auto [kind, argcode] = unpair(c);
  auto args = decode_tuple(argcode);
  if (!args) return std::nullopt;
  Fact f;
  f.kind = kind;
  f.args.reserve(args->size());
  for (Code a : *args) {
    if (a > std::numeric_limits<Elem>::max()) return std::nullopt;
    f.args.push_back(static_cast<Elem>(a));
  }
  return f;
}

Code join_left(Code x) { return checked_mul(2, x); }
Code join_right(Code y) { return checked_add(checked_mul(2, y), 1); }

Code join3(unsigned slot, Code x) { return checked_add(checked_mul(3, x), slot); }

}  // namespace emt
