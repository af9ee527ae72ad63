#ifndef EMT_ERRORS_HPP
#define EMT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emt {

// Base class for all library errors. Message prefixes are stable so the CLI
// can map them to distinct diagnostics.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Number-theoretic coding failed (overflow, arity mismatch, malformed code).
class coding_error : public error {
 public:
  explicit coding_error(const std::string& what) : error("coding error: " + what) {}
};

// Text input (structure/formula/operator/interpretation files) is malformed.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : error("parse error: " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An operation was invoked outside its contract (bad bounds, missing stage,
// unsatisfied precondition).
class usage_error : public error {
 public:
  explicit usage_error(const std::string& what) : error("usage error: " + what) {}
};

// A structural invariant a check depends on does not hold on the given input
// (non-congruence, non-equivalence, non-surjective enumeration, ...).
class invariant_error : public error {
 public:
  explicit invariant_error(const std::string& what) : error("invariant error: " + what) {}
};

}  // namespace emt

#endif
