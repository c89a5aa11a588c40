#ifndef SIC_PARSE_HPP
#define SIC_PARSE_HPP

// Expression parser for the coefficient field.  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+') factor | atom ('^' integer)?
//   atom   := rational | '(' expr ')' | ident
//   ident  := name | name '(z)' | name primes '(z)'   (primes = one or more ')
// Bare names resolve to already-declared generators (params, dependent
// variables, algebraic constants) or declare a fresh parameter; name(z)
// declares/uses an analytic function.  Exponents are integers (negative
// allowed).  Errors carry a character position.

#include "sic/algebra.hpp"

namespace sic {

struct ParseError : Error {
    size_t pos;
    ParseError(const std::string& m, size_t p)
        : Error(m + " at position " + std::to_string(p)), pos(p) {}
};

// Parse into the given context, declaring unseen names as described above.
Rat parseExpr(GenContext* ctx, const std::string& text);

}  // namespace sic

#endif
