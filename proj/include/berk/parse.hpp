#pragma once

// Expression grammar for diagonal forms over Q(T):
//   form  := coeff (',' coeff)*
//   coeff := expr
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('+' | '-')* power
//   power := primary ('^' ('+' | '-')? integer)?
//   primary := integer | 'T' | '(' expr ')'
// Errors carry the 1-based character position of the offending token.

#include <cstdint>
#include <string>
#include <vector>

#include "berk/quadform.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

// A single coefficient expression.
RatFunc parse_ratfunc(const std::string& text);

struct ParsedForm {
  QuadForm q;
  std::vector<std::size_t> stripped;  // positions of dropped zero entries
  std::string note;                   // nonempty when entries were dropped
};

// Zero coefficients contribute nothing to a diagonal form and are dropped
// with a note; a form with no nonzero entry is rejected.
ParsedForm parse_form(const std::string& text, std::int64_t p);

}  // namespace berk
