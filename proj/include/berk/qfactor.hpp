#pragma once

// Factorization of polynomials over Q into monic irreducibles, for inputs of
// degree at most 8 (squarefree split, one good small prime, Hensel lift,
// subset recombination). Larger degrees are rejected.

#include <vector>

#include "berk/poly.hpp"

namespace berk {

inline constexpr long kMaxFactorDegree = 8;

struct QFactorization {
  Rat unit;  // f = unit * prod(factor^mult), factors monic irreducible
  std::vector<std::pair<QPoly, long>> factors;
};

QFactorization factor_over_q(const QPoly& f);

bool is_irreducible_over_q(const QPoly& f);

}  // namespace berk
