#pragma once

// Isotropy decisions over the base layers: finite fields, Q_p (decided three
// independent ways that must agree, or the run aborts), and F_p(t) (local
// tests at the places of the coefficient support plus the degree place,
// with constructive witnesses from a conic descent).

#include <cstdint>
#include <optional>
#include <vector>

#include "berk/quadform.hpp"

namespace berk {

// q ~ q1 perp p*q2 with unit coefficients, after square-class normalization
// c_i = n_i * scale_i^{-2}: a witness x of the normalized form pulls back to
// x_i * scale_i on the original.
struct SpringerSplit {
  std::vector<Rat> units1, units2;      // unit coefficients of q1 and q2
  std::vector<std::size_t> idx1, idx2;  // their positions in q
  std::vector<Rat> scale;               // per original coordinate
};
SpringerSplit springer_split(const std::vector<Rat>& coeffs, std::int64_t p);

IsotropyVerdict isotropic_finite(const FqField& F,
                                 const std::vector<FpPoly>& coeffs);

// Triple agreement: Springer residue forms, Hilbert-symbol criteria, and the
// certified mod-p^k search must coincide; a mismatch throws std::logic_error.
IsotropyVerdict isotropic_qp(std::int64_t p, const std::vector<Rat>& coeffs,
                             long precision = 32);

IsotropyVerdict isotropic_fqt(std::int64_t p, const std::vector<FpRat>& coeffs,
                              long max_witness_degree = 6);

IsotropyVerdict isotropic_residue(const QuadForm& q, const BaseFieldDesc& K);

// Primitive zero of sum c_i x_i^2 mod p^k, or nullopt if none exists.  The
// search is exhaustive (dynamic programming over partial-sum value sets,
// equivalent to enumerating all vectors).  For p-integral coefficients with
// max valuation M and k >= 2M+1, nullopt certifies anisotropy over Q_p and
// a hit carries a coordinate satisfying the Newton lifting inequality.
std::optional<std::vector<Int>> oracle_modpk(const std::vector<Rat>& coeffs,
                                             std::int64_t p, long k);

// Exhaustive search over polynomial vectors of degree <= max_degree (the
// caller keeps the bound feasible: cost is p^((max_degree+1)*dim)).
std::optional<std::vector<FpPoly>> oracle_poly_search(
    const std::vector<FpRat>& coeffs, long max_degree);

// Unit-times-even-valuation test; the Hilbert symbol lives in padic.hpp.
bool qp_square(const Rat& a, std::int64_t p);

}  // namespace berk
