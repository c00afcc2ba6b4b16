#pragma once

// p-adic square roots, Hilbert symbols, and elements of the totally
// ramified extension Q_p(p^(1/h)).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berk/numbers.hpp"

namespace berk {

// Does a lie in (Q_p^*)^2?  p odd, a nonzero.
bool is_square_qp(const Rat& a, std::int64_t p);

// Square root in Z_p of a unit square u mod p^N, lifted digit by digit.
// The root is canonicalized so its first digit lies in 1..(p-1)/2.
Int unit_sqrt_mod(const Int& u, std::int64_t p, long N);

// sqrt(a) = p^e * w with w a unit returned mod p^N; nullopt when a is not a
// square in Q_p.  a nonzero, p odd.
std::optional<std::pair<long, Int>> sqrt_qp(const Rat& a, std::int64_t p,
                                            long N);

// Hilbert symbol (a, b)_p for odd p; a, b nonzero.
int hilbert_symbol(const Rat& a, const Rat& b, std::int64_t p);

// Reduce a p-unit rational mod p^k as an integer residue.
Int unit_residue(const Rat& a, std::int64_t p, const Int& pk);

// c_0 + c_1*pi + ... + c_{h-1}*pi^(h-1) with pi^h = p and rational c_i.
// The valuation extends v_p with v(pi) = 1/h; since the h monomials have
// distinct valuations mod 1, the minimum over nonzero terms is exact.
class EisElem {
 public:
  EisElem(std::int64_t p, long h);
  EisElem(std::int64_t p, long h, std::vector<Rat> c);
  static EisElem from_rat(std::int64_t p, long h, Rat a);
  static EisElem pi_power(std::int64_t p, long h, long j);

  std::int64_t p() const { return p_; }
  long h() const { return h_; }
  const std::vector<Rat>& coords() const { return c_; }
  bool is_zero() const;

  EisElem operator+(const EisElem& o) const;
  EisElem operator-(const EisElem& o) const;
  EisElem operator*(const EisElem& o) const;
  bool operator==(const EisElem& o) const;

  ValExt valuation() const;  // PlusInf for zero

  std::string str() const;

 private:
  void check_compat(const EisElem& o) const;
  std::int64_t p_;
  long h_;
  std::vector<Rat> c_;  // size h
};

}  // namespace berk
