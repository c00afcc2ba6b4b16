#include "berk/padic.hpp"

#include <sstream>

namespace berk {

Int unit_residue(const Rat& a, std::int64_t p, const Int& pk) {
  Int x = num(a) % pk, y = den(a) % pk;
  if (x < 0) x += pk;
  if (y < 0) y += pk;
  if (y % p == 0 || x % p == 0)
    throw std::invalid_argument("unit_residue: not a p-unit");
  return x * inv_mod(y, pk) % pk;
}

bool is_square_qp(const Rat& a, std::int64_t p) {
  require_odd_prime(p);
  if (a == 0) throw std::invalid_argument("is_square_qp: zero input");
  long e = vp(a, p);
  if (e % 2 != 0) return false;
  Rat u = a * pow_p(p, -e);
  return legendre(unit_residue(u, p, Int(p)), p) == 1;
}

Int unit_sqrt_mod(const Int& u, std::int64_t p, long N) {
  require_odd_prime(p);
  if (N < 1) throw std::invalid_argument("unit_sqrt_mod: need N >= 1");
  Int u0 = mod_m(u, Int(p));
  long r0 = -1;
  for (long x = 1; x <= (p - 1) / 2; ++x)
    if (mod_m(Int(x) * x - u0, Int(p)) == 0) {
      r0 = x;
      break;
    }
  if (r0 < 0) throw std::domain_error("unit_sqrt_mod: not a square mod p");
  Int pk(p), r(r0);
  for (long k = 1; k < N; ++k) {
    Int pk1 = pk * p;
    // r' = r + t*p^k with t = (u - r^2)/p^k * (2r)^{-1} mod p
    Int diff = mod_m(u - r * r, pk1) / pk;
    Int t = mod_m(diff * inv_mod(2 * r % p, Int(p)), Int(p));
    r += t * pk;
    pk = pk1;
  }
  return mod_m(r, pk);
}

std::optional<std::pair<long, Int>> sqrt_qp(const Rat& a, std::int64_t p,
                                            long N) {
  if (a == 0) throw std::invalid_argument("sqrt_qp: zero input");
  long e = vp(a, p);
  if (e % 2 != 0) return std::nullopt;
  Rat u = a * pow_p(p, -e);
  Int pN = 1;
  for (long i = 0; i < N; ++i) pN *= p;
  Int ur = unit_residue(u, p, pN);
  if (legendre(ur % p, p) != 1) return std::nullopt;
  return std::make_pair(e / 2, unit_sqrt_mod(ur, p, N));
}

int hilbert_symbol(const Rat& a, const Rat& b, std::int64_t p) {
  require_odd_prime(p);
  if (a == 0 || b == 0)
    throw std::invalid_argument("hilbert_symbol: zero argument");
  long al = vp(a, p);
  long be = vp(b, p);
  Rat u = a * pow_p(p, -al), v = b * pow_p(p, -be);
  int lu = legendre(unit_residue(u, p, Int(p)), p);
  int lv = legendre(unit_residue(v, p, Int(p)), p);
  int sign = 1;
  if ((al % 2 != 0) && (be % 2 != 0) && ((p - 1) / 2) % 2 == 1) sign = -sign;
  if (be % 2 != 0 && lu == -1) sign = -sign;
  if (al % 2 != 0 && lv == -1) sign = -sign;
  return sign;
}

EisElem::EisElem(std::int64_t p, long h) : p_(p), h_(h), c_(h, Rat(0)) {
  require_odd_prime(p);
  if (h < 1) throw std::invalid_argument("EisElem: need h >= 1");
}

EisElem::EisElem(std::int64_t p, long h, std::vector<Rat> c) : EisElem(p, h) {
  if (c.size() > static_cast<size_t>(h))
    throw std::invalid_argument("EisElem: too many coordinates");
  for (size_t i = 0; i < c.size(); ++i) c_[i] = std::move(c[i]);
}

EisElem EisElem::from_rat(std::int64_t p, long h, Rat a) {
  EisElem e(p, h);
  e.c_[0] = std::move(a);
  return e;
}

EisElem EisElem::pi_power(std::int64_t p, long h, long j) {
  EisElem e(p, h);
  long r = j % h, q = j / h;
  if (r < 0) {
    r += h;
    q -= 1;
  }
  e.c_[static_cast<std::size_t>(r)] = pow_p(p, q);
  return e;
}

bool EisElem::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

void EisElem::check_compat(const EisElem& o) const {
  if (p_ != o.p_ || h_ != o.h_)
    throw std::invalid_argument("EisElem: mixed extensions");
}

EisElem EisElem::operator+(const EisElem& o) const {
  check_compat(o);
  EisElem r(p_, h_);
  for (long i = 0; i < h_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

EisElem EisElem::operator-(const EisElem& o) const {
  check_compat(o);
  EisElem r(p_, h_);
  for (long i = 0; i < h_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

EisElem EisElem::operator*(const EisElem& o) const {
  check_compat(o);
  EisElem r(p_, h_);
  for (long i = 0; i < h_; ++i)
    for (long j = 0; j < h_; ++j) {
      long k = i + j;
      // pi^h = p
      if (k >= h_)
        r.c_[k - h_] += c_[i] * o.c_[j] * p_;
      else
        r.c_[k] += c_[i] * o.c_[j];
    }
  return r;
}

bool EisElem::operator==(const EisElem& o) const {
  return p_ == o.p_ && h_ == o.h_ && c_ == o.c_;
}

ValExt EisElem::valuation() const {
  bool any = false;
  Rat best;
  for (long i = 0; i < h_; ++i) {
    if (c_[i] == 0) continue;
    Rat v = Rat(vp(c_[i], p_)) + Rat(i, h_);
    if (!any || v < best) best = v;
    any = true;
  }
  return any ? ValExt(best) : ValExt::plus_inf();
}

std::string EisElem::str() const {
  std::ostringstream os;
  bool first = true;
  for (long i = 0; i < h_; ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << rat_str(c_[i]);
    } else {
      if (c_[i] != 1) os << rat_str(c_[i]) << "*";
      os << p_ << "^(" << rat_str(Rat(i, h_)) << ")";
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace berk
