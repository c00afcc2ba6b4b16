#include "berk/numbers.hpp"

#include <array>
#include <sstream>

namespace berk {

namespace {

Int mulmod(const Int& a, const Int& b, const Int& m) { return a * b % m; }

bool miller_rabin_once(const Int& n, const Int& a, const Int& d, int r) {
  Int x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  Int nn(n), d = nn - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  // Deterministic base set for n < 3.3 * 10^24, more than enough for int64.
  for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin_once(nn, Int(a), d, r)) return false;
  }
  return true;
}

void require_odd_prime(std::int64_t p) {
  if (p == 2 || !is_prime(p))
    throw std::invalid_argument("prime must be an odd prime, got " +
                                std::to_string(p));
}

long vp_int(const Int& n, std::int64_t p) {
  if (n == 0) throw std::domain_error("vp_int(0)");
  Int m = n < 0 ? Int(-n) : n;
  long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

long vp(const Rat& q, std::int64_t p) {
  if (q == 0) throw std::domain_error("vp(0); use vp_ext");
  return vp_int(num(q), p) - vp_int(den(q), p);
}

const Rat& ValExt::value() const {
  if (!finite()) throw std::domain_error("ValExt::value on infinity");
  return v_;
}

ValExt ValExt::operator+(const ValExt& o) const {
  if (is_plus_inf() || o.is_plus_inf()) {
    if (is_minus_inf() || o.is_minus_inf())
      throw std::domain_error("ValExt: inf + (-inf)");
    return plus_inf();
  }
  if (is_minus_inf() || o.is_minus_inf()) return minus_inf();
  return ValExt(v_ + o.v_);
}

ValExt ValExt::operator-() const {
  if (is_plus_inf()) return minus_inf();
  if (is_minus_inf()) return plus_inf();
  return ValExt(-v_);
}

bool ValExt::operator==(const ValExt& o) const {
  return kind_ == o.kind_ && (kind_ != Kind::Finite || v_ == o.v_);
}

std::strong_ordering ValExt::operator<=>(const ValExt& o) const {
  auto rank = [](Kind k) { return k == Kind::MinusInf ? 0 : k == Kind::Finite ? 1 : 2; };
  if (kind_ != o.kind_) return rank(kind_) <=> rank(o.kind_);
  if (kind_ != Kind::Finite) return std::strong_ordering::equal;
  if (v_ < o.v_) return std::strong_ordering::less;
  if (v_ > o.v_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ValExt::str() const {
  if (is_plus_inf()) return "+inf";
  if (is_minus_inf()) return "-inf";
  return rat_str(v_);
}

ValExt vp_ext(const Rat& q, std::int64_t p) {
  if (q == 0) return ValExt::plus_inf();
  return ValExt(Rat(vp(q, p)));
}

Rat pow_p(std::int64_t p, long e) {
  Int pw = 1;
  long a = e < 0 ? -e : e;
  for (long i = 0; i < a; ++i) pw *= p;
  return e < 0 ? Rat(Int(1), pw) : Rat(pw);
}

Rat pow_p(std::int64_t p, const Rat& e_integral) {
  if (den(e_integral) != 1)
    throw std::invalid_argument("pow_p: exponent must be an integer");
  return pow_p(p, to_long(num(e_integral)));
}

Int mod_m(const Rat& a, const Int& m) {
  Int n = num(a) % m, d = den(a) % m;
  if (n < 0) n += m;
  if (d < 0) d += m;
  Int r = n * inv_mod(d, m) % m;
  return r < 0 ? r + m : r;
}

Int inv_mod(const Int& a, const Int& m) {
  Int old_r = a % m, r = m;
  if (old_r < 0) old_r += m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int qt = old_r / r;
    Int tmp = old_r - qt * r;
    old_r = r;
    r = tmp;
    tmp = old_s - qt * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("inv_mod: not invertible");
  Int res = old_s % m;
  if (res < 0) res += m;
  return res;
}

Int pow_mod(Int base, Int exp, const Int& m) {
  base %= m;
  if (base < 0) base += m;
  Int res = 1;
  while (exp > 0) {
    if (exp % 2 == 1) res = res * base % m;
    base = base * base % m;
    exp /= 2;
  }
  return res;
}

int legendre(const Rat& a, std::int64_t p) {
  require_odd_prime(p);
  if (a == 0) return 0;
  if (vp(a, p) > 0) return 0;
  if (vp(a, p) < 0)
    throw std::invalid_argument("legendre: argument must be p-integral");
  Int r = pow_mod(mod_m(a, Int(p)), Int((p - 1) / 2), Int(p));
  return r == 1 ? 1 : -1;
}

Rat canonical_center(const Rat& a, std::int64_t p, long s) {
  if (a == 0) return Rat(0);
  long e = vp(a, p);
  if (e >= s) return Rat(0);
  Rat b = a / pow_p(p, e);  // p-adic unit
  Rat r(0);
  for (long i = e; i < s; ++i) {
    Int d = mod_m(b, Int(p));
    r += Rat(d) * pow_p(p, i);
    b = (b - Rat(d)) / Rat(p);
  }
  return r;
}

Int floor_rat(const Rat& q) {
  Int n = num(q), d = den(q);
  Int f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

long to_long(const Int& n) {
  if (n > std::numeric_limits<std::int64_t>::max() ||
      n < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("to_long: out of range");
  return static_cast<long>(n.convert_to<std::int64_t>());
}

std::string rat_str(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace berk
