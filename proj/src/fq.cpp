#include "berk/fq.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "berk/padic.hpp"

namespace berk {

namespace {

long inv_p(long a, std::int64_t p) {
  Int r = inv_mod(Int(a), Int(p));
  return r.convert_to<long>();
}

}  // namespace

void FpPoly::check_p() const {
  if (p_ < 3 || !is_prime(p_) )
    throw std::invalid_argument("FpPoly: p must be an odd prime");
}

void FpPoly::normalize() {
  for (auto& c : c_) {
    c %= p_;
    if (c < 0) c += p_;
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly::FpPoly(std::int64_t p, std::vector<long> c) : p_(p), c_(std::move(c)) {
  check_p();
  normalize();
}

FpPoly FpPoly::constant(std::int64_t p, long c) { return FpPoly(p, {c}); }

FpPoly FpPoly::x(std::int64_t p) { return FpPoly(p, {0, 1}); }

FpPoly FpPoly::from_qpoly(const QPoly& f, std::int64_t p) {
  std::vector<long> c(static_cast<size_t>(f.degree() + 1));
  for (long k = 0; k <= f.degree(); ++k)
    c[static_cast<size_t>(k)] = mod_m(f[k], Int(p)).convert_to<long>();
  return FpPoly(p, std::move(c));
}

long FpPoly::operator[](long k) const {
  if (k < 0 || k >= static_cast<long>(c_.size())) return 0;
  return c_[static_cast<size_t>(k)];
}

long FpPoly::leading() const {
  if (c_.empty()) throw std::domain_error("FpPoly::leading: zero polynomial");
  return c_.back();
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("FpPoly: mixed characteristics");
  std::vector<long> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator-(const FpPoly& o) const { return *this + (-o); }

FpPoly FpPoly::operator-() const {
  std::vector<long> r(c_);
  for (auto& c : r) c = -c;
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("FpPoly: mixed characteristics");
  if (is_zero() || o.is_zero()) return FpPoly(p_);
  std::vector<long> r(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = (r[i + j] + c_[i] * o.c_[j]) % p_;
  return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::scale(long s) const {
  std::vector<long> r(c_);
  s %= p_;
  for (auto& c : r) c = c * s;
  return FpPoly(p_, std::move(r));
}

bool FpPoly::operator<(const FpPoly& o) const {
  if (degree() != o.degree()) return degree() < o.degree();
  for (long k = degree(); k >= 0; --k)
    if ((*this)[k] != o[k]) return (*this)[k] < o[k];
  return false;
}

std::pair<FpPoly, FpPoly> FpPoly::divmod(const FpPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("FpPoly: mixed characteristics");
  if (o.is_zero()) throw std::invalid_argument("FpPoly: division by zero");
  std::vector<long> rem(c_);
  std::vector<long> quo;
  long ilead = inv_p(o.leading(), p_);
  long dr = static_cast<long>(rem.size()) - 1, dd = o.degree();
  if (dr >= dd) quo.assign(static_cast<size_t>(dr - dd + 1), 0);
  while (dr >= dd) {
    long c = rem[static_cast<size_t>(dr)] % p_ * ilead % p_;
    quo[static_cast<size_t>(dr - dd)] = c;
    for (long i = 0; i <= dd; ++i) {
      auto& slot = rem[static_cast<size_t>(dr - dd + i)];
      slot = ((slot - c * o[i]) % p_ + p_) % p_;
    }
    while (dr >= 0 && rem[static_cast<size_t>(dr)] % p_ == 0) --dr;
  }
  rem.resize(static_cast<size_t>(dr + 1));
  return {FpPoly(p_, std::move(quo)), FpPoly(p_, std::move(rem))};
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scale(inv_p(leading(), p_));
}

FpPoly FpPoly::derivative() const {
  if (c_.size() <= 1) return FpPoly(p_);
  std::vector<long> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i)
    r[i - 1] = static_cast<long>(i % p_) * c_[i] % p_;
  return FpPoly(p_, std::move(r));
}

long FpPoly::eval(long x) const {
  long r = 0;
  x = ((x % p_) + p_) % p_;
  for (size_t i = c_.size(); i-- > 0;) r = (r * x + c_[i]) % p_;
  return r;
}

FpPoly FpPoly::compose_affine(long a, long b) const {
  FpPoly lin(p_, {a, b});
  FpPoly r(p_);
  for (size_t i = c_.size(); i-- > 0;)
    r = r * lin + FpPoly::constant(p_, c_[i]);
  return r;
}

std::string FpPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long k = degree(); k >= 0; --k) {
    long c = (*this)[k];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0 || c != 1) {
      os << c;
      if (k > 0) os << "*";
    }
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FpPoly fp_powmod(const FpPoly& b, Int e, const FpPoly& m) {
  if (e < 0) throw std::invalid_argument("fp_powmod: negative exponent");
  FpPoly base = b.divmod(m).second;
  FpPoly r = FpPoly::constant(b.p(), 1);
  while (e > 0) {
    if ((e & 1) != 0) r = (r * base).divmod(m).second;
    base = (base * base).divmod(m).second;
    e >>= 1;
  }
  return r;
}

namespace {

// s*a + t*b = g with g monic.
struct ExtGcd {
  FpPoly g, s, t;
};

ExtGcd fp_ext_gcd(const FpPoly& a, const FpPoly& b) {
  std::int64_t p = a.p();
  FpPoly r0 = a, r1 = b;
  FpPoly s0 = FpPoly::constant(p, 1), s1(p);
  FpPoly t0(p), t1 = FpPoly::constant(p, 1);
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divmod(r1);
    FpPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  long il = inv_p(r0.leading(), p);
  return {r0.scale(il), s0.scale(il), t0.scale(il)};
}

std::vector<FpPoly> fp_edf(const FpPoly& f, long d, std::mt19937_64& rng) {
  if (f.degree() == d) return {f.monic()};
  std::int64_t p = f.p();
  Int e = 1;
  for (long i = 0; i < d; ++i) e *= p;
  e = (e - 1) / 2;
  while (true) {
    std::vector<long> c(static_cast<size_t>(f.degree()));
    for (auto& x : c) x = static_cast<long>(rng() % static_cast<unsigned long long>(p));
    FpPoly a(p, std::move(c));
    if (a.is_zero()) continue;
    FpPoly b = fp_powmod(a, e, f) - FpPoly::constant(p, 1);
    FpPoly g = fp_gcd(b, f);
    if (g.degree() >= 1 && g.degree() < f.degree()) {
      auto left = fp_edf(g, d, rng);
      auto right = fp_edf(f.divmod(g).first.monic(), d, rng);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
}

// Distinct irreducible factors of a monic squarefree polynomial.
std::vector<FpPoly> fp_factor_squarefree(FpPoly f) {
  std::int64_t p = f.p();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed seed: reproducible runs
  std::vector<FpPoly> out;
  FpPoly h = FpPoly::x(p);
  long d = 0;
  while (2 * (d + 1) <= f.degree()) {
    ++d;
    h = fp_powmod(h, Int(p), f);
    FpPoly g = fp_gcd(h - FpPoly::x(p), f);
    if (g.degree() >= 1) {
      auto part = fp_edf(g, d, rng);
      out.insert(out.end(), part.begin(), part.end());
      f = f.divmod(g).first.monic();
      h = h.divmod(f).second;
    }
  }
  if (f.degree() >= 1) out.push_back(f);
  return out;
}

void fp_factor_monic(FpPoly f, long outer_mult,
                     std::vector<std::pair<FpPoly, long>>& acc) {
  std::int64_t p = f.p();
  if (f.degree() <= 0) return;
  FpPoly fd = f.derivative();
  if (fd.is_zero()) {
    // f = g(x^p) = g(x)^p over F_p
    std::vector<long> gc(static_cast<size_t>(f.degree() / p) + 1);
    for (size_t i = 0; i < gc.size(); ++i)
      gc[i] = f[static_cast<long>(i) * p];
    fp_factor_monic(FpPoly(p, std::move(gc)), outer_mult * p, acc);
    return;
  }
  FpPoly d = fp_gcd(f, fd);
  FpPoly s = d.degree() == 0 ? f : f.divmod(d).first.monic();
  for (const auto& pi : fp_factor_squarefree(s)) {
    long e = 0;
    while (true) {
      auto [q, r] = f.divmod(pi);
      if (!r.is_zero()) break;
      f = q;
      ++e;
    }
    acc.emplace_back(pi, e * outer_mult);
  }
  fp_factor_monic(f.monic(), outer_mult, acc);
}

}  // namespace

bool fp_irreducible(const FpPoly& f) {
  long n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  std::int64_t p = f.p();
  FpPoly m = f.monic();
  FpPoly xp = FpPoly::x(p);
  // x^(p^k) mod m by iterated Frobenius
  std::vector<FpPoly> frob(static_cast<size_t>(n) + 1, FpPoly(p));
  frob[0] = FpPoly::x(p);
  for (long k = 1; k <= n; ++k)
    frob[static_cast<size_t>(k)] =
        fp_powmod(frob[static_cast<size_t>(k - 1)], Int(p), m);
  if (!(frob[static_cast<size_t>(n)] == FpPoly::x(p).divmod(m).second))
    return false;
  for (long r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool rprime = true;
    for (long s = 2; s * s <= r; ++s)
      if (r % s == 0) rprime = false;
    if (!rprime) continue;
    FpPoly g = fp_gcd(frob[static_cast<size_t>(n / r)] - FpPoly::x(p), m);
    if (g.degree() != 0) return false;
  }
  return true;
}

std::vector<std::pair<FpPoly, long>> fp_factor(const FpPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("fp_factor: zero input");
  std::vector<std::pair<FpPoly, long>> acc;
  fp_factor_monic(f.monic(), 1, acc);
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  return acc;
}

long fp_nonresidue(std::int64_t p) {
  for (long a = 2; a < p; ++a)
    if (legendre(Rat(a), p) == -1) return a;
  throw std::logic_error("fp_nonresidue: none found");
}

std::pair<FpPoly, FpPoly> fp_square_class(const FpPoly& f) {
  if (f.is_zero())
    throw std::invalid_argument("fp_square_class: zero input");
  std::int64_t p = f.p();
  long u = f.leading();
  long urep = legendre(Rat(u), p) == 1 ? 1 : fp_nonresidue(p);
  // sigma^2 = u / urep in F_p
  long target = u * inv_p(urep, p) % p;
  long sigma = unit_sqrt_mod(Int(target), p, 1).convert_to<long>();
  FpPoly rep = FpPoly::constant(p, urep);
  FpPoly cof = FpPoly::constant(p, sigma);
  for (const auto& [pi, e] : fp_factor(f)) {
    if (e % 2 != 0) rep = rep * pi;
    for (long i = 0; i < e / 2; ++i) cof = cof * pi;
  }
  return {rep, cof};
}

FqField::FqField(FpPoly m) : m_(std::move(m)), q_(1) {
  if (m_.degree() < 1 || m_.leading() != 1 || !fp_irreducible(m_))
    throw std::invalid_argument("FqField: modulus must be monic irreducible");
  for (long i = 0; i < m_.degree(); ++i) q_ *= m_.p();
}

FpPoly FqField::reduce(const FpPoly& a) const { return a.divmod(m_).second; }
FpPoly FqField::add(const FpPoly& a, const FpPoly& b) const {
  return reduce(a + b);
}
FpPoly FqField::sub(const FpPoly& a, const FpPoly& b) const {
  return reduce(a - b);
}
FpPoly FqField::neg(const FpPoly& a) const { return reduce(-a); }
FpPoly FqField::mul(const FpPoly& a, const FpPoly& b) const {
  return reduce(a * b);
}

FpPoly FqField::inv(const FpPoly& a) const {
  FpPoly r = reduce(a);
  if (r.is_zero()) throw std::domain_error("FqField::inv: zero element");
  auto e = fp_ext_gcd(r, m_);
  if (e.g.degree() != 0) throw std::logic_error("FqField::inv: modulus split");
  return reduce(e.s);
}

FpPoly FqField::pow(const FpPoly& a, Int e) const {
  return fp_powmod(a, std::move(e), m_);
}

bool FqField::is_square(const FpPoly& a) const {
  FpPoly r = reduce(a);
  if (r.is_zero()) throw std::invalid_argument("FqField::is_square: zero");
  return pow(r, (q_ - 1) / 2) == one();
}

FpPoly FqField::element(const Int& idx) const {
  Int n = idx;
  std::vector<long> c;
  while (n > 0) {
    c.push_back(Int(n % p()).convert_to<long>());
    n /= p();
  }
  if (static_cast<long>(c.size()) > degree())
    throw std::invalid_argument("FqField::element: index out of range");
  return FpPoly(p(), std::move(c));
}

FpPoly FqField::nonsquare() const {
  for (Int i = 1; i < q_; ++i) {
    FpPoly a = element(i);
    if (!is_square(a)) return a;
  }
  throw std::logic_error("FqField::nonsquare: none found");
}

std::optional<FpPoly> FqField::sqrt(const FpPoly& a) const {
  FpPoly r = reduce(a);
  if (r.is_zero()) return zero();
  if (!is_square(r)) return std::nullopt;
  FpPoly root = zero();
  if (q_ % 4 == 3) {
    root = pow(r, (q_ + 1) / 4);
  } else {
    // Tonelli-Shanks
    Int m = q_ - 1;
    long s = 0;
    while (m % 2 == 0) {
      m /= 2;
      ++s;
    }
    FpPoly z = nonsquare();
    FpPoly c = pow(z, m);
    FpPoly t = pow(r, m);
    FpPoly x = pow(r, (m + 1) / 2);
    long mexp = s;
    while (!(t == one())) {
      long i = 0;
      FpPoly tt = t;
      while (!(tt == one())) {
        tt = mul(tt, tt);
        ++i;
      }
      FpPoly b = c;
      for (long j = 0; j < mexp - i - 1; ++j) b = mul(b, b);
      x = mul(x, b);
      c = mul(b, b);
      t = mul(t, c);
      mexp = i;
    }
    root = x;
  }
  // canonical representative: smaller enumeration index of the two roots
  FpPoly other = neg(root);
  auto index = [this](const FpPoly& e) {
    Int v = 0, w = 1;
    for (long k = 0; k <= e.degree(); ++k) {
      v += w * e[k];
      w *= p();
    }
    return v;
  };
  return index(other) < index(root) ? other : root;
}

SqrtMod sqrt_mod_squarefree(const FpPoly& r, const FpPoly& A) {
  if (A.degree() < 0 || A.is_zero() || A.leading() != 1)
    throw std::invalid_argument("sqrt_mod_squarefree: A must be monic");
  std::int64_t p = A.p();
  if (A.degree() == 0) return {FpPoly(p), std::nullopt};
  SqrtMod res;
  FpPoly w(p);
  for (const auto& [pi, e] : fp_factor(A)) {
    if (e != 1)
      throw std::invalid_argument("sqrt_mod_squarefree: A not squarefree");
    FpPoly rpi = r.divmod(pi).second;
    FpPoly wpi(p);
    if (!rpi.is_zero()) {
      FqField F(pi);
      auto root = F.sqrt(rpi);
      if (!root) {
        res.obstruction = pi;
        return res;
      }
      wpi = *root;
    }
    // CRT: w += wpi * (A/pi) * ((A/pi)^-1 mod pi)
    FpPoly Mi = A.divmod(pi).first;
    FqField F(pi);
    FpPoly inv_i = F.inv(F.reduce(Mi));
    w = (w + wpi * Mi * inv_i).divmod(A).second;
  }
  res.root = w;
  return res;
}

std::optional<std::vector<FpPoly>> fq_form_zero(
    const FqField& F, const std::vector<FpPoly>& a) {
  size_t n = a.size();
  std::vector<FpPoly> c;
  for (const auto& x : a) {
    FpPoly r = F.reduce(x);
    if (r.is_zero())
      throw std::invalid_argument("fq_form_zero: degenerate coefficient");
    c.push_back(r);
  }
  if (n <= 1) return std::nullopt;
  std::vector<FpPoly> out(n, F.zero());
  if (n == 2) {
    // c0 x^2 + c1 y^2 = 0 with y = 1 needs x = sqrt(-c1/c0)
    FpPoly s = F.neg(F.mul(c[1], F.inv(c[0])));
    auto root = F.sqrt(s);
    if (!root) return std::nullopt;
    out[0] = *root;
    out[1] = F.one();
    return out;
  }
  // c0 x^2 + c1 y^2 = -c2, z = 1
  auto [x, y] = fq_binary_represent(F, c[0], c[1], F.neg(c[2]));
  out[0] = x;
  out[1] = y;
  out[2] = F.one();
  return out;
}

std::pair<FpPoly, FpPoly> fq_binary_represent(const FqField& F,
                                              const FpPoly& a1,
                                              const FpPoly& a2,
                                              const FpPoly& v) {
  FpPoly b1 = F.reduce(a1), b2 = F.reduce(a2), w = F.reduce(v);
  if (b1.is_zero() || b2.is_zero() || w.is_zero())
    throw std::invalid_argument("fq_binary_represent: zero argument");
  for (Int i = 0; i < F.size(); ++i) {
    FpPoly x = F.element(i);
    FpPoly rhs = F.mul(F.sub(w, F.mul(b1, F.mul(x, x))), F.inv(b2));
    if (rhs.is_zero()) {
      FpPoly y = F.zero();
      return {x, y};
    }
    if (F.is_square(rhs)) return {x, *F.sqrt(rhs)};
  }
  throw std::logic_error("fq_binary_represent: no representation found");
}

FpRat::FpRat(FpPoly n, FpPoly d) : n_(std::move(n)), d_(std::move(d)) {
  if (n_.p() != d_.p()) throw std::invalid_argument("FpRat: mixed fields");
  if (d_.is_zero()) throw std::invalid_argument("FpRat: zero denominator");
  if (n_.is_zero()) {
    d_ = FpPoly::constant(p(), 1);
    return;
  }
  FpPoly g = fp_gcd(n_, d_);
  if (g.degree() >= 1) {
    n_ = n_.divmod(g).first;
    d_ = d_.divmod(g).first;
  }
  long il = inv_p(d_.leading(), p());
  n_ = n_.scale(il);
  d_ = d_.scale(il);
}

FpRat::FpRat(FpPoly n) : n_(std::move(n)), d_(FpPoly::constant(n_.p(), 1)) {
  if (n_.is_zero()) d_ = FpPoly::constant(p(), 1);
}

FpRat FpRat::operator+(const FpRat& o) const {
  return FpRat(n_ * o.d_ + o.n_ * d_, d_ * o.d_);
}

FpRat FpRat::operator-(const FpRat& o) const { return *this + (-o); }

FpRat FpRat::operator-() const {
  FpRat r = *this;
  r.n_ = -r.n_;
  return r;
}

FpRat FpRat::operator*(const FpRat& o) const {
  return FpRat(n_ * o.n_, d_ * o.d_);
}

FpRat FpRat::operator/(const FpRat& o) const {
  if (o.is_zero()) throw std::invalid_argument("FpRat: division by zero");
  return FpRat(n_ * o.d_, d_ * o.n_);
}

long FpRat::order_at(const FpPoly& pi) const {
  if (is_zero()) throw std::domain_error("FpRat::order_at: zero function");
  auto count = [&](FpPoly f) {
    long e = 0;
    while (true) {
      auto [q, r] = f.divmod(pi);
      if (!r.is_zero()) break;
      f = q;
      ++e;
    }
    return e;
  };
  return count(n_) - count(d_);
}

long FpRat::order_at_infinity() const {
  if (is_zero())
    throw std::domain_error("FpRat::order_at_infinity: zero function");
  return d_.degree() - n_.degree();
}

std::pair<FpPoly, FpRat> FpRat::square_class() const {
  if (is_zero()) throw std::domain_error("FpRat::square_class: zero function");
  auto [rep, h] = fp_square_class(n_ * d_);
  return {rep, FpRat(h, d_)};
}

bool FpRat::is_square() const {
  if (is_zero()) return true;
  return square_class().first.is_one();
}

std::optional<FpRat> FpRat::sqrt() const {
  if (is_zero()) return FpRat(p());
  auto [rep, cof] = square_class();
  if (!rep.is_one()) return std::nullopt;
  return cof;
}

std::string FpRat::str(const std::string& var) const {
  if (d_.is_one()) return n_.str(var);
  std::string ns = n_.str(var);
  long terms = 0;
  for (long c : n_.coeffs())
    if (c != 0) ++terms;
  if (terms > 1) ns = "(" + ns + ")";
  return ns + "/(" + d_.str(var) + ")";
}

}  // namespace berk
