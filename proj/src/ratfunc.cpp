#include "berk/ratfunc.hpp"

#include <sstream>

namespace berk {

RatFunc::RatFunc(QPoly n, QPoly d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
  if (num_.is_zero()) {
    den_ = QPoly(Rat(1));
    return;
  }
  QPoly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = num_.divmod(g).first;
    den_ = den_.divmod(g).first;
  }
  Rat lc = den_.leading();
  if (lc != 1) {
    num_ = num_ * (Rat(1) / lc);
    den_ = den_ * (Rat(1) / lc);
  }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator-() const {
  RatFunc r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

bool RatFunc::operator==(const RatFunc& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("RatFunc: inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::flip() const {
  long dn = num_.degree(), dd = den_.degree();
  if (is_zero()) return RatFunc();
  QPoly n = num_.reversed(), d = den_.reversed();
  // f(1/T) = T^(dd-dn) * rev(num)/rev(den)
  long k = dd - dn;
  if (k >= 0) return RatFunc(n * QPoly::monomial(k, Rat(1)), d);
  return RatFunc(n, d * QPoly::monomial(-k, Rat(1)));
}

RatFunc RatFunc::compose_affine(const Rat& a, const Rat& b) const {
  return RatFunc(num_.compose_affine(a, b), den_.compose_affine(a, b));
}

std::optional<Rat> RatFunc::eval(const Rat& x) const {
  Rat d = den_.eval(x);
  if (d == 0) {
    if (num_.eval(x) == 0)
      throw std::logic_error("RatFunc: non-canonical common zero");
    return std::nullopt;
  }
  return num_.eval(x) / d;
}

namespace {

long mult_at(const QPoly& f, const Rat& c) {
  if (f.is_zero()) throw std::domain_error("mult_at of zero");
  QPoly lin(std::vector<Rat>{-c, Rat(1)});
  QPoly g = f;
  long m = 0;
  while (true) {
    auto [q, r] = g.divmod(lin);
    if (!r.is_zero()) return m;
    ++m;
    g = q;
  }
}

}  // namespace

ValExt RatFunc::order_at(const Rat& c) const {
  if (is_zero()) return ValExt::plus_inf();
  return ValExt(Rat(mult_at(num_, c) - mult_at(den_, c)));
}

ValExt RatFunc::order_at_infinity() const {
  if (is_zero()) return ValExt::plus_inf();
  return ValExt(Rat(den_.degree() - num_.degree()));
}

std::optional<RatFunc> RatFunc::sqrt_exact() const {
  if (is_zero()) return RatFunc();
  auto sn = poly_sqrt(num_ * den_);
  if (!sn) return std::nullopt;
  // num/den = (num*den)/den^2
  return RatFunc(*sn, den_);
}

namespace {

// Invert a power series (u[0] != 0) modulo X^n.
std::vector<Rat> series_inverse(const std::vector<Rat>& u, long n) {
  std::vector<Rat> r(static_cast<size_t>(n), Rat(0));
  r[0] = Rat(1) / u[0];
  for (long k = 1; k < n; ++k) {
    Rat acc(0);
    for (long j = 1; j <= k; ++j) {
      Rat uj = j < static_cast<long>(u.size()) ? u[static_cast<size_t>(j)] : Rat(0);
      acc += uj * r[static_cast<size_t>(k - j)];
    }
    r[static_cast<size_t>(k)] = -acc * r[0];
  }
  return r;
}

LaurentSeries expand_shifted(const QPoly& n, const QPoly& d, long terms) {
  if (terms <= 0) throw std::invalid_argument("expand: need at least one term");
  if (n.is_zero()) return LaurentSeries{};
  long on = 0;
  while (n[on] == 0) ++on;
  long od = 0;
  while (d[od] == 0) ++od;
  std::vector<Rat> nu, du;
  for (long k = on; k <= n.degree(); ++k) nu.push_back(n[k]);
  for (long k = od; k <= d.degree(); ++k) du.push_back(d[k]);
  std::vector<Rat> inv = series_inverse(du, terms);
  LaurentSeries s;
  s.lead = on - od;
  s.c.assign(static_cast<size_t>(terms), Rat(0));
  for (long k = 0; k < terms; ++k) {
    Rat acc(0);
    for (long j = 0; j <= k; ++j) {
      Rat nj = j < static_cast<long>(nu.size()) ? nu[static_cast<size_t>(j)] : Rat(0);
      acc += nj * inv[static_cast<size_t>(k - j)];
    }
    s.c[static_cast<size_t>(k)] = acc;
  }
  return s;
}

}  // namespace

LaurentSeries RatFunc::expand_at(const Rat& c, long n) const {
  return expand_shifted(num_.compose_affine(c, Rat(1)),
                        den_.compose_affine(c, Rat(1)), n);
}

LaurentSeries RatFunc::expand_at_infinity(long n) const {
  RatFunc f = flip();
  return expand_shifted(f.num_, f.den_, n);
}

std::string RatFunc::str(const std::string& var) const {
  if (den_.degree() == 0) return num_.str(var);
  std::ostringstream os;
  os << "(" << num_.str(var) << ")/(" << den_.str(var) << ")";
  return os.str();
}

std::optional<QPoly> poly_sqrt(const QPoly& f) {
  if (f.is_zero()) return QPoly();
  if (f.degree() % 2 != 0) return std::nullopt;
  auto lc = rat_sqrt(f.leading());
  if (!lc) return std::nullopt;
  // Long division from the top: r^2 = f determines r coefficient by
  // coefficient once the leading one is fixed.
  long h = f.degree() / 2;
  std::vector<Rat> r(static_cast<size_t>(h) + 1, Rat(0));
  r[static_cast<size_t>(h)] = *lc;
  for (long k = h - 1; k >= 0; --k) {
    // Coefficient of T^(k+h) in r^2 must match f.
    Rat acc(0);
    for (long i = k + 1; i < h; ++i) {
      long j = k + h - i;
      if (j > h || j <= k) continue;
      acc += r[static_cast<size_t>(i)] * r[static_cast<size_t>(j)];
    }
    r[static_cast<size_t>(k)] =
        (f[k + h] - acc) / (Rat(2) * r[static_cast<size_t>(h)]);
  }
  QPoly cand{std::vector<Rat>(r)};
  if (cand * cand == f) return cand;
  return std::nullopt;
}

std::optional<Rat> rat_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rat(0);
  Int n = boost::multiprecision::sqrt(num(q));
  Int d = boost::multiprecision::sqrt(den(q));
  if (n * n != num(q) || d * d != den(q)) return std::nullopt;
  return Rat(n, d);
}

}  // namespace berk
