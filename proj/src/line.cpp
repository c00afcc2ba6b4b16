#include "berk/line.hpp"

#include <stdexcept>
#include <utility>

#include "berk/qfactor.hpp"

namespace berk {

namespace {

// Higher-degree rigid points are formal: over Q_p their conjugates can split
// into several locations, so single-point tree operations reject them.
[[noreturn]] void reject_irreducible(const char* op) {
  throw std::domain_error(std::string(op) +
                          ": higher-degree rigid point has no single "
                          "location over Q_p");
}

}  // namespace

BerkPoint BerkPoint::rigid(Rat c) {
  BerkPoint x;
  x.kind_ = Kind::RigidRational;
  x.center_ = std::move(c);
  return x;
}

BerkPoint BerkPoint::infinity() {
  BerkPoint x;
  x.kind_ = Kind::RigidInfinity;
  return x;
}

BerkPoint BerkPoint::rigid_irreducible(QPoly minpoly) {
  if (minpoly.degree() < 2) {
    throw std::invalid_argument(
        "rigid_irreducible: degree must be >= 2 (use rigid for rational "
        "points)");
  }
  if (!(minpoly.leading() == Rat(1))) {
    throw std::invalid_argument("rigid_irreducible: minpoly must be monic");
  }
  if (!is_irreducible_over_q(minpoly)) {
    throw std::invalid_argument(
        "rigid_irreducible: minpoly must be irreducible over Q");
  }
  BerkPoint x;
  x.kind_ = Kind::RigidIrreducible;
  x.minpoly_ = std::move(minpoly);
  return x;
}

BerkPoint BerkPoint::eta(Rat a, Rat s) {
  BerkPoint x;
  x.kind_ = Kind::Eta;
  x.center_ = std::move(a);
  x.s_ = std::move(s);
  return x;
}

const Rat& BerkPoint::center() const {
  if (kind_ != Kind::RigidRational && kind_ != Kind::Eta) {
    throw std::domain_error("BerkPoint::center: point has no finite center");
  }
  return center_;
}

const Rat& BerkPoint::log_radius() const {
  if (kind_ != Kind::Eta) {
    throw std::domain_error("BerkPoint::log_radius: not a disc point");
  }
  return s_;
}

const QPoly& BerkPoint::minpoly() const {
  if (kind_ != Kind::RigidIrreducible) {
    throw std::domain_error("BerkPoint::minpoly: not a higher-degree point");
  }
  return minpoly_;
}

long BerkPoint::degree() const {
  return kind_ == Kind::RigidIrreducible ? minpoly_.degree() : 1;
}

std::string BerkPoint::str() const {
  switch (kind_) {
    case Kind::RigidRational:
      return "rigid(" + rat_str(center_) + ")";
    case Kind::RigidInfinity:
      return "rigid(inf)";
    case Kind::RigidIrreducible:
      return "rigid[" + minpoly_.str() + "]";
    case Kind::Eta:
      return "eta(" + rat_str(center_) + ", " + rat_str(s_) + ")";
  }
  return "";
}

bool points_equal(const BerkPoint& x, const BerkPoint& y, std::int64_t p) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case BerkPoint::Kind::RigidRational:
      return x.center() == y.center();
    case BerkPoint::Kind::RigidInfinity:
      return true;
    case BerkPoint::Kind::RigidIrreducible:
      return x.minpoly() == y.minpoly();
    case BerkPoint::Kind::Eta: {
      if (!(x.log_radius() == y.log_radius())) return false;
      Rat d = x.center() - y.center();
      if (d == 0) return true;
      return Rat(vp(d, p)) >= x.log_radius();
    }
  }
  return false;
}

BerkPoint canonical_point(const BerkPoint& x, std::int64_t p) {
  if (!x.is_eta()) return x;
  long lvl = to_long(ceil_rat(x.log_radius()));
  return BerkPoint::eta(canonical_center(x.center(), p, lvl), x.log_radius());
}

int classify(const BerkPoint& x) { return x.is_eta() ? 2 : 1; }

ValExt seminorm_val(const RatFunc& f, const BerkPoint& x, std::int64_t p) {
  require_odd_prime(p);
  if (f.is_zero()) return ValExt::plus_inf();
  switch (x.kind()) {
    case BerkPoint::Kind::RigidRational: {
      const Rat& c = x.center();
      ValExt ord = f.order_at(c);
      if (ord.value() > 0) return ValExt::plus_inf();
      if (ord.value() < 0) return ValExt::minus_inf();
      // num and den are coprime, so neither vanishes at c here.
      Rat v = f.num().eval(c) / f.den().eval(c);
      return ValExt(Rat(vp(v, p)));
    }
    case BerkPoint::Kind::RigidInfinity: {
      ValExt ord = f.order_at_infinity();
      if (ord.value() > 0) return ValExt::plus_inf();
      if (ord.value() < 0) return ValExt::minus_inf();
      Rat v = f.num().leading() / f.den().leading();
      return ValExt(Rat(vp(v, p)));
    }
    case BerkPoint::Kind::RigidIrreducible:
      reject_irreducible("seminorm");
    case BerkPoint::Kind::Eta: {
      const Rat& a = x.center();
      const Rat& s = x.log_radius();
      ValExt n = f.num().compose_affine(a, Rat(1)).gauss_val(p, s);
      ValExt d = f.den().compose_affine(a, Rat(1)).gauss_val(p, s);
      return n + (-d);
    }
  }
  throw std::logic_error("seminorm_val: unreachable");
}

BerkPoint join(const BerkPoint& x, const BerkPoint& y, std::int64_t p) {
  require_odd_prime(p);
  if (points_equal(x, y, p)) {
    throw std::invalid_argument("join: the two points coincide");
  }
  if (x.kind() == BerkPoint::Kind::RigidInfinity ||
      y.kind() == BerkPoint::Kind::RigidInfinity) {
    throw std::invalid_argument(
        "join: no bounded disc contains the point at infinity");
  }
  if (x.kind() == BerkPoint::Kind::RigidIrreducible ||
      y.kind() == BerkPoint::Kind::RigidIrreducible) {
    reject_irreducible("join");
  }
  const Rat& a = x.center();
  const Rat& b = y.center();
  ValExt sx = x.is_eta() ? ValExt(x.log_radius()) : ValExt::plus_inf();
  ValExt sy = y.is_eta() ? ValExt(y.log_radius()) : ValExt::plus_inf();
  ValExt m = vp_ext(a - b, p);
  ValExt s = sx <= sy ? sx : sy;
  if (m < s) s = m;
  // x != y rules out two equal rigid centers, so s is finite.
  return canonical_point(BerkPoint::eta(a, s.value()), p);
}

BerkPoint retract(const Rat& b, const BerkPoint& x, std::int64_t p) {
  require_odd_prime(p);
  switch (x.kind()) {
    case BerkPoint::Kind::RigidInfinity:
      return x;  // already on Gamma_b
    case BerkPoint::Kind::RigidIrreducible:
      reject_irreducible("retract");
    case BerkPoint::Kind::RigidRational: {
      if (x.center() == b) return x;
      return canonical_point(
          BerkPoint::eta(b, Rat(vp(x.center() - b, p))), p);
    }
    case BerkPoint::Kind::Eta: {
      ValExt m = vp_ext(x.center() - b, p);
      Rat s = x.log_radius();
      if (m.finite() && m.value() < s) s = m.value();
      return canonical_point(BerkPoint::eta(b, s), p);
    }
  }
  throw std::logic_error("retract: unreachable");
}

bool leq(const BerkPoint& x, const BerkPoint& y, std::int64_t p) {
  if (points_equal(x, y, p)) return true;
  if (!y.is_eta()) return false;  // rigid points are minimal
  if (x.kind() == BerkPoint::Kind::RigidInfinity) return false;
  if (x.kind() == BerkPoint::Kind::RigidIrreducible) reject_irreducible("leq");
  const Rat& sy = y.log_radius();
  if (x.is_eta() && x.log_radius() < sy) return false;
  ValExt m = vp_ext(x.center() - y.center(), p);
  return m >= ValExt(sy);
}

std::string DiscDesc::str(std::int64_t p) const {
  std::string rel = inside ? (closed ? ">=" : ">") : (closed ? "<=" : "<");
  std::string var = "T";
  if (center > 0) {
    var += " - " + rat_str(center);
  } else if (center < 0) {
    var += " + " + rat_str(-center);
  }
  return "{v_" + std::to_string(p) + "(" + var + ") " + rel + " " +
         rat_str(s) + "}" + (inside ? "" : " + inf");
}

bool in_disc(const BerkPoint& x, const DiscDesc& D, std::int64_t p) {
  require_odd_prime(p);
  ValExt m;  // = v_x(T - center), the seminorm exponent of T - center at x
  switch (x.kind()) {
    case BerkPoint::Kind::RigidInfinity:
      m = ValExt::minus_inf();
      break;
    case BerkPoint::Kind::RigidIrreducible:
      reject_irreducible("in_disc");
    case BerkPoint::Kind::RigidRational:
      m = vp_ext(x.center() - D.center, p);
      break;
    case BerkPoint::Kind::Eta: {
      m = vp_ext(x.center() - D.center, p);
      if (ValExt(x.log_radius()) < m) m = ValExt(x.log_radius());
      break;
    }
  }
  ValExt s{D.s};
  if (D.inside) return D.closed ? m >= s : m > s;
  return D.closed ? m <= s : m < s;
}

DiscDesc recenter(const DiscDesc& D, const Rat& beta, std::int64_t p) {
  if (!D.inside) {
    throw std::invalid_argument(
        "recenter: a complement disc has no finite canonical center");
  }
  if (!in_disc(BerkPoint::rigid(beta), D, p)) {
    throw std::invalid_argument("recenter: beta is not a member of the disc");
  }
  return DiscDesc{beta, D.s, D.closed, D.inside};
}

BaseFieldDesc residue_field_desc(const BerkPoint& x, std::int64_t p) {
  require_odd_prime(p);
  BaseFieldDesc d;
  d.p = p;
  switch (x.kind()) {
    case BerkPoint::Kind::RigidRational:
    case BerkPoint::Kind::RigidInfinity:
      d.kind = BaseFieldDesc::Kind::PAdicRationals;
      d.degree = 1;
      d.note = "residue field F_" + std::to_string(p);
      return d;
    case BerkPoint::Kind::RigidIrreducible:
      d.kind = BaseFieldDesc::Kind::PAdicExtension;
      d.degree = x.degree();
      d.note = "splitting over Q_" + std::to_string(p) +
               " not computed; degree over Q recorded";
      return d;
    case BerkPoint::Kind::Eta: {
      const Rat& s = x.log_radius();
      if (den(s) != 1) {
        d.kind = BaseFieldDesc::Kind::Unknown;
        d.note = "log-radius " + rat_str(s) +
                 " is not an integer: residue field not a rational function "
                 "field over F_" + std::to_string(p);
        return d;
      }
      d.kind = BaseFieldDesc::Kind::RationalFunctionField;
      d.degree = 1;
      d.coordinate = "t = reduction of " + rat_str(pow_p(p, -s)) + "*(T - " +
                     rat_str(x.center()) + ")";
      return d;
    }
  }
  return d;
}

FpRat residue_at_eta(const RatFunc& f, const Rat& a, long s, std::int64_t p) {
  require_odd_prime(p);
  if (f.is_zero()) {
    throw std::invalid_argument("residue_at_eta: f must be nonzero");
  }
  // In the coordinate X = p^{-s}(T - a) the Gauss valuation at eta(a, s)
  // becomes the one at eta(0, 0): plain min of coefficient valuations.
  QPoly n = f.num().compose_affine(a, pow_p(p, s));
  QPoly d = f.den().compose_affine(a, pow_p(p, s));
  Rat vn = n.gauss_val(p, Rat(0)).value();
  Rat vd = d.gauss_val(p, Rat(0)).value();
  QPoly n1 = n * QPoly(pow_p(p, -vn));
  QPoly d1 = d * QPoly(pow_p(p, -vd));
  return FpRat(FpPoly::from_qpoly(n1, p), FpPoly::from_qpoly(d1, p));
}

}  // namespace berk
