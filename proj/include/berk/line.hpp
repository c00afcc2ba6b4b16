#pragma once

// Points of the Berkovich projective line over Q_p and the basic tree
// operations on them.  A disc point eta(a, s) is the sup-seminorm over the
// closed disc {v_p(T - a) >= s}; s is the log-radius (radius p^{-s}).  Rigid
// points are radius-zero limits: rational centers, the point at infinity, and
// formal higher-degree points carrying their minimal polynomial.

#include <cstdint>
#include <string>

#include "berk/field_desc.hpp"
#include "berk/fq.hpp"
#include "berk/numbers.hpp"
#include "berk/poly.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

class BerkPoint {
 public:
  enum class Kind { RigidRational, RigidInfinity, RigidIrreducible, Eta };

  static BerkPoint rigid(Rat c);
  static BerkPoint infinity();
  // minpoly must be monic irreducible of degree >= 2.
  static BerkPoint rigid_irreducible(QPoly minpoly);
  static BerkPoint eta(Rat a, Rat s);

  Kind kind() const { return kind_; }
  bool is_eta() const { return kind_ == Kind::Eta; }
  bool is_rigid() const { return kind_ != Kind::Eta; }

  const Rat& center() const;      // RigidRational or Eta
  const Rat& log_radius() const;  // Eta only
  const QPoly& minpoly() const;   // RigidIrreducible only
  long degree() const;            // 1 except RigidIrreducible

  std::string str() const;

 private:
  BerkPoint() = default;
  Kind kind_ = Kind::RigidInfinity;
  Rat center_;
  Rat s_;
  QPoly minpoly_;
};

// Equality as seminorms: eta(a, s) = eta(b, s) iff v_p(a - b) >= s.
bool points_equal(const BerkPoint& x, const BerkPoint& y, std::int64_t p);

// Same point with the eta center truncated to its canonical representative.
BerkPoint canonical_point(const BerkPoint& x, std::int64_t p);

// 1 for rigid points, 2 for disc points.
int classify(const BerkPoint& x);

// The valuation q with |f|_x = p^{-q}.  +inf iff f vanishes at a rigid x or
// f = 0; -inf at a rigid pole.  Disc points never give +-inf for f != 0.
// Higher-degree rigid points are rejected: their residue valuations need not
// be single-valued over Q_p.
ValExt seminorm_val(const RatFunc& f, const BerkPoint& x, std::int64_t p);

// Smallest disc point dominating both arguments.  Errors when x = y, and for
// inputs with no bounded enclosing disc (the point at infinity) or without a
// single Q_p-location (higher-degree rigid points).
BerkPoint join(const BerkPoint& x, const BerkPoint& y, std::int64_t p);

// Retraction onto the path Gamma_b = [rigid(b), infinity]: the unique point
// of Gamma_b with |T - b| preserved.
BerkPoint retract(const Rat& b, const BerkPoint& x, std::int64_t p);

// Disc containment order: leq(x, y) iff the disc of x is contained in the
// disc of y (rigid rational points are radius-zero discs).
bool leq(const BerkPoint& x, const BerkPoint& y, std::int64_t p);

struct DiscDesc {
  Rat center;
  Rat s;             // log-radius of the boundary
  bool closed;       // whether the boundary sphere is included
  bool inside;       // true: {v(T-center) >= s} side; false: the complement
                     // side, which contains the point at infinity
  std::string str(std::int64_t p) const;
};

bool in_disc(const BerkPoint& x, const DiscDesc& D, std::int64_t p);

// Same disc described from the member beta; requires rigid(beta) in D and an
// inside-oriented D (complement discs have no finite canonical center).
DiscDesc recenter(const DiscDesc& D, const Rat& beta, std::int64_t p);

// Completed-residue-field descriptor of a point.
BaseFieldDesc residue_field_desc(const BerkPoint& x, std::int64_t p);

// Reduction of the unit part f * p^{-v} (v = seminorm_val at eta(a, s)) along
// the component of eta(a, s), written in the normalized coordinate
// t = p^{-s}(T - a).  Requires integer s and f != 0.
FpRat residue_at_eta(const RatFunc& f, const Rat& a, long s, std::int64_t p);

}  // namespace berk
