#pragma once

// Vertex sets (finite sets of disc points with integer log-radii), their dual
// graphs, specialization of points of the line to the special fiber, local
// parameters at fiber points, and monomial factorization of functions there.
//
// Complement components of a join-closed vertex set are open discs or open
// annuli; they correspond to the closed points of the special fiber of the
// associated model, with vertices as components and edges as double points.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "berk/divisor.hpp"
#include "berk/fq.hpp"
#include "berk/line.hpp"
#include "berk/numbers.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

class VertexSet {
 public:
  // Canonicalizes centers, sorts by (s, center), removes duplicates.
  VertexSet(std::int64_t p, std::vector<std::pair<Rat, long>> verts);

  std::int64_t p() const { return p_; }
  const std::vector<std::pair<Rat, long>>& verts() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Rat& center(std::size_t i) const { return v_[i].first; }
  long s(std::size_t i) const { return v_[i].second; }
  BerkPoint point(std::size_t i) const;

  std::optional<std::size_t> index_of(const BerkPoint& x) const;
  bool join_closed() const;
  VertexSet join_closure() const;

  std::string str() const;

 private:
  std::int64_t p_;
  std::vector<std::pair<Rat, long>> v_;
};

struct Edge {
  std::size_t parent, child;
  long length;  // s(child) - s(parent); 1 for a regular double point
};

// Rooted containment tree of a join-closed vertex set: the root is the
// outermost disc, the parent of v is the smallest vertex disc strictly
// containing v.  Edges are ordered by child index.
struct DualGraph {
  std::size_t root = 0;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<Edge> edges;
};

DualGraph dual_graph(const VertexSet& S);

// A closed or generic point of the special fiber.  Smooth points carry the
// residue class on their component as a monic irreducible over F_p (degree
// one for rational classes) or the infinity class; the infinity class is
// smooth only on the root component (elsewhere it is the double point of the
// edge to the parent).
struct FiberPoint {
  enum class Kind { Generic, Smooth, Double };

  static FiberPoint generic(std::size_t component, std::int64_t p);
  static FiberPoint smooth(std::size_t component, FpPoly residue_class);
  static FiberPoint smooth_rational(std::size_t component, std::int64_t p,
                                    long cls);
  static FiberPoint smooth_infinity(std::size_t component, std::int64_t p);
  static FiberPoint double_point(std::size_t edge, std::int64_t p);

  Kind kind = Kind::Generic;
  std::size_t component = 0;  // Generic, Smooth
  std::size_t edge = 0;       // Double
  bool at_infinity = false;
  FpPoly residue_class;       // Smooth, finite classes

  long degree() const;  // residue degree over F_p (1 for Double/Generic)
  bool operator==(const FiberPoint& o) const;
  std::string str(const VertexSet& S) const;
};

// Specialization of a point to the special fiber.  Rigid points of degree
// one, the point at infinity, and disc points are supported; for conjugate
// clusters of higher-degree points use closure_contains.
FiberPoint specialize(const BerkPoint& x, const VertexSet& S);

// The complement component containing x (which must not lie in S).
struct ComponentDesc {
  enum class Kind { InsideDisc, OutsideDisc, Annulus };
  Kind kind = Kind::InsideDisc;
  Rat center;
  Rat lo, hi;          // InsideDisc: {v(T-center) > lo}; OutsideDisc:
                       // {v(T-center) < lo}; Annulus: {lo < v(T-center) < hi}
  std::size_t outer = 0;  // boundary vertex on the outside
  std::size_t inner = 0;  // Annulus: boundary vertex on the inside
  std::string str(std::int64_t p) const;
};

ComponentDesc complement_component(const BerkPoint& x, const VertexSet& S);
bool component_contains(const ComponentDesc& C, const BerkPoint& x,
                        std::int64_t p);
// The closed fiber point a component reduces to.
FiberPoint component_fiber_point(const ComponentDesc& C, const VertexSet& S);

// Whether the Zariski closure of a closed point of the generic fiber meets
// the given fiber point; exact for higher-degree points via Newton polygon
// root counting of the conjugate cluster.
bool closure_contains(const ClosedPoint& z, const FiberPoint& P,
                      const VertexSet& S);

struct LocalParams {
  RatFunc alpha, beta;
  std::string chart_note;
};

// Local parameters at a fiber point.  At a smooth point alpha = p is the
// vertical uniformizer and beta cuts the residue class; at a double point of
// a unit-length edge alpha and beta are the two branch equations with
// alpha * beta = p.
LocalParams local_params(const FiberPoint& P, const VertexSet& S);

struct FactorAt {
  long n = 0, m = 0;
  RatFunc unit;                  // a * alpha^{-n} * beta^{-m}
  std::string unit_certificate;  // residue of the unit at P, shown nonzero
  // Value of the unit in kappa(P), reduced mod the residue class for smooth
  // points (constant for rational classes and double points); empty for
  // generic points, whose residue is a full rational function of t.
  std::optional<FpPoly> residue;
};

// a = unit * alpha^n * beta^m with the unit invertible at P.  Requires that P
// does not meet the closure of the divisor of a, and a unit-length edge for
// double points.
FactorAt factor_at(const RatFunc& a, const FiberPoint& P, const VertexSet& S);

// Whether finitely many oriented open discs cover the whole line.
bool covers_line(const std::vector<DiscDesc>& discs, std::int64_t p);

enum class ModelVariant { C1, C2, C3 };

// Vertex set of a model adapted to disjointly-oriented neighborhoods of the
// points of Z (one open disc per point, with a single type-2 boundary each).
//   C1: the boundary points;
//   C2: C1 plus a base point s0 outside every neighborhood (a default is
//       chosen in the uncovered region when none is supplied);
//   C3: C2 plus a midpoint on the tree path between every two boundaries.
// The result is returned join-closed and canonical.
VertexSet build_model(std::int64_t p, const std::vector<BerkPoint>& z,
                      const std::vector<DiscDesc>& neighborhoods,
                      ModelVariant variant,
                      const std::optional<std::pair<Rat, long>>& s0 =
                          std::nullopt);

}  // namespace berk
