#include "berk/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace berk {

namespace {

Rat eta_min(const Rat& a, const Rat& b) { return a < b ? a : b; }

// Number of roots of h (over an algebraic closure of Q_p) with positive
// valuation: the horizontal extent of the negative-slope part of the Newton
// polygon, i.e. the leftmost index attaining min_k v_p(h_k).
long count_val_pos(const QPoly& h, std::int64_t p) {
  if (h.is_zero()) throw std::invalid_argument("count_val_pos: zero");
  auto lines = h.val_lines(p);
  Rat best = lines.front().second;
  for (const auto& [k, v] : lines) best = eta_min(best, v);
  long arg = lines.back().first;
  for (const auto& [k, v] : lines) {
    if (v == best && k < arg) arg = k;
  }
  return arg;
}

// Number of roots with valuation >= 0: the rightmost index attaining the min.
long count_val_nonneg(const QPoly& h, std::int64_t p) {
  if (h.is_zero()) throw std::invalid_argument("count_val_nonneg: zero");
  auto lines = h.val_lines(p);
  Rat best = lines.front().second;
  for (const auto& [k, v] : lines) best = eta_min(best, v);
  long arg = lines.front().first;
  for (const auto& [k, v] : lines) {
    if (v == best && k > arg) arg = k;
  }
  return arg;
}

// Reduction mod p of h scaled to have min coefficient valuation 0.
FpPoly unit_part_reduction(const QPoly& h, std::int64_t p) {
  Rat mu = h.gauss_val(p, Rat(0)).value();
  return FpPoly::from_qpoly(h * QPoly(pow_p(p, -mu)), p);
}

}  // namespace

VertexSet::VertexSet(std::int64_t p, std::vector<std::pair<Rat, long>> verts)
    : p_(p) {
  require_odd_prime(p);
  if (verts.empty()) {
    throw std::invalid_argument("VertexSet: at least one vertex required");
  }
  for (auto& [a, s] : verts) a = canonical_center(a, p, s);
  std::sort(verts.begin(), verts.end(),
            [](const auto& x, const auto& y) {
              if (x.second != y.second) return x.second < y.second;
              return x.first < y.first;
            });
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  v_ = std::move(verts);
}

BerkPoint VertexSet::point(std::size_t i) const {
  return BerkPoint::eta(v_[i].first, Rat(v_[i].second));
}

std::optional<std::size_t> VertexSet::index_of(const BerkPoint& x) const {
  if (!x.is_eta()) return std::nullopt;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (points_equal(x, point(i), p_)) return i;
  }
  return std::nullopt;
}

bool VertexSet::join_closed() const {
  for (std::size_t i = 0; i < v_.size(); ++i) {
    for (std::size_t j = i + 1; j < v_.size(); ++j) {
      BerkPoint jn = join(point(i), point(j), p_);
      if (!index_of(jn)) return false;
    }
  }
  return true;
}

VertexSet VertexSet::join_closure() const {
  std::vector<std::pair<Rat, long>> acc = v_;
  bool grew = true;
  while (grew) {
    grew = false;
    VertexSet cur(p_, acc);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        BerkPoint jn = join(cur.point(i), cur.point(j), p_);
        if (!cur.index_of(jn)) {
          acc.emplace_back(jn.center(), to_long(num(jn.log_radius())));
          grew = true;
        }
      }
    }
    if (grew) acc = VertexSet(p_, acc).verts();
  }
  return VertexSet(p_, acc);
}

std::string VertexSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) out += ", ";
    out += "eta(" + rat_str(v_[i].first) + ", " + std::to_string(v_[i].second) +
           ")";
  }
  return out + "}";
}

DualGraph dual_graph(const VertexSet& S) {
  if (!S.join_closed()) {
    throw std::invalid_argument(
        "dual_graph: vertex set is not join-closed; add the joins (see "
        "VertexSet::join_closure)");
  }
  const std::int64_t p = S.p();
  DualGraph G;
  G.parent.assign(S.size(), std::nullopt);
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < S.size(); ++j) {
      if (j == i || S.s(j) >= S.s(i)) continue;
      ValExt d = vp_ext(S.center(i) - S.center(j), p);
      if (d < ValExt(Rat(S.s(j)))) continue;  // disc j does not contain i
      if (!best || S.s(j) > S.s(*best)) best = j;
    }
    G.parent[i] = best;
    if (!best) {
      if (root) {
        throw std::logic_error("dual_graph: two containment roots");
      }
      root = i;
    }
  }
  if (!root) throw std::logic_error("dual_graph: no containment root");
  G.root = *root;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (G.parent[i]) {
      G.edges.push_back(Edge{*G.parent[i], i, S.s(i) - S.s(*G.parent[i])});
    }
  }
  std::sort(G.edges.begin(), G.edges.end(),
            [](const Edge& a, const Edge& b) { return a.child < b.child; });
  return G;
}

FiberPoint FiberPoint::generic(std::size_t component, std::int64_t p) {
  FiberPoint P{Kind::Generic, component, 0, false, FpPoly(p)};
  return P;
}

FiberPoint FiberPoint::smooth(std::size_t component, FpPoly residue_class) {
  if (residue_class.degree() < 1 ||
      !(residue_class.monic() == residue_class) ||
      (residue_class.degree() > 1 && !fp_irreducible(residue_class))) {
    throw std::invalid_argument(
        "FiberPoint::smooth: residue class must be monic irreducible");
  }
  FiberPoint P{Kind::Smooth, component, 0, false, std::move(residue_class)};
  return P;
}

FiberPoint FiberPoint::smooth_rational(std::size_t component, std::int64_t p,
                                       long cls) {
  if (cls < 0 || cls >= p) {
    throw std::invalid_argument("FiberPoint: class representative out of range");
  }
  return smooth(component, FpPoly(p, {cls == 0 ? 0 : p - cls, 1}));
}

FiberPoint FiberPoint::smooth_infinity(std::size_t component, std::int64_t p) {
  FiberPoint P{Kind::Smooth, component, 0, true, FpPoly(p)};
  return P;
}

FiberPoint FiberPoint::double_point(std::size_t edge, std::int64_t p) {
  FiberPoint P{Kind::Double, 0, edge, false, FpPoly(p)};
  return P;
}

long FiberPoint::degree() const {
  if (kind == Kind::Smooth && !at_infinity) return residue_class.degree();
  return 1;
}

bool FiberPoint::operator==(const FiberPoint& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Generic:
      return component == o.component;
    case Kind::Double:
      return edge == o.edge;
    case Kind::Smooth:
      if (component != o.component || at_infinity != o.at_infinity)
        return false;
      return at_infinity || residue_class == o.residue_class;
  }
  return false;
}

std::string FiberPoint::str(const VertexSet& S) const {
  auto vtx = [&](std::size_t i) {
    return "eta(" + rat_str(S.center(i)) + ", " + std::to_string(S.s(i)) + ")";
  };
  switch (kind) {
    case Kind::Generic:
      return "generic(" + vtx(component) + ")";
    case Kind::Smooth:
      if (at_infinity) return "smooth(" + vtx(component) + "; t = inf)";
      return "smooth(" + vtx(component) + "; " + residue_class.str() + " = 0)";
    case Kind::Double: {
      DualGraph G = dual_graph(S);
      const Edge& e = G.edges[edge];
      return "double(" + vtx(e.parent) + " -- " + vtx(e.child) + ")";
    }
  }
  return "";
}

namespace {

// Residue class (in [0, p)) of the direction at vertex `v` containing the
// point with center `a`; requires v_p(a - center(v)) >= s(v).
long direction_class(const VertexSet& S, std::size_t v, const Rat& a) {
  Rat r = (a - S.center(v)) * pow_p(S.p(), -S.s(v));
  return to_long(mod_m(r, Int(S.p())));
}

struct Walk {
  enum class Where { OnVertex, Outside, FreeDirection, OnEdge };
  Where where = Where::Outside;
  std::size_t vertex = 0;  // OnVertex; FreeDirection/OnEdge: outer vertex
  std::size_t edge = 0;    // OnEdge: index into G.edges
  long cls = 0;            // FreeDirection
};

Walk walk_tree(const BerkPoint& x, const VertexSet& S, const DualGraph& G) {
  const std::int64_t p = S.p();
  if (x.kind() == BerkPoint::Kind::RigidIrreducible) {
    throw std::domain_error(
        "specialize: higher-degree rigid points form conjugate clusters; use "
        "closure_contains");
  }
  if (x.kind() == BerkPoint::Kind::RigidInfinity) {
    return Walk{Walk::Where::Outside, G.root, 0, 0};
  }
  ValExt sx = x.is_eta() ? ValExt(x.log_radius()) : ValExt::plus_inf();
  std::optional<std::size_t> deepest;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (x.is_eta() && points_equal(x, S.point(i), p)) {
      return Walk{Walk::Where::OnVertex, i, 0, 0};
    }
    ValExt m = vp_ext(x.center() - S.center(i), p);
    if (sx < m) m = sx;
    if (m < ValExt(Rat(S.s(i)))) continue;
    if (!deepest || S.s(i) > S.s(*deepest)) deepest = i;
  }
  if (!deepest) return Walk{Walk::Where::Outside, G.root, 0, 0};
  std::size_t v = *deepest;
  long cls = direction_class(S, v, x.center());
  // Join-closure leaves at most one child of v in any given direction.
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    if (G.edges[e].parent != v) continue;
    if (direction_class(S, v, S.center(G.edges[e].child)) == cls) {
      return Walk{Walk::Where::OnEdge, v, e, cls};
    }
  }
  return Walk{Walk::Where::FreeDirection, v, 0, cls};
}

void validate_fiber_point(const FiberPoint& P, const VertexSet& S,
                          const DualGraph& G) {
  switch (P.kind) {
    case FiberPoint::Kind::Generic:
      if (P.component >= S.size()) {
        throw std::invalid_argument("fiber point: component out of range");
      }
      return;
    case FiberPoint::Kind::Double:
      if (P.edge >= G.edges.size()) {
        throw std::invalid_argument("fiber point: edge out of range");
      }
      return;
    case FiberPoint::Kind::Smooth: {
      if (P.component >= S.size()) {
        throw std::invalid_argument("fiber point: component out of range");
      }
      if (P.at_infinity) {
        if (P.component != G.root) {
          throw std::invalid_argument(
              "fiber point: the infinity class off the root component is the "
              "double point of the edge to the parent");
        }
        return;
      }
      if (P.residue_class.degree() == 1) {
        long cls = (S.p() - P.residue_class[0]) % S.p();
        for (const Edge& e : G.edges) {
          if (e.parent == P.component &&
              direction_class(S, e.parent, S.center(e.child)) == cls) {
            throw std::invalid_argument(
                "fiber point: the class is occupied by an edge; the point "
                "there is a double point");
          }
        }
      }
      return;
    }
  }
}

}  // namespace

FiberPoint specialize(const BerkPoint& x, const VertexSet& S) {
  DualGraph G = dual_graph(S);
  Walk w = walk_tree(x, S, G);
  switch (w.where) {
    case Walk::Where::OnVertex:
      return FiberPoint::generic(w.vertex, S.p());
    case Walk::Where::Outside:
      return FiberPoint::smooth_infinity(G.root, S.p());
    case Walk::Where::FreeDirection:
      return FiberPoint::smooth_rational(w.vertex, S.p(), w.cls);
    case Walk::Where::OnEdge:
      return FiberPoint::double_point(w.edge, S.p());
  }
  throw std::logic_error("specialize: unreachable");
}

std::string ComponentDesc::str(std::int64_t p) const {
  std::string v = "v_" + std::to_string(p) + "(T - " + rat_str(center) + ")";
  switch (kind) {
    case Kind::InsideDisc:
      return "{" + v + " > " + rat_str(lo) + "}";
    case Kind::OutsideDisc:
      return "{" + v + " < " + rat_str(lo) + "} + inf";
    case Kind::Annulus:
      return "{" + rat_str(lo) + " < " + v + " < " + rat_str(hi) + "}";
  }
  return "";
}

ComponentDesc complement_component(const BerkPoint& x, const VertexSet& S) {
  DualGraph G = dual_graph(S);
  Walk w = walk_tree(x, S, G);
  ComponentDesc C;
  switch (w.where) {
    case Walk::Where::OnVertex:
      throw std::invalid_argument(
          "complement_component: the point lies in the vertex set");
    case Walk::Where::Outside:
      C.kind = ComponentDesc::Kind::OutsideDisc;
      C.center = S.center(G.root);
      C.lo = Rat(S.s(G.root));
      C.outer = G.root;
      return C;
    case Walk::Where::FreeDirection:
      C.kind = ComponentDesc::Kind::InsideDisc;
      C.center = S.center(w.vertex) + pow_p(S.p(), S.s(w.vertex)) * Rat(w.cls);
      C.lo = Rat(S.s(w.vertex));
      C.outer = w.vertex;
      return C;
    case Walk::Where::OnEdge: {
      const Edge& e = G.edges[w.edge];
      C.kind = ComponentDesc::Kind::Annulus;
      C.center = S.center(e.child);
      C.lo = Rat(S.s(e.parent));
      C.hi = Rat(S.s(e.child));
      C.outer = e.parent;
      C.inner = e.child;
      return C;
    }
  }
  throw std::logic_error("complement_component: unreachable");
}

bool component_contains(const ComponentDesc& C, const BerkPoint& x,
                        std::int64_t p) {
  ValExt m;
  switch (x.kind()) {
    case BerkPoint::Kind::RigidInfinity:
      m = ValExt::minus_inf();
      break;
    case BerkPoint::Kind::RigidIrreducible:
      throw std::domain_error(
          "component_contains: higher-degree rigid points form clusters");
    case BerkPoint::Kind::RigidRational:
      m = vp_ext(x.center() - C.center, p);
      break;
    case BerkPoint::Kind::Eta:
      m = vp_ext(x.center() - C.center, p);
      if (ValExt(x.log_radius()) < m) m = ValExt(x.log_radius());
      break;
  }
  switch (C.kind) {
    case ComponentDesc::Kind::InsideDisc:
      return m > ValExt(C.lo);
    case ComponentDesc::Kind::OutsideDisc:
      return m < ValExt(C.lo);
    case ComponentDesc::Kind::Annulus:
      return ValExt(C.lo) < m && m < ValExt(C.hi);
  }
  return false;
}

FiberPoint component_fiber_point(const ComponentDesc& C, const VertexSet& S) {
  DualGraph G = dual_graph(S);
  switch (C.kind) {
    case ComponentDesc::Kind::OutsideDisc:
      return FiberPoint::smooth_infinity(G.root, S.p());
    case ComponentDesc::Kind::InsideDisc:
      return FiberPoint::smooth_rational(C.outer, S.p(),
                                         direction_class(S, C.outer, C.center));
    case ComponentDesc::Kind::Annulus:
      for (std::size_t e = 0; e < G.edges.size(); ++e) {
        if (G.edges[e].parent == C.outer && G.edges[e].child == C.inner) {
          return FiberPoint::double_point(e, S.p());
        }
      }
      throw std::logic_error("component_fiber_point: annulus edge not found");
  }
  throw std::logic_error("component_fiber_point: unreachable");
}

bool closure_contains(const ClosedPoint& z, const FiberPoint& P,
                      const VertexSet& S) {
  DualGraph G = dual_graph(S);
  validate_fiber_point(P, S, G);
  const std::int64_t p = S.p();
  if (z.is_rational()) {
    return specialize(BerkPoint::rigid(z.value()), S) == P;
  }
  if (z.is_infinity()) {
    return specialize(BerkPoint::infinity(), S) == P;
  }
  const QPoly& g = z.minpoly();
  switch (P.kind) {
    case FiberPoint::Kind::Generic:
      return false;
    case FiberPoint::Kind::Smooth: {
      std::size_t v = P.component;
      if (P.at_infinity) {
        QPoly h = g.compose_affine(S.center(v), pow_p(p, S.s(v)));
        return g.degree() - count_val_nonneg(h, p) > 0;
      }
      if (P.residue_class.degree() == 1) {
        long cls = (p - P.residue_class[0]) % p;
        Rat c = S.center(v) + pow_p(p, S.s(v)) * Rat(cls);
        QPoly h = g.compose_affine(c, pow_p(p, S.s(v)));
        return count_val_pos(h, p) > 0;
      }
      // Higher-degree class: conjugates land there iff the class polynomial
      // divides the reduction of the scaled shift.
      QPoly h = g.compose_affine(S.center(v), pow_p(p, S.s(v)));
      FpPoly hbar = unit_part_reduction(h, p);
      if (hbar.is_zero()) throw std::logic_error("closure: zero reduction");
      return hbar.divmod(P.residue_class).second.is_zero();
    }
    case FiberPoint::Kind::Double: {
      const Edge& e = G.edges[P.edge];
      QPoly h1 = g.compose_affine(S.center(e.child), pow_p(p, S.s(e.parent)));
      QPoly h2 = g.compose_affine(S.center(e.child), pow_p(p, S.s(e.child)));
      long dir = count_val_pos(h1, p);
      long inside = count_val_nonneg(h2, p);
      return dir - inside > 0;
    }
  }
  return false;
}

LocalParams local_params(const FiberPoint& P, const VertexSet& S) {
  DualGraph G = dual_graph(S);
  validate_fiber_point(P, S, G);
  const std::int64_t p = S.p();
  LocalParams L;
  switch (P.kind) {
    case FiberPoint::Kind::Generic: {
      L.alpha = RatFunc(Rat(p));
      L.beta = RatFunc(Rat(1));
      L.chart_note = "generic point of component " + std::to_string(P.component) +
                     ": the local ring is a DVR with uniformizer alpha";
      return L;
    }
    case FiberPoint::Kind::Smooth: {
      std::size_t v = P.component;
      L.alpha = RatFunc(Rat(p));
      RatFunc t = (RatFunc::t() - RatFunc(S.center(v))) *
                  RatFunc(pow_p(p, -S.s(v)));
      if (P.at_infinity) {
        L.beta = RatFunc(Rat(1)) / t;
        L.chart_note = "chart t = " + rat_str(pow_p(p, -S.s(v))) + "*(T - " +
                       rat_str(S.center(v)) + "); beta = 1/t cuts t = inf";
        return L;
      }
      // Lift of the residue-class polynomial evaluated at t.  Rational
      // classes are presented as t - c with c the class representative.
      RatFunc beta;
      if (P.residue_class.degree() == 1) {
        long c = (p - P.residue_class[0]) % p;
        beta = t - RatFunc(Rat(c));
      } else {
        for (long k = 0; k <= P.residue_class.degree(); ++k) {
          RatFunc term(Rat(P.residue_class[k]));
          for (long i = 0; i < k; ++i) term = term * t;
          beta = beta + term;
        }
      }
      L.beta = beta;
      L.chart_note = "chart t = " + rat_str(pow_p(p, -S.s(v))) + "*(T - " +
                     rat_str(S.center(v)) + "); beta cuts " +
                     P.residue_class.str() + " = 0";
      return L;
    }
    case FiberPoint::Kind::Double: {
      const Edge& e = G.edges[P.edge];
      const Rat& au = S.center(e.child);
      L.alpha = (RatFunc::t() - RatFunc(au)) * RatFunc(pow_p(p, -S.s(e.parent)));
      L.beta = RatFunc(pow_p(p, S.s(e.child))) / (RatFunc::t() - RatFunc(au));
      L.chart_note =
          "alpha cuts the inner branch, beta the outer; alpha*beta = " +
          rat_str(pow_p(p, e.length)) +
          (e.length == 1 ? "" : " (edge length > 1: non-regular point)");
      return L;
    }
  }
  throw std::logic_error("local_params: unreachable");
}

namespace {

long integral_seminorm(const RatFunc& a, const Rat& center, long s,
                       std::int64_t p) {
  ValExt v = seminorm_val(a, BerkPoint::eta(center, Rat(s)), p);
  return to_long(num(v.value()));
}

// Value of the residue function at a rational class (or infinity) of the
// component chart, as an element of F_p; nullopt at a zero or pole.
std::optional<long> residue_value_rational(const FpRat& r, long cls,
                                           bool at_inf) {
  const std::int64_t p = r.p();
  if (at_inf) {
    if (r.order_at_infinity() != 0) return std::nullopt;
    long n = r.num().leading(), d = r.den().leading();
    return (n * to_long(inv_mod(Int(d), Int(p)))) % p;
  }
  long dn = r.den().eval(cls);
  if (dn == 0) return std::nullopt;
  long nm = r.num().eval(cls);
  if (nm == 0) return std::nullopt;
  return (nm * to_long(inv_mod(Int(dn), Int(p)))) % p;
}

}  // namespace

FactorAt factor_at(const RatFunc& a, const FiberPoint& P, const VertexSet& S) {
  if (a.is_zero()) {
    throw std::invalid_argument("factor_at: the function must be nonzero");
  }
  DualGraph G = dual_graph(S);
  validate_fiber_point(P, S, G);
  const std::int64_t p = S.p();
  if (!a.is_constant() || P.kind == FiberPoint::Kind::Generic) {
    Divisor D = divisor(a);
    for (const auto& [pt, mult] : D.terms) {
      if (P.kind != FiberPoint::Kind::Generic && closure_contains(pt, P, S)) {
        throw std::invalid_argument(
            "factor_at: the fiber point lies in the closure of the divisor "
            "of a (point " + pt.str() + ")");
      }
    }
  }
  FactorAt F;
  switch (P.kind) {
    case FiberPoint::Kind::Generic: {
      std::size_t v = P.component;
      F.n = integral_seminorm(a, S.center(v), S.s(v), p);
      F.m = 0;
      F.unit = a * RatFunc(pow_p(p, -F.n));
      FpRat r = residue_at_eta(F.unit, S.center(v), S.s(v), p);
      F.unit_certificate = "residue " + r.str() + " is a unit of F_" +
                           std::to_string(p) + "(t)";
      return F;
    }
    case FiberPoint::Kind::Smooth: {
      std::size_t v = P.component;
      F.n = integral_seminorm(a, S.center(v), S.s(v), p);
      F.m = 0;
      F.unit = a * RatFunc(pow_p(p, -F.n));
      FpRat r = residue_at_eta(F.unit, S.center(v), S.s(v), p);
      if (P.at_infinity || P.residue_class.degree() == 1) {
        long cls = P.at_infinity ? 0 : (p - P.residue_class[0]) % p;
        auto val = residue_value_rational(r, cls, P.at_infinity);
        if (!val) {
          throw std::logic_error(
              "factor_at: residue vanishes despite the divisor check");
        }
        F.residue = FpPoly::constant(p, *val);
        F.unit_certificate = "residue of the unit at the class equals " +
                             std::to_string(*val) + " != 0 in F_" +
                             std::to_string(p);
      } else {
        FqField Fq(P.residue_class);
        FpPoly nm = Fq.reduce(r.num());
        FpPoly dn = Fq.reduce(r.den());
        if (nm.is_zero() || dn.is_zero()) {
          throw std::logic_error(
              "factor_at: residue vanishes despite the divisor check");
        }
        FpPoly val = Fq.mul(nm, Fq.inv(dn));
        F.residue = val;
        F.unit_certificate = "residue of the unit at the class equals " +
                             val.str() + " != 0 in F_" + std::to_string(p) +
                             "^" + std::to_string(P.residue_class.degree());
      }
      return F;
    }
    case FiberPoint::Kind::Double: {
      const Edge& e = G.edges[P.edge];
      if (e.length != 1) {
        throw std::invalid_argument(
            "factor_at: double point of an edge of length > 1 is not regular; "
            "refine the vertex set to unit edges");
      }
      LocalParams L = local_params(P, S);
      F.n = integral_seminorm(a, S.center(e.child), S.s(e.child), p);
      F.m = integral_seminorm(a, S.center(e.parent), S.s(e.parent), p);
      RatFunc alpha_pow(Rat(1)), beta_pow(Rat(1));
      for (long i = 0; i < (F.n >= 0 ? F.n : -F.n); ++i) {
        alpha_pow = alpha_pow * L.alpha;
      }
      for (long i = 0; i < (F.m >= 0 ? F.m : -F.m); ++i) {
        beta_pow = beta_pow * L.beta;
      }
      F.unit = a;
      F.unit = F.n >= 0 ? F.unit / alpha_pow : F.unit * alpha_pow;
      F.unit = F.m >= 0 ? F.unit / beta_pow : F.unit * beta_pow;
      // The unit must reduce to the same nonzero scalar along both branches.
      if (integral_seminorm(F.unit, S.center(e.parent), S.s(e.parent), p) != 0 ||
          integral_seminorm(F.unit, S.center(e.child), S.s(e.child), p) != 0) {
        throw std::logic_error("factor_at: unit normalization failed");
      }
      FpRat r_out = residue_at_eta(F.unit, S.center(e.parent), S.s(e.parent), p);
      FpRat r_in = residue_at_eta(F.unit, S.center(e.child), S.s(e.child), p);
      long cls = direction_class(S, e.parent, S.center(e.child));
      auto v_out = residue_value_rational(r_out, cls, false);
      auto v_in = residue_value_rational(r_in, 0, true);
      if (!v_out || !v_in) {
        throw std::logic_error(
            "factor_at: residue vanishes despite the divisor check");
      }
      if (*v_out != *v_in) {
        throw std::logic_error(
            "factor_at: branch residues disagree at the double point");
      }
      F.residue = FpPoly::constant(p, *v_out);
      F.unit_certificate = "residue of the unit at the double point equals " +
                           std::to_string(*v_out) +
                           " != 0 along both branches";
      return F;
    }
  }
  throw std::logic_error("factor_at: unreachable");
}

bool covers_line(const std::vector<DiscDesc>& discs, std::int64_t p) {
  require_odd_prime(p);
  for (const DiscDesc& D : discs) {
    if (D.closed) {
      throw std::invalid_argument("covers_line expects open discs");
    }
  }
  std::vector<const DiscDesc*> outside, inside;
  for (const DiscDesc& D : discs) (D.inside ? inside : outside).push_back(&D);
  if (outside.empty()) return false;  // infinity uncovered
  // K0 = intersection of the closed complements of the outside discs; closed
  // discs intersect pairwise iff nested, so K0 is the smallest one or empty.
  const DiscDesc* small = outside.front();
  for (const DiscDesc* D : outside) {
    if (D->s > small->s) small = D;
  }
  for (const DiscDesc* D : outside) {
    ValExt d = vp_ext(D->center - small->center, p);
    if (d < ValExt(D->s)) return true;  // complements disjoint: covered
  }
  // Uncovered iff the top point eta(center, s) of K0 escapes every inside
  // disc; an inside disc containing the top point swallows all of K0.
  for (const DiscDesc* D : inside) {
    ValExt m = vp_ext(D->center - small->center, p);
    if (ValExt(small->s) < m) m = ValExt(small->s);
    if (m > ValExt(D->s)) return true;
  }
  return false;
}

namespace {

// A type-2 point in the region not covered by the (non-covering) discs.
std::pair<Rat, long> uncovered_point(const std::vector<DiscDesc>& discs) {
  std::vector<const DiscDesc*> outside;
  for (const DiscDesc& D : discs) {
    if (!D.inside) outside.push_back(&D);
  }
  if (outside.empty()) {
    long smin = 0;
    for (const DiscDesc& D : discs) {
      smin = std::min(smin, to_long(floor_rat(D.s)));
    }
    return {discs.front().center, smin - 1};
  }
  const DiscDesc* small = outside.front();
  for (const DiscDesc* D : outside) {
    if (D->s > small->s) small = D;
  }
  return {small->center, to_long(num(small->s))};
}

}  // namespace

VertexSet build_model(std::int64_t p, const std::vector<BerkPoint>& z,
                      const std::vector<DiscDesc>& neighborhoods,
                      ModelVariant variant,
                      const std::optional<std::pair<Rat, long>>& s0) {
  require_odd_prime(p);
  if (z.size() != neighborhoods.size() || z.empty()) {
    throw std::invalid_argument(
        "build_model: one neighborhood per point of Z required");
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (den(neighborhoods[i].s) != 1) {
      throw std::invalid_argument(
          "build_model: neighborhood boundaries must have integer log-radius");
    }
    if (!in_disc(z[i], neighborhoods[i], p)) {
      throw std::invalid_argument(
          "build_model: point " + z[i].str() +
          " does not lie in its neighborhood " + neighborhoods[i].str(p));
    }
  }
  if (covers_line(neighborhoods, p)) {
    throw std::invalid_argument(
        "build_model: the neighborhoods cover the whole line");
  }
  std::vector<std::pair<Rat, long>> verts;
  for (const DiscDesc& D : neighborhoods) {
    verts.emplace_back(D.center, to_long(num(D.s)));
  }
  std::vector<std::pair<Rat, long>> boundaries = VertexSet(p, verts).verts();
  if (variant != ModelVariant::C1) {
    std::pair<Rat, long> base =
        s0 ? *s0 : uncovered_point(neighborhoods);
    BerkPoint bp = BerkPoint::eta(base.first, Rat(base.second));
    for (const DiscDesc& D : neighborhoods) {
      if (in_disc(bp, D, p)) {
        throw std::invalid_argument(
            "build_model: the base point lies inside a neighborhood");
      }
    }
    verts.push_back(base);
  }
  if (variant == ModelVariant::C3) {
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      for (std::size_t j = i + 1; j < boundaries.size(); ++j) {
        const auto& [a1, s1] = boundaries[i];
        const auto& [a2, s2] = boundaries[j];
        ValExt d = vp_ext(a1 - a2, p);
        ValExt sj = ValExt(Rat(std::min(s1, s2)));
        if (d < sj) sj = d;
        long js = to_long(num(sj.value()));
        if (js < s1 && js < s2) {
          verts.emplace_back(a1, js);  // interior join is the path midpoint
        } else {
          // Nested boundaries: the path runs along one branch.
          const Rat& deep = s1 >= s2 ? a1 : a2;
          long sum = s1 + s2;  // floor, biasing toward the outer end
          long mid = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
          verts.emplace_back(deep, mid);
        }
      }
    }
  }
  return VertexSet(p, verts).join_closure();
}

}  // namespace berk
