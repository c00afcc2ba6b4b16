#pragma once

// Local isotropy along the line: at type-2 vertex valuations (Springer
// residues over F_p(t)), at degree-1 rigid points (the (T-c)-adic completion,
// residue field Q_p, with certified solution discs from an explicit Newton
// bound ledger), and at closed fiber points of a model (the double Springer
// descent through the two-dimensional complete local ring).

#include <cstdint>
#include <string>
#include <vector>

#include "berk/isotropy.hpp"
#include "berk/line.hpp"
#include "berk/model.hpp"
#include "berk/quadform.hpp"

namespace berk {

// Springer split along the divisorial valuation of the vertex eta(a, s): the
// coefficients factor as p^n * unit, and q is isotropic over the completion
// iff one of the two parity residue forms is isotropic over F_p(t), t the
// normalized coordinate of the component.  Requires integer s.
IsotropyVerdict isotropic_at_vertex(const QuadForm& q, const Rat& a, long s);

// The (T-c)-adic completion at a degree-1 rigid point (1/T-adic at infinity)
// is complete discretely valued with residue field Q_p; Springer reduces the
// question to the two parity residue forms over Q_p.
IsotropyVerdict isotropic_at_rigid(const QuadForm& q, const BerkPoint& z);

// A power-series zero of q around a rigid point, with the open disc on which
// the Newton bound certifies convergence.  Thresholds are log-radii in the
// chart variable sigma (= T - c, or 1/T at infinity): the witness is valid on
// {v(sigma) > threshold}.  threshold = -inf means the whole chart.
struct SolutionDisc {
  explicit SolutionDisc(BerkPoint at) : z(std::move(at)) {}

  BerkPoint z;
  bool exact = false;     // the truncations solve q = 0 identically in Q(T)
  ValExt threshold;       // certified bound (clamped at infinity)
  ValExt raw_threshold;   // the unclamped Newton crossing
  bool clamped = false;
  std::vector<LaurentSeries> witness;  // one series per coordinate, in sigma
  std::size_t newton_index = 0;        // coordinate the square root ran on
  long order = 0;                      // series truncation order
  RatFunc residual;       // q(witness) in the chart variable, exactly
  std::string ledger;     // the piecewise-linear bound computation

  // Gauss bound: every rigid sigma_0 with v(sigma_0) >= s has
  // v_p(residual(sigma_0)) at least this.
  ValExt claimed_valuation(const Rat& s, std::int64_t p) const;
  // The certified open disc; throws std::domain_error when the witness is
  // exact or unbounded (no finite boundary to describe).
  DiscDesc disc() const;
};

// Requires q isotropic at z (otherwise throws std::domain_error carrying the
// site obstruction).  order controls the series truncation.
SolutionDisc local_solution_disc(const QuadForm& q, const BerkPoint& z,
                                 long order = 32);

// Double Springer descent at a closed fiber point P of the model S: factor
// every coefficient as unit * alpha^n * beta^m, group by exponent parities,
// test the unit residue forms over kappa(P), and Hensel-lift an isotropic
// group back through the complete local ring.  site_certificates are the
// verdicts at the divisorial valuations of the components through P (one
// vertex for smooth points, the edge's two for double points); at least one
// must be supplied.  An isotropic certificate together with an
// all-anisotropic descent is a contradiction (both decide isotropy over the
// same completed field) and throws std::logic_error.
IsotropyVerdict isotropic_at_fiber_point(
    const QuadForm& q, const FiberPoint& P, const VertexSet& S,
    const std::vector<IsotropyVerdict>& site_certificates);

}  // namespace berk
