#include "berk/analyze.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace berk {

namespace {

BerkPoint site_point(const ClosedPoint& z) {
  if (z.is_infinity()) return BerkPoint::infinity();
  return BerkPoint::rigid(z.value());
}

RatFunc ratfunc_pow(const RatFunc& b, long k) {
  RatFunc acc{Rat(1)};
  for (long i = 0; i < (k < 0 ? -k : k); ++i) acc = acc * b;
  return k < 0 ? RatFunc(Rat(1)) / acc : acc;
}

// The series witness back in Q(T): sigma = T - z (or 1/T at infinity).
std::vector<RatFunc> witness_in_t(const SolutionDisc& d,
                                  const ClosedPoint& z) {
  RatFunc sigma = z.is_infinity() ? RatFunc(Rat(1)) / RatFunc::t()
                                  : RatFunc::t() - RatFunc(z.value());
  std::vector<RatFunc> out;
  for (const LaurentSeries& w : d.witness) {
    RatFunc x;
    for (std::size_t k = 0; k < w.c.size(); ++k) {
      x = x + RatFunc(w.c[k]) * ratfunc_pow(sigma, w.lead +
                                            static_cast<long>(k));
    }
    out.push_back(x);
  }
  return out;
}

// Unit-length edges throughout: insert the integer disc points interior to
// every edge (the intermediate blow-ups of the model).
VertexSet regularize(const VertexSet& S) {
  std::vector<std::pair<Rat, long>> verts = S.verts();
  DualGraph G = dual_graph(S);
  for (const Edge& e : G.edges) {
    for (long t = S.s(e.parent) + 1; t < S.s(e.child); ++t) {
      verts.emplace_back(S.center(e.child), t);
    }
  }
  return VertexSet(S.p(), verts);
}

std::vector<RatFunc> witness_pool(std::size_t dim, long max_degree) {
  std::vector<RatFunc> pool;
  const RatFunc T = RatFunc::t();
  long c = dim <= 4 ? 2 : 1;
  pool.emplace_back();  // zero
  for (long a = 1; a <= c; ++a) {
    pool.push_back(RatFunc(Rat(a)));
    pool.push_back(RatFunc(Rat(-a)));
  }
  if (max_degree >= 1) {
    for (long b = 1; b <= c; ++b) {
      for (long a = -c; a <= c; ++a) {
        pool.push_back(RatFunc(Rat(a)) + RatFunc(Rat(b)) * T);
        pool.push_back(RatFunc(Rat(-a)) - RatFunc(Rat(b)) * T);
      }
    }
  }
  if (dim >= 6) pool.resize(std::min<std::size_t>(pool.size(), 8));
  return pool;
}

std::optional<GlobalWitness> search_global_witness(
    const std::vector<RatFunc>& coeffs, long max_degree) {
  std::vector<RatFunc> pool = witness_pool(coeffs.size(), max_degree);
  std::vector<std::size_t> pick(coeffs.size(), 0);
  for (;;) {
    bool all_zero = true;
    for (std::size_t i : pick) {
      if (i != 0) all_zero = false;
    }
    if (!all_zero) {
      RatFunc sum;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        sum = sum + coeffs[i] * pool[pick[i]] * pool[pick[i]];
      }
      if (sum.is_zero()) {
        GlobalWitness w;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
          w.coords.push_back(pool[pick[i]]);
        }
        w.note = "found by the best-effort bounded search";
        return w;
      }
    }
    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == pool.size()) pick[j++] = 0;
    if (j == pick.size()) return std::nullopt;
  }
}

}  // namespace

std::string variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::C1: return "c1";
    case ModelVariant::C2: return "c2";
    default: return "c3";
  }
}

int HasseReport::exit_code() const {
  switch (conclusion) {
    case Conclusion::LocalEverywhere: return 0;
    case Conclusion::ObstructionAt: return 1;
    default: return 2;
  }
}

HasseReport analyze_parsed(const ParsedForm& f, const AnalyzeOptions& opts) {
  HasseReport r = analyze(f.q, opts);
  r.parse_note = f.note;
  return r;
}

HasseReport analyze(const QuadForm& q, const AnalyzeOptions& opts) {
  HasseReport R;
  R.p = q.p();
  R.coeffs = q.coeffs();
  R.variant = variant_name(opts.variant);

  // 1. bad locus: zeros and poles of every coefficient
  std::vector<ClosedPoint> Z;
  for (const RatFunc& a : q.coeffs()) {
    for (const auto& [pt, mult] : divisor(a).terms) Z.push_back(pt);
  }
  std::sort(Z.begin(), Z.end());
  Z.erase(std::unique(Z.begin(), Z.end(),
                      [](const ClosedPoint& a, const ClosedPoint& b) {
                        return a == b;
                      }),
          Z.end());
  R.bad_locus = Z;
  for (const ClosedPoint& z : Z) {
    if (z.is_irreducible()) {
      R.conclusion = Conclusion::Inconclusive;
      std::ostringstream os;
      os << "the bad locus contains the degree-" << z.degree()
         << " closed point " << z.str()
         << "; its completion needs solution discs over an extension of Q_"
         << R.p << ", which are not provided";
      R.reason = os.str();
      return R;
    }
  }

  // 2. completion verdict and certified disc at every z
  bool rigid_obstruction = false;
  for (const ClosedPoint& z : Z) {
    BerkPoint pt = site_point(z);
    IsotropyVerdict v = isotropic_at_rigid(q, pt);
    if (v.kind == IsotropyVerdict::Kind::Unknown) {
      R.conclusion = Conclusion::Inconclusive;
      R.reason = "undecided completion at " + z.str() + ": " + v.reason;
      return R;
    }
    DiscReport dr{z, v, std::nullopt, std::nullopt};
    if (v.isotropic()) {
      dr.disc = local_solution_disc(q, pt, opts.precision);
    } else {
      rigid_obstruction = true;
    }
    R.discs.push_back(std::move(dr));
  }

  // 3. coverage by the certified discs
  std::optional<std::size_t> exact_at;
  if (!rigid_obstruction) {
    std::vector<DiscDesc> finite;
    std::vector<std::size_t> whole;
    for (std::size_t i = 0; i < R.discs.size(); ++i) {
      const SolutionDisc& d = *R.discs[i].disc;
      if (d.exact) {
        if (!exact_at) exact_at = i;
      } else if (!d.threshold.finite()) {
        whole.push_back(i);
      } else {
        finite.push_back(d.disc());
      }
    }
    bool covered = false;
    std::ostringstream note;
    if (exact_at) {
      covered = true;
      note << "the witness at " << Z[*exact_at].str()
           << " is an exact zero of the form, valid in every completion";
    } else if (whole.size() >= 2) {
      covered = true;
      note << "the witnesses at " << Z[whole[0]].str() << " and "
           << Z[whole[1]].str()
           << " converge on their whole charts, which cover the line";
    } else if (whole.size() == 1) {
      // a whole chart misses one rigid point: the chart's pole
      BerkPoint missing = Z[whole[0]].is_infinity() ? BerkPoint::rigid(Rat(0))
                                                    : BerkPoint::infinity();
      for (const DiscDesc& D : finite) {
        if (in_disc(missing, D, R.p)) covered = true;
      }
      if (covered) {
        note << "the witness at " << Z[whole[0]].str()
             << " covers its whole chart and the remaining point lies in a "
                "certified disc";
      }
    } else if (!finite.empty() && covers_line(finite, R.p)) {
      covered = true;
      note << "the certified solution discs cover the whole line; every "
              "completion carries one of the witnesses";
    }
    if (covered) {
      R.discs_cover_line = true;
      R.coverage_note = note.str();
      R.conclusion = Conclusion::LocalEverywhere;
    }
  }

  // 4. model and site checks when coverage does not settle it
  bool has_unknown = false;
  std::string unknown_reason;
  std::vector<IsotropyVerdict> vertex_verdicts;
  if (!R.discs_cover_line) {
    if (Z.empty()) {
      // constant coefficients: the Gauss model of the line
      R.model = VertexSet(R.p, {{Rat(0), 0}});
    } else {
      std::vector<long> sb(Z.size(), 1);
      std::optional<std::size_t> inf_at;
      for (std::size_t i = 0; i < Z.size(); ++i) {
        if (Z[i].is_infinity()) {
          inf_at = i;
          continue;
        }
        long base = 1;
        if (R.discs[i].disc && R.discs[i].disc->threshold.finite()) {
          base = to_long(floor_rat(R.discs[i].disc->threshold.value())) + 1;
        }
        for (std::size_t j = 0; j < Z.size(); ++j) {
          if (j == i || Z[j].is_infinity()) continue;
          long d = vp(Z[i].value() - Z[j].value(), R.p);
          base = std::max(base, d);
        }
        sb[i] = base;
      }
      if (inf_at) {
        long m = -1;
        if (R.discs[*inf_at].disc &&
            R.discs[*inf_at].disc->threshold.finite()) {
          m = -(to_long(floor_rat(R.discs[*inf_at].disc->threshold.value())) +
                1);
        }
        for (std::size_t j = 0; j < Z.size(); ++j) {
          if (j == *inf_at) continue;
          long fj = sb[j];
          if (!Z[j].value().is_zero()) {
            fj = std::min(fj, vp(Z[j].value(), R.p));
          }
          m = std::min(m, fj);
        }
        sb[*inf_at] = m;
      }
      std::vector<BerkPoint> zpts;
      std::vector<DiscDesc> nbhd;
      for (std::size_t i = 0; i < Z.size(); ++i) {
        zpts.push_back(site_point(Z[i]));
        if (Z[i].is_infinity()) {
          nbhd.push_back({Rat(0), Rat(sb[i]), false, false});
        } else {
          nbhd.push_back({Z[i].value(), Rat(sb[i]), false, true});
        }
        R.discs[i].boundary_s = sb[i];
      }
      R.model = regularize(
          build_model(R.p, zpts, nbhd, opts.variant, std::nullopt));
    }

    const VertexSet& S = *R.model;
    for (std::size_t i = 0; i < S.size(); ++i) {
      IsotropyVerdict v = isotropic_at_vertex(q, S.center(i), S.s(i));
      if (v.kind == IsotropyVerdict::Kind::Unknown && !has_unknown) {
        has_unknown = true;
        unknown_reason = S.point(i).str() + ": " + v.reason;
      }
      R.vertex_sites.push_back({S.point(i).str(), v});
      vertex_verdicts.push_back(std::move(v));
    }
    DualGraph G = dual_graph(S);
    for (std::size_t e = 0; e < G.edges.size(); ++e) {
      FiberPoint P = FiberPoint::double_point(e, R.p);
      IsotropyVerdict v = isotropic_at_fiber_point(
          q, P, S,
          {vertex_verdicts[G.edges[e].parent],
           vertex_verdicts[G.edges[e].child]});
      if (v.kind == IsotropyVerdict::Kind::Unknown && !has_unknown) {
        has_unknown = true;
        unknown_reason = P.str(S) + ": " + v.reason;
      }
      R.edge_sites.push_back({P.str(S), v});
    }
  }

  // conclusion assembly: an obstruction wins, type-2 sites preferred
  if (!R.discs_cover_line) {
    const VertexSet& S = *R.model;
    std::optional<std::size_t> best_vertex;
    auto key = [&](std::size_t i) {
      long s = S.s(i);
      return std::tuple<long, long, Rat>(s < 0 ? -s : s, s,
                                         S.center(i) < 0 ? -S.center(i)
                                                         : S.center(i));
    };
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (!R.vertex_sites[i].verdict.anisotropic()) continue;
      if (!best_vertex || key(i) < key(*best_vertex)) best_vertex = i;
    }
    const SiteReport* edge_hit = nullptr;
    for (const SiteReport& e : R.edge_sites) {
      if (e.verdict.anisotropic() && !edge_hit) edge_hit = &e;
    }
    const DiscReport* rigid_hit = nullptr;
    for (const DiscReport& d : R.discs) {
      if (d.completion.anisotropic() && !rigid_hit) rigid_hit = &d;
    }
    if (best_vertex) {
      R.conclusion = Conclusion::ObstructionAt;
      R.obstruction_site = R.vertex_sites[*best_vertex].site;
      R.certificate = R.vertex_sites[*best_vertex].verdict.certificate;
    } else if (edge_hit) {
      R.conclusion = Conclusion::ObstructionAt;
      R.obstruction_site = edge_hit->site;
      R.certificate = edge_hit->verdict.certificate;
    } else if (rigid_hit) {
      R.conclusion = Conclusion::ObstructionAt;
      R.obstruction_site = "the completion at " + rigid_hit->z.str();
      R.certificate = rigid_hit->completion.certificate;
    } else if (has_unknown) {
      R.conclusion = Conclusion::Inconclusive;
      R.reason = "undecided site: " + unknown_reason;
    } else {
      // 5. all sites isotropic: assemble the per-component picture
      for (std::size_t i = 0; i < S.size(); ++i) {
        ComponentReport C;
        C.vertex = i;
        C.site = "component of " + S.point(i).str();
        C.note =
            "classes away from the bad locus: the function-field witness at "
            "this valuation is isotropic in every completion of the residue "
            "field, and the two-variable Hensel descent lifts each of them";
        R.components.push_back(std::move(C));
      }
      bool exceptional_ok = true;
      for (std::size_t k = 0; k < Z.size(); ++k) {
        FiberPoint F = specialize(site_point(Z[k]), S);
        ExceptionalCheck ec;
        ec.cls = F.str(S) + ", the reduction of " + Z[k].str();
        ec.covered_by_disc = R.discs[k].disc.has_value();
        if (ec.covered_by_disc) {
          ec.note = "its whole component lies inside the certified disc at " +
                    Z[k].str();
        } else {
          exceptional_ok = false;
          ec.note = "no certified disc reaches this class";
        }
        if (F.kind == FiberPoint::Kind::Smooth) {
          R.components[F.component].exceptional.push_back(std::move(ec));
        } else {
          exceptional_ok = false;
        }
      }
      if (exceptional_ok) {
        R.conclusion = Conclusion::LocalEverywhere;
      } else {
        R.conclusion = Conclusion::Inconclusive;
        R.reason =
            "a reduction class of the bad locus is not covered by its "
            "certified disc";
      }
    }
  }

  if (R.conclusion == Conclusion::LocalEverywhere) {
    std::ostringstream os;
    if (q.dim() >= 3) {
      os << "isotropic at every completion and of dimension >= 3: the form "
            "is isotropic over Q_"
         << R.p << "(T) itself";
    } else {
      os << "dimension 2: local isotropy everywhere is recorded; the global "
            "statement needs the discriminant square class and is not "
            "asserted";
    }
    R.global_note = os.str();
    if (exact_at) {
      GlobalWitness w;
      w.coords = witness_in_t(*R.discs[*exact_at].disc, Z[*exact_at]);
      w.note = "exact zero from the solution disc at " + Z[*exact_at].str();
      RatFunc sum;
      for (std::size_t i = 0; i < R.coeffs.size(); ++i) {
        sum = sum + R.coeffs[i] * w.coords[i] * w.coords[i];
      }
      if (!sum.is_zero()) {
        throw std::logic_error("analyze: exact witness fails to replay");
      }
      R.global_witness = std::move(w);
    } else {
      R.global_witness = search_global_witness(R.coeffs, opts.max_degree);
    }
  }
  return R;
}

}  // namespace berk
