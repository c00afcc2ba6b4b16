#include "berk/render.hpp"

#include <sstream>

#include "json.hpp"

namespace berk {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kind_word(IsotropyVerdict::Kind k) {
  switch (k) {
    case IsotropyVerdict::Kind::Isotropic: return "isotropic";
    case IsotropyVerdict::Kind::Anisotropic: return "anisotropic";
    default: return "unknown";
  }
}

std::string form_str(const HasseReport& r) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    os << (i ? ", " : "") << r.coeffs[i].str();
  }
  os << ">";
  return os.str();
}

std::string radius_str(const HasseReport& r, const Rat& threshold) {
  Rat e = -threshold;
  if (e.is_zero()) return "radius exactly 1";
  std::ostringstream os;
  os << "radius " << r.p << "^(" << rat_str(e) << ")";
  if (e > 0) {
    os << ", larger than 1";
  } else {
    os << ", smaller than 1";
  }
  return os.str();
}

std::string disc_region_str(const HasseReport& r, const DiscReport& d) {
  std::ostringstream os;
  if (d.z.is_infinity()) {
    os << "{v(1/T) > " << d.disc->threshold.str() << "}";
  } else {
    os << d.disc->disc().str(r.p);
  }
  return os.str();
}

std::string witness_tuple(const std::vector<RatFunc>& coords) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    os << (i ? ", " : "") << coords[i].str();
  }
  os << ")";
  return os.str();
}

std::string render_text(const HasseReport& r) {
  std::ostringstream os;
  os << "quadratic form " << form_str(r) << " over Q_" << r.p << "(T)\n";
  if (!r.parse_note.empty()) os << "note: " << r.parse_note << "\n";

  os << "bad locus (zeros and poles of the coefficients):";
  if (r.bad_locus.empty()) {
    os << " empty\n";
  } else {
    for (std::size_t i = 0; i < r.bad_locus.size(); ++i) {
      os << (i ? ", " : " ") << r.bad_locus[i].str();
    }
    os << "\n";
  }

  if (!r.discs.empty()) {
    os << "completions at the bad locus:\n";
    for (const DiscReport& d : r.discs) {
      os << "  " << d.z.str() << ": " << kind_word(d.completion.kind);
      if (d.disc) {
        if (d.disc->exact) {
          os << "; the series witness is an exact zero, valid on the whole "
                "chart";
        } else if (!d.disc->threshold.finite()) {
          os << "; the witness converges on the whole chart";
        } else {
          os << "; certified solution disc " << disc_region_str(r, d) << " ("
             << radius_str(r, d.disc->threshold.value());
          if (d.disc->clamped) os << "; clamped to the chart";
          os << "), series order " << d.disc->order
             << ", Newton coordinate " << d.disc->newton_index;
        }
        if (d.boundary_s) {
          os << "; model boundary at log-radius " << *d.boundary_s;
        }
      }
      os << "\n";
    }
  }

  if (!r.coverage_note.empty()) os << "coverage: " << r.coverage_note << "\n";

  if (r.model) {
    const VertexSet& S = *r.model;
    os << "reduction model (variant " << r.variant << "): " << S.size()
       << (S.size() == 1 ? " vertex\n" : " vertices\n");
    for (const SiteReport& v : r.vertex_sites) {
      os << "  vertex " << v.site << ": " << kind_word(v.verdict.kind);
      if (v.verdict.anisotropic()) os << "  <- obstruction";
      os << "\n";
    }
    for (const SiteReport& e : r.edge_sites) {
      os << "  " << e.site << ": " << kind_word(e.verdict.kind);
      if (e.verdict.anisotropic()) os << "  <- obstruction";
      os << "\n";
    }
    for (const ComponentReport& c : r.components) {
      os << "  " << c.site << ": " << c.note << "\n";
      for (const ExceptionalCheck& e : c.exceptional) {
        os << "    exceptional class " << e.cls << ": " << e.note << "\n";
      }
    }
  }

  switch (r.conclusion) {
    case Conclusion::LocalEverywhere:
      os << "conclusion: local everywhere; the form is isotropic at every "
            "completion of Q_"
         << r.p << "(T)\n";
      if (!r.global_note.empty()) os << "  " << r.global_note << "\n";
      if (r.global_witness) {
        os << "  global witness " << witness_tuple(r.global_witness->coords)
           << " (" << r.global_witness->note << ")\n";
      }
      break;
    case Conclusion::ObstructionAt:
      os << "conclusion: obstruction at " << r.obstruction_site << "\n";
      os << "certificate:\n" << r.certificate.str(2);
      break;
    default:
      os << "conclusion: inconclusive\n";
      os << "  reason: " << r.reason << "\n";
      break;
  }
  return os.str();
}

ordered_json verdict_json(const IsotropyVerdict& v) {
  ordered_json j;
  j["kind"] = kind_word(v.kind);
  j["layer"] = v.layer.str();
  j["witness_note"] =
      v.witness_note.empty() ? ordered_json() : ordered_json(v.witness_note);
  j["certificate"] =
      v.anisotropic() ? ordered_json(v.certificate.str()) : ordered_json();
  j["reason"] = v.reason.empty() ? ordered_json() : ordered_json(v.reason);
  return j;
}

ordered_json site_json(const SiteReport& s) {
  ordered_json j;
  j["site"] = s.site;
  j["verdict"] = verdict_json(s.verdict);
  return j;
}

std::string render_json(const HasseReport& r) {
  ordered_json j;
  j["schema_version"] = 1;
  j["prime"] = r.p;
  j["variant"] = r.variant;
  ordered_json form = ordered_json::array();
  for (const RatFunc& a : r.coeffs) form.push_back(a.str());
  j["form"] = form;
  j["parse_note"] =
      r.parse_note.empty() ? ordered_json() : ordered_json(r.parse_note);
  ordered_json locus = ordered_json::array();
  for (const ClosedPoint& z : r.bad_locus) locus.push_back(z.str());
  j["bad_locus"] = locus;

  ordered_json discs = ordered_json::array();
  for (const DiscReport& d : r.discs) {
    ordered_json dj;
    dj["at"] = d.z.str();
    dj["verdict"] = verdict_json(d.completion);
    if (d.disc) {
      dj["exact"] = d.disc->exact;
      dj["threshold"] = d.disc->threshold.str();
      dj["raw_threshold"] = d.disc->raw_threshold.str();
      dj["clamped"] = d.disc->clamped;
      dj["order"] = d.disc->order;
      dj["newton_index"] = d.disc->newton_index;
    } else {
      dj["exact"] = ordered_json();
      dj["threshold"] = ordered_json();
    }
    dj["boundary_s"] =
        d.boundary_s ? ordered_json(*d.boundary_s) : ordered_json();
    discs.push_back(dj);
  }
  j["solution_discs"] = discs;
  j["discs_cover_line"] = r.discs_cover_line;
  j["coverage_note"] =
      r.coverage_note.empty() ? ordered_json() : ordered_json(r.coverage_note);

  if (r.model) {
    const VertexSet& S = *r.model;
    ordered_json mj;
    ordered_json verts = ordered_json::array();
    for (std::size_t i = 0; i < S.size(); ++i) {
      ordered_json vj;
      vj["center"] = rat_str(S.center(i));
      vj["s"] = S.s(i);
      verts.push_back(vj);
    }
    mj["vertices"] = verts;
    ordered_json edges = ordered_json::array();
    for (const Edge& e : dual_graph(S).edges) {
      edges.push_back(ordered_json::array({e.parent, e.child}));
    }
    mj["edges"] = edges;
    j["model"] = mj;
  } else {
    j["model"] = ordered_json();
  }

  ordered_json vs = ordered_json::array();
  for (const SiteReport& s : r.vertex_sites) vs.push_back(site_json(s));
  j["vertex_sites"] = vs;
  ordered_json es = ordered_json::array();
  for (const SiteReport& s : r.edge_sites) es.push_back(site_json(s));
  j["edge_sites"] = es;

  ordered_json cs = ordered_json::array();
  for (const ComponentReport& c : r.components) {
    ordered_json cj;
    cj["vertex"] = c.vertex;
    cj["site"] = c.site;
    cj["note"] = c.note;
    ordered_json ex = ordered_json::array();
    for (const ExceptionalCheck& e : c.exceptional) {
      ordered_json ej;
      ej["class"] = e.cls;
      ej["covered_by_disc"] = e.covered_by_disc;
      ej["note"] = e.note;
      ex.push_back(ej);
    }
    cj["exceptional"] = ex;
    cs.push_back(cj);
  }
  j["components"] = cs;

  ordered_json concl;
  switch (r.conclusion) {
    case Conclusion::LocalEverywhere: concl["kind"] = "local-everywhere"; break;
    case Conclusion::ObstructionAt: concl["kind"] = "obstruction"; break;
    default: concl["kind"] = "inconclusive"; break;
  }
  concl["site"] = r.obstruction_site.empty() ? ordered_json()
                                             : ordered_json(r.obstruction_site);
  concl["certificate"] = r.conclusion == Conclusion::ObstructionAt
                             ? ordered_json(r.certificate.str())
                             : ordered_json();
  concl["reason"] = r.reason.empty() ? ordered_json() : ordered_json(r.reason);
  j["conclusion"] = concl;

  if (r.conclusion == Conclusion::LocalEverywhere) {
    ordered_json gj;
    gj["note"] = r.global_note;
    if (r.global_witness) {
      ordered_json w = ordered_json::array();
      for (const RatFunc& x : r.global_witness->coords) w.push_back(x.str());
      gj["witness"] = w;
      gj["witness_note"] = r.global_witness->note;
    } else {
      gj["witness"] = ordered_json();
      gj["witness_note"] = ordered_json();
    }
    j["global"] = gj;
  } else {
    j["global"] = ordered_json();
  }
  return j.dump(2) + "\n";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string render_dot(const HasseReport& r) {
  std::ostringstream os;
  os << "graph model {\n";
  os << "  rankdir=TB;\n";
  if (r.model) {
    const VertexSet& S = *r.model;
    for (std::size_t i = 0; i < S.size(); ++i) {
      std::string verdict =
          i < r.vertex_sites.size()
              ? std::string(kind_word(r.vertex_sites[i].verdict.kind))
              : std::string();
      os << "  v" << i << " [shape=ellipse, label=\""
         << dot_escape(S.point(i).str());
      if (!verdict.empty()) os << "\\n" << verdict;
      os << "\"];\n";
    }
    for (const Edge& e : dual_graph(S).edges) {
      os << "  v" << e.parent << " -- v" << e.child << ";\n";
    }
  }
  for (std::size_t k = 0; k < r.discs.size(); ++k) {
    const DiscReport& d = r.discs[k];
    os << "  z" << k << " [shape=box, style=dashed, label=\""
       << dot_escape(d.z.str());
    if (d.disc && !d.disc->exact && d.disc->threshold.finite()) {
      os << "\\ndisc " << dot_escape(disc_region_str(r, d));
    }
    os << "\"];\n";
    if (r.model && d.boundary_s) {
      Rat c = d.z.is_infinity() ? Rat(0) : d.z.value();
      std::optional<std::size_t> idx =
          r.model->index_of(BerkPoint::eta(c, Rat(*d.boundary_s)));
      if (idx) {
        os << "  z" << k << " -- v" << *idx << " [style=dashed];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace

std::string render(const HasseReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: return render_text(r);
    case OutputFormat::Json: return render_json(r);
    default: return render_dot(r);
  }
}

}  // namespace berk
