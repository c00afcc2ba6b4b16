#pragma once

// The local-isotropy pipeline for a diagonal form over Q_p(T):
//   1. bad locus Z = zeros and poles of the coefficients;
//   2. completion check and certified solution disc at every z in Z;
//   3. coverage test: when the discs cover the whole line, every completion
//      is witnessed and the model steps trivialize;
//   4. otherwise a model adapted to shrunken disc neighborhoods is built and
//      every vertex valuation and double point is checked by Springer
//      reduction;
//   5. per component, the classes meeting Z are handled by the discs and the
//      remaining classes by the component's function-field witness.
// The conclusion is LocalEverywhere, ObstructionAt (with a certificate
// chain), or Inconclusive (with a reason).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "berk/divisor.hpp"
#include "berk/local_global.hpp"
#include "berk/model.hpp"
#include "berk/parse.hpp"
#include "berk/quadform.hpp"

namespace berk {

struct AnalyzeOptions {
  long precision = 32;                       // solution disc series order
  ModelVariant variant = ModelVariant::C1;
  long max_degree = 1;  // entry degree bound of the global witness pool
};

std::string variant_name(ModelVariant v);

struct SiteReport {
  std::string site;
  IsotropyVerdict verdict;
};

struct DiscReport {
  ClosedPoint z;
  IsotropyVerdict completion;        // the verdict at the (T-z)-adic site
  std::optional<SolutionDisc> disc;  // present when isotropic
  std::optional<long> boundary_s;    // model boundary log-radius at z
};

struct ExceptionalCheck {
  std::string cls;  // the residue class, with the z it comes from
  bool covered_by_disc = false;
  std::optional<IsotropyVerdict> verdict;  // when checked individually
  std::string note;
};

struct ComponentReport {
  std::size_t vertex = 0;
  std::string site;
  std::string note;  // how the classes away from Z are handled
  std::vector<ExceptionalCheck> exceptional;
};

enum class Conclusion { LocalEverywhere, ObstructionAt, Inconclusive };

struct GlobalWitness {
  std::vector<RatFunc> coords;
  std::string note;
};

struct HasseReport {
  std::int64_t p = 0;
  std::vector<RatFunc> coeffs;
  std::string parse_note;

  std::vector<ClosedPoint> bad_locus;
  std::vector<DiscReport> discs;
  bool discs_cover_line = false;
  std::string coverage_note;

  std::optional<VertexSet> model;
  std::string variant;
  std::vector<SiteReport> vertex_sites;
  std::vector<SiteReport> edge_sites;
  std::vector<ComponentReport> components;

  Conclusion conclusion = Conclusion::Inconclusive;
  std::string obstruction_site;  // ObstructionAt
  CertNode certificate;          // ObstructionAt
  std::string reason;            // Inconclusive
  std::string global_note;
  std::optional<GlobalWitness> global_witness;

  // 0 = LocalEverywhere, 1 = ObstructionAt, 2 = Inconclusive.
  int exit_code() const;
};

HasseReport analyze(const QuadForm& q, const AnalyzeOptions& opts = {});
HasseReport analyze_parsed(const ParsedForm& f,
                           const AnalyzeOptions& opts = {});

}  // namespace berk
