#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kcsim/compressor.hpp"

namespace kcsim {

// Hit counts for a term pair: f(x), f(y), f(x,y) and, when known, the index
// size N.
struct HitCounts {
  std::uint64_t f_x = 0;
  std::uint64_t f_y = 0;
  std::uint64_t f_xy = 0;
  std::optional<std::uint64_t> n_total{};

  HitCounts swapped() const { return {f_y, f_x, f_xy, n_total}; }
  // f_xy <= min(f_x, f_y) and N >= max(f_x, f_y).
  bool consistent() const;

  friend bool operator==(const HitCounts&, const HitCounts&) = default;
};

enum class ScoreKind { kNid, kNcd, kNsd, kNgd, kMetricM, kDice, kInfoDist };

const char* to_string(ScoreKind kind);

struct SimilarityScore {
  double value = 0.0;
  ScoreKind kind = ScoreKind::kInfoDist;
};

// E(x,y) = K(x|y) - min{K(x), K(y)}. Not clamped: it goes negative on real
// inputs.
SimilarityScore information_distance(double k_x, double k_y, double k_x_given_y);

// (K(x|y) - min{K(x),K(y)}) / max{K(x),K(y)}.
SimilarityScore nid(double k_x, double k_y, double k_x_given_y);

// Same shape over compressed lengths in bits. The numerator term is whatever
// the caller measured: a conditional length C(x|y) or a concatenation C(xy).
SimilarityScore ncd(double c_x, double c_y, double c_x_given_y);

enum class NcdMode {
  kConditional,    // C(x | keys of y)
  kConcatenation,  // C(xy)
};

SimilarityScore ncd(const BitString& x, const BitString& y,
                    const Compressor& compressor,
                    NcdMode mode = NcdMode::kConditional);

// Count-only normalized search distance:
// (f_xy - min(f_x,f_y)) / max(f_x,f_y). Lies in [-1, 0] for consistent counts.
SimilarityScore nsd(const HitCounts& h);

// Normalized Google distance; natural logs, requires N.
SimilarityScore ngd(const HitCounts& h);

// 2 f_xy / (f_x + f_y) + c.
SimilarityScore dice_similarity(std::uint64_t f_x, std::uint64_t f_y,
                                std::uint64_t f_xy, double c = 0.0);

// log(2 f_xy) / log(f_x + f_y). Undefined (kLogDomain) when f_xy == 0.
SimilarityScore metric_m(const HitCounts& h);
// Variant with an explicit log base; only used to show base independence.
SimilarityScore metric_m(const HitCounts& h, double log_base);

// Axiom checking ------------------------------------------------------------

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::vector<std::string> counterexamples;
};

struct AxiomReport {
  AxiomCheck non_negativity{"non-negativity", true, 0, {}};
  AxiomCheck symmetry{"symmetry", true, 0, {}};
  AxiomCheck self_maximal{"s(x,y) <= s(x,x)", true, 0, {}};
  AxiomCheck unit_range{"range in [0,1]", true, 0, {}};
  // Ordered pairs whose similarity was undefined; they are skipped.
  std::size_t undefined = 0;
  std::size_t evaluated = 0;

  bool all_passed() const;
  std::string summary() const;
};

// Returns std::nullopt for pairs where the similarity is undefined.
using PairSimilarity =
    std::function<std::optional<double>(const std::string&, const std::string&)>;

// Evaluates `similarity` over every ordered pair (including x == y) of
// `objects` and reports each similarity axiom. Failures are data.
AxiomReport check_similarity_axioms(std::span<const std::string> objects,
                                    const PairSimilarity& similarity,
                                    double tolerance = 1e-12);

}  // namespace kcsim
