#include "kcsim/distances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "kcsim/error.hpp"
#include "kcsim/text.hpp"

namespace kcsim {
namespace {

void require_finite(std::initializer_list<double> values) {
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kMalformedInput, "non-finite input");
    }
  }
}

double normalized_excess(double joint, double a, double b) {
  const double hi = std::max(a, b);
  if (hi == 0.0) {
    throw Error(ErrorKind::kDivisionDegenerate, "max{a,b} is zero");
  }
  return (joint - std::min(a, b)) / hi;
}

double ln(std::uint64_t count) { return std::log(static_cast<double>(count)); }

std::string pair_text(const std::string& x, const std::string& y) {
  return "(" + x + ", " + y + ")";
}

}  // namespace

bool HitCounts::consistent() const {
  if (f_xy > std::min(f_x, f_y)) return false;
  if (n_total && *n_total < std::max(f_x, f_y)) return false;
  return true;
}

const char* to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kNid: return "nid";
    case ScoreKind::kNcd: return "ncd";
    case ScoreKind::kNsd: return "nsd";
    case ScoreKind::kNgd: return "ngd";
    case ScoreKind::kMetricM: return "metric-m";
    case ScoreKind::kDice: return "dice";
    case ScoreKind::kInfoDist: return "info-dist";
  }
  return "unknown";
}

SimilarityScore information_distance(double k_x, double k_y, double k_x_given_y) {
  require_finite({k_x, k_y, k_x_given_y});
  return {k_x_given_y - std::min(k_x, k_y), ScoreKind::kInfoDist};
}

SimilarityScore nid(double k_x, double k_y, double k_x_given_y) {
  require_finite({k_x, k_y, k_x_given_y});
  return {normalized_excess(k_x_given_y, k_x, k_y), ScoreKind::kNid};
}

SimilarityScore ncd(double c_x, double c_y, double c_x_given_y) {
  require_finite({c_x, c_y, c_x_given_y});
  return {normalized_excess(c_x_given_y, c_x, c_y), ScoreKind::kNcd};
}

SimilarityScore ncd(const BitString& x, const BitString& y,
                    const Compressor& compressor, NcdMode mode) {
  const auto c_x = static_cast<double>(compressor.length_bits(x));
  const auto c_y = static_cast<double>(compressor.length_bits(y));
  const auto joint = static_cast<double>(
      mode == NcdMode::kConditional ? compressor.conditional_length_bits(x, y)
                                    : compressor.length_bits(x.concat(y)));
  return ncd(c_x, c_y, joint);
}

SimilarityScore nsd(const HitCounts& h) {
  const double hi = static_cast<double>(std::max(h.f_x, h.f_y));
  if (hi == 0.0) {
    throw Error(ErrorKind::kDivisionDegenerate, "both hit counts are zero");
  }
  const double lo = static_cast<double>(std::min(h.f_x, h.f_y));
  return {(static_cast<double>(h.f_xy) - lo) / hi, ScoreKind::kNsd};
}

SimilarityScore ngd(const HitCounts& h) {
  if (!h.n_total) throw Error(ErrorKind::kMissingN, "N required for NGD");
  if (h.f_x == 0 || h.f_y == 0 || h.f_xy == 0) {
    throw Error(ErrorKind::kLogDomain, "NGD needs f(x), f(y), f(x,y) > 0");
  }
  const double log_x = ln(h.f_x);
  const double log_y = ln(h.f_y);
  const double denominator = ln(*h.n_total) - std::min(log_x, log_y);
  if (!(denominator > 0.0)) {
    throw Error(ErrorKind::kDivisionDegenerate, "N must exceed min(f(x), f(y))");
  }
  return {(std::max(log_x, log_y) - ln(h.f_xy)) / denominator, ScoreKind::kNgd};
}

SimilarityScore dice_similarity(std::uint64_t f_x, std::uint64_t f_y,
                                std::uint64_t f_xy, double c) {
  const double sum = static_cast<double>(f_x) + static_cast<double>(f_y);
  if (sum == 0.0) {
    throw Error(ErrorKind::kDivisionDegenerate, "f(x) + f(y) is zero");
  }
  return {2.0 * static_cast<double>(f_xy) / sum + c, ScoreKind::kDice};
}

SimilarityScore metric_m(const HitCounts& h) {
  if (h.f_xy == 0) {
    throw Error(ErrorKind::kLogDomain, "metric M undefined for f(x,y) = 0");
  }
  const double sum = static_cast<double>(h.f_x) + static_cast<double>(h.f_y);
  if (sum < 2.0) {
    throw Error(ErrorKind::kDivisionDegenerate, "metric M needs f(x) + f(y) >= 2");
  }
  return {std::log(2.0 * static_cast<double>(h.f_xy)) / std::log(sum),
          ScoreKind::kMetricM};
}

SimilarityScore metric_m(const HitCounts& h, double log_base) {
  if (!(log_base > 0.0) || log_base == 1.0) {
    throw Error(ErrorKind::kLogDomain, "log base must be positive and not 1");
  }
  if (h.f_xy == 0) {
    throw Error(ErrorKind::kLogDomain, "metric M undefined for f(x,y) = 0");
  }
  const double sum = static_cast<double>(h.f_x) + static_cast<double>(h.f_y);
  if (sum < 2.0) {
    throw Error(ErrorKind::kDivisionDegenerate, "metric M needs f(x) + f(y) >= 2");
  }
  const double base = std::log(log_base);
  const double numerator = std::log(2.0 * static_cast<double>(h.f_xy)) / base;
  return {numerator / (std::log(sum) / base), ScoreKind::kMetricM};
}

bool AxiomReport::all_passed() const {
  return non_negativity.passed && symmetry.passed && self_maximal.passed &&
         unit_range.passed;
}

std::string AxiomReport::summary() const {
  std::ostringstream out;
  for (const AxiomCheck* check :
       {&non_negativity, &symmetry, &self_maximal, &unit_range}) {
    out << check->name << ": " << (check->passed ? "pass" : "FAIL") << " ("
        << check->checked << " checked";
    if (!check->counterexamples.empty()) {
      out << ", e.g. " << check->counterexamples.front();
    }
    out << ")\n";
  }
  out << "evaluated=" << evaluated << " undefined=" << undefined << "\n";
  return out.str();
}

AxiomReport check_similarity_axioms(std::span<const std::string> objects,
                                    const PairSimilarity& similarity,
                                    double tolerance) {
  AxiomReport report;
  std::map<std::pair<std::size_t, std::size_t>, double> values;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = 0; j < objects.size(); ++j) {
      std::optional<double> v;
      try {
        v = similarity(objects[i], objects[j]);
      } catch (const Error&) {
        v.reset();
      }
      if (!v) {
        ++report.undefined;
        continue;
      }
      ++report.evaluated;
      values[{i, j}] = *v;
    }
  }

  auto fail = [](AxiomCheck& check, std::string what) {
    check.passed = false;
    check.counterexamples.push_back(std::move(what));
  };

  for (const auto& [ij, v] : values) {
    const auto [i, j] = ij;
    const auto where = pair_text(objects[i], objects[j]);

    ++report.non_negativity.checked;
    if (v < -tolerance) {
      fail(report.non_negativity, "s" + where + " = " + format_fixed(v));
    }

    ++report.unit_range.checked;
    if (v < -tolerance || v > 1.0 + tolerance) {
      fail(report.unit_range, "s" + where + " = " + format_fixed(v));
    }

    if (i < j) {
      if (const auto it = values.find({j, i}); it != values.end()) {
        ++report.symmetry.checked;
        if (std::abs(it->second - v) > tolerance) {
          fail(report.symmetry, "s" + where + " = " + format_fixed(v) +
                                    " but s" + pair_text(objects[j], objects[i]) +
                                    " = " + format_fixed(it->second));
        }
      }
    }

    if (i != j) {
      if (const auto it = values.find({i, i}); it != values.end()) {
        ++report.self_maximal.checked;
        if (v > it->second + tolerance) {
          fail(report.self_maximal, "s" + where + " = " + format_fixed(v) +
                                        " > s" + pair_text(objects[i], objects[i]) +
                                        " = " + format_fixed(it->second));
        }
      }
    }
  }
  return report;
}

}  // namespace kcsim
