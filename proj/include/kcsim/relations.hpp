#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcsim/corpus.hpp"
#include "kcsim/distances.hpp"

namespace kcsim {

struct RelationCategory {
  int code = 0;
  std::string_view label;
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive, except the last interval which ends at 1
};

// Nine half-open intervals partitioning [0, 1], "unclose" through "close".
const std::array<RelationCategory, 9>& relation_categories();

// Boundaries belong to the upper category (0.44 -> 5). Values outside [0, 1]
// throw kOutOfRange.
const RelationCategory& categorize(double value);

// Plain-text listing of the nine intervals.
std::string category_legend();

struct NamedObject {
  std::string id;
  std::string display_name;
  std::string group;

  friend bool operator==(const NamedObject&, const NamedObject&) = default;
};

// CSV `id,display_name,group` with header. Ids must be unique.
std::vector<NamedObject> parse_objects_csv(std::string_view csv);
std::vector<NamedObject> load_objects_csv(const std::filesystem::path& path);

// Hit-count based similarities a relation matrix can be built from.
enum class MatrixKind { kMetricM, kDice, kNsd, kNgd };

const char* to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(std::string_view name);

struct MatrixCell {
  std::optional<double> value;
  std::optional<int> category;
  std::optional<HitCounts> counts;
  std::string reason;  // why value or category is absent
};

class RelationMatrix {
 public:
  RelationMatrix(std::vector<NamedObject> rows, std::vector<NamedObject> cols);

  const std::vector<NamedObject>& rows() const noexcept { return rows_; }
  const std::vector<NamedObject>& cols() const noexcept { return cols_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t col_count() const noexcept { return cols_.size(); }

  // Row and column object ids coincide in the same order.
  bool square() const noexcept { return square_; }

  MatrixCell& at(std::size_t r, std::size_t c) { return cells_[r * cols_.size() + c]; }
  const MatrixCell& at(std::size_t r, std::size_t c) const {
    return cells_[r * cols_.size() + c];
  }

  // Cell for a row/col pair that refers to the same object.
  bool is_diagonal(std::size_t r, std::size_t c) const;

 private:
  std::vector<NamedObject> rows_;
  std::vector<NamedObject> cols_;
  std::vector<MatrixCell> cells_;
  bool square_ = false;
};

struct MatrixOptions {
  // Overrides (or supplies) N for NGD.
  std::optional<std::uint64_t> ngd_n;
  // Worker threads for cell evaluation; results do not depend on it.
  unsigned threads = 1;
  // Constant c of the Dice form.
  double dice_offset = 0.0;
};

// Similarity of `kind` from hit counts. Throws on undefined values.
double evaluate(MatrixKind kind, const HitCounts& counts, double dice_offset = 0.0);

// Fills every off-diagonal cell with hit counts, similarity and category.
// Lookup failures and undefined similarities stay absent with a reason; they
// never abort the build. Coincident row/column sets are computed once per
// unordered pair and mirrored.
RelationMatrix build_matrix(std::span<const NamedObject> rows,
                            std::span<const NamedObject> cols,
                            const HitProvider& provider, MatrixKind kind,
                            const MatrixOptions& options = {});

enum class ExportFormat { kValues, kCategories };

// TSV: header row of column ids after an empty corner cell, then one row per
// object. Absent cells are empty fields; values use 6 decimals.
std::string export_matrix(const RelationMatrix& matrix, ExportFormat format);

// Reads export_matrix output back. Objects get the ids as display names.
RelationMatrix import_matrix(std::string_view tsv, ExportFormat format);

// One line per off-diagonal cell: ids, counts, value, category, status.
std::string provenance_log(const RelationMatrix& matrix);

// Agglomerative clustering -------------------------------------------------

enum class Linkage { kSingle, kAverage, kComplete };

const char* to_string(Linkage linkage);
Linkage linkage_from_string(std::string_view name);

struct StopRule {
  // Stop when this many clusters remain.
  std::optional<std::size_t> clusters;
  // Stop before the first merge whose linkage distance exceeds this.
  std::optional<double> max_distance;
};

struct Merge {
  std::vector<std::string> left;
  std::vector<std::string> right;
  double distance = 0.0;
};

struct Clustering {
  std::vector<Merge> merges;
  // Member ids sorted; groups ordered by their first member.
  std::vector<std::vector<std::string>> groups;
};

// Distance is 1 - similarity for defined cells and 1 for absent ones. Ties
// are broken by the lexicographic (smallest id, smallest id) pair of the two
// clusters.
Clustering cluster(const RelationMatrix& matrix, Linkage linkage,
                   const StopRule& stop);

}  // namespace kcsim
