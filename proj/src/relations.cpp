#include "kcsim/relations.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "kcsim/error.hpp"
#include "kcsim/text.hpp"

namespace kcsim {
namespace {

constexpr std::array<RelationCategory, 9> kCategories = {{
    {1, "unclose", 0.00, 0.11},
    {2, "weakest", 0.11, 0.22},
    {3, "weaker", 0.22, 0.33},
    {4, "weak", 0.33, 0.44},
    {5, "middle", 0.44, 0.56},
    {6, "strong", 0.56, 0.67},
    {7, "stronger", 0.67, 0.78},
    {8, "strongest", 0.78, 0.89},
    {9, "close", 0.89, 1.00},
}};

std::string cell_text(const MatrixCell& cell, ExportFormat format) {
  if (format == ExportFormat::kValues) {
    return cell.value ? format_fixed(*cell.value) : std::string();
  }
  return cell.category ? std::to_string(*cell.category) : std::string();
}

void fill_cell(MatrixCell& cell, const NamedObject& row, const NamedObject& col,
               const HitProvider& provider, MatrixKind kind,
               const MatrixOptions& options) {
  HitCounts counts;
  try {
    counts = provider.hit_counts(row.display_name, col.display_name);
  } catch (const Error& e) {
    cell.reason = std::string("lookup failed: ") + e.what();
    return;
  }
  if (options.ngd_n) counts.n_total = options.ngd_n;
  cell.counts = counts;
  if (counts.f_x == 0 || counts.f_y == 0) {
    cell.reason = counts.f_x == 0 ? "no hits for " + row.display_name
                                  : "no hits for " + col.display_name;
    return;
  }
  try {
    cell.value = evaluate(kind, counts, options.dice_offset);
  } catch (const Error& e) {
    cell.reason = std::string("undefined: ") + e.what();
    return;
  }
  if (*cell.value < 0.0 || *cell.value > 1.0) {
    cell.reason = "value outside [0,1]; no category";
    return;
  }
  cell.category = categorize(*cell.value).code;
}

}  // namespace

const std::array<RelationCategory, 9>& relation_categories() { return kCategories; }

const RelationCategory& categorize(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::kOutOfRange,
                "similarity " + format_fixed(value) + " is outside [0,1]");
  }
  for (auto it = kCategories.rbegin(); it != kCategories.rend(); ++it) {
    if (value >= it->lower) return *it;
  }
  return kCategories.front();
}

std::string category_legend() {
  std::ostringstream out;
  out << "code\tlabel\tinterval\n";
  for (const auto& c : kCategories) {
    out << c.code << '\t' << c.label << '\t' << '[' << format_trimmed(c.lower, 2)
        << ", " << format_trimmed(c.upper, 2) << (c.code == 9 ? "]" : ")") << '\n';
  }
  return out.str();
}

std::vector<NamedObject> parse_objects_csv(std::string_view csv) {
  std::vector<NamedObject> objects;
  std::set<std::string> ids;
  bool seen_header = false;
  std::size_t line_no = 0;
  for (const auto& raw : split(csv, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!seen_header) {
      if (fields.size() < 2 || trim(fields[0]) != "id" ||
          trim(fields[1]) != "display_name") {
        throw Error(ErrorKind::kMalformedInput,
                    "object list header must be id,display_name,group");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorKind::kMalformedInput,
                  "line " + std::to_string(line_no) + ": expected id,display_name,group");
    }
    NamedObject obj{std::string(trim(fields[0])), std::string(trim(fields[1])),
                    fields.size() == 3 ? std::string(trim(fields[2])) : ""};
    if (obj.id.empty()) {
      throw Error(ErrorKind::kMalformedInput,
                  "line " + std::to_string(line_no) + ": empty id");
    }
    if (!ids.insert(obj.id).second) {
      throw Error(ErrorKind::kMalformedInput, "duplicate object id " + obj.id);
    }
    objects.push_back(std::move(obj));
  }
  return objects;
}

std::vector<NamedObject> load_objects_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_objects_csv(buf.str());
}

const char* to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::kMetricM: return "metric-m";
    case MatrixKind::kDice: return "dice";
    case MatrixKind::kNsd: return "nsd";
    case MatrixKind::kNgd: return "ngd";
  }
  return "unknown";
}

MatrixKind matrix_kind_from_string(std::string_view name) {
  for (const auto kind :
       {MatrixKind::kMetricM, MatrixKind::kDice, MatrixKind::kNsd, MatrixKind::kNgd}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::kMalformedInput,
              "kind " + std::string(name) + " cannot be computed from hit counts");
}

double evaluate(MatrixKind kind, const HitCounts& counts, double dice_offset) {
  switch (kind) {
    case MatrixKind::kMetricM: return metric_m(counts).value;
    case MatrixKind::kDice:
      return dice_similarity(counts.f_x, counts.f_y, counts.f_xy, dice_offset).value;
    case MatrixKind::kNsd: return nsd(counts).value;
    case MatrixKind::kNgd: return ngd(counts).value;
  }
  throw Error(ErrorKind::kMalformedInput, "unknown similarity kind");
}

RelationMatrix::RelationMatrix(std::vector<NamedObject> rows,
                               std::vector<NamedObject> cols)
    : rows_(std::move(rows)), cols_(std::move(cols)) {
  cells_.resize(rows_.size() * cols_.size());
  square_ = rows_.size() == cols_.size() &&
            std::equal(rows_.begin(), rows_.end(), cols_.begin(),
                       [](const NamedObject& a, const NamedObject& b) {
                         return a.id == b.id;
                       });
}

bool RelationMatrix::is_diagonal(std::size_t r, std::size_t c) const {
  return rows_[r].id == cols_[c].id;
}

RelationMatrix build_matrix(std::span<const NamedObject> rows,
                            std::span<const NamedObject> cols,
                            const HitProvider& provider, MatrixKind kind,
                            const MatrixOptions& options) {
  RelationMatrix matrix({rows.begin(), rows.end()}, {cols.begin(), cols.end()});

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      if (matrix.is_diagonal(r, c)) continue;
      if (matrix.square() && c < r) continue;
      tasks.emplace_back(r, c);
    }
  }

  auto run = [&](std::atomic<std::size_t>& next) {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto [r, c] = tasks[t];
      fill_cell(matrix.at(r, c), matrix.rows()[r], matrix.cols()[c], provider, kind,
                options);
    }
  };
  std::atomic<std::size_t> next{0};
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(tasks.size())));
  if (workers <= 1) {
    run(next);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back([&] { run(next); });
  }

  if (matrix.square()) {
    for (const auto& [r, c] : tasks) {
      MatrixCell mirrored = matrix.at(r, c);
      if (mirrored.counts) mirrored.counts = mirrored.counts->swapped();
      matrix.at(c, r) = std::move(mirrored);
    }
  }
  return matrix;
}

std::string export_matrix(const RelationMatrix& matrix, ExportFormat format) {
  std::string out;
  for (const auto& col : matrix.cols()) out += '\t' + col.id;
  out += '\n';
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    out += matrix.rows()[r].id;
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      out += '\t';
      if (!matrix.is_diagonal(r, c)) out += cell_text(matrix.at(r, c), format);
    }
    out += '\n';
  }
  return out;
}

RelationMatrix import_matrix(std::string_view tsv, ExportFormat format) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& raw : split(tsv, '\n')) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    lines.push_back(split(line, '\t'));
  }
  if (lines.empty() || lines.front().empty() || !lines.front().front().empty()) {
    throw Error(ErrorKind::kMalformedInput, "matrix TSV must start with a header row");
  }
  std::vector<NamedObject> cols;
  for (std::size_t i = 1; i < lines.front().size(); ++i) {
    cols.push_back({lines.front()[i], lines.front()[i], ""});
  }
  std::vector<NamedObject> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != cols.size() + 1) {
      throw Error(ErrorKind::kMalformedInput,
                  "matrix row " + std::to_string(i) + " has the wrong field count");
    }
    rows.push_back({lines[i].front(), lines[i].front(), ""});
  }

  RelationMatrix matrix(std::move(rows), std::move(cols));
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      const std::string& field = lines[r + 1][c + 1];
      if (field.empty()) continue;
      MatrixCell& cell = matrix.at(r, c);
      if (format == ExportFormat::kValues) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
          throw Error(ErrorKind::kMalformedInput, "bad matrix value '" + field + "'");
        }
        cell.value = v;
        if (v >= 0.0 && v <= 1.0) cell.category = categorize(v).code;
      } else {
        int code = 0;
        const auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), code);
        if (ec != std::errc() || ptr != field.data() + field.size() || code < 1 ||
            code > 9) {
          throw Error(ErrorKind::kMalformedInput, "bad category '" + field + "'");
        }
        cell.category = code;
      }
    }
  }
  return matrix;
}

std::string provenance_log(const RelationMatrix& matrix) {
  std::string out = "row\tcol\tf_x\tf_y\tf_xy\tn\tvalue\tcategory\tstatus\n";
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      if (matrix.is_diagonal(r, c)) continue;
      const MatrixCell& cell = matrix.at(r, c);
      out += matrix.rows()[r].id + '\t' + matrix.cols()[c].id + '\t';
      if (cell.counts) {
        out += std::to_string(cell.counts->f_x) + '\t' +
               std::to_string(cell.counts->f_y) + '\t' +
               std::to_string(cell.counts->f_xy) + '\t' +
               (cell.counts->n_total ? std::to_string(*cell.counts->n_total) : "") +
               '\t';
      } else {
        out += "\t\t\t\t";
      }
      out += cell_text(cell, ExportFormat::kValues) + '\t' +
             cell_text(cell, ExportFormat::kCategories) + '\t' +
             (cell.reason.empty() ? "ok" : cell.reason) + '\n';
    }
  }
  return out;
}

const char* to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::kSingle: return "single";
    case Linkage::kAverage: return "average";
    case Linkage::kComplete: return "complete";
  }
  return "unknown";
}

Linkage linkage_from_string(std::string_view name) {
  for (const auto l : {Linkage::kSingle, Linkage::kAverage, Linkage::kComplete}) {
    if (name == to_string(l)) return l;
  }
  throw Error(ErrorKind::kMalformedInput, "unknown linkage " + std::string(name));
}

Clustering cluster(const RelationMatrix& matrix, Linkage linkage,
                   const StopRule& stop) {
  if (!matrix.square()) {
    throw Error(ErrorKind::kMalformedInput, "clustering needs a square matrix");
  }
  const std::size_t n = matrix.row_count();
  if (n < 2) throw Error(ErrorKind::kMalformedInput, "need >= 2 objects to cluster");

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = matrix.at(i, j).value;
      const auto& b = matrix.at(j, i).value;
      dist[i][j] = a ? 1.0 - *a : b ? 1.0 - *b : 1.0;
    }
  }

  struct Group {
    std::vector<std::size_t> members;
    std::string key;  // smallest member id
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < n; ++i) groups.push_back({{i}, matrix.rows()[i].id});

  auto linkage_distance = [&](const Group& a, const Group& b) {
    double acc = linkage == Linkage::kSingle ? std::numeric_limits<double>::infinity()
                 : linkage == Linkage::kComplete ? -std::numeric_limits<double>::infinity()
                                                 : 0.0;
    for (const auto i : a.members) {
      for (const auto j : b.members) {
        const double d = dist[i][j];
        if (linkage == Linkage::kSingle) acc = std::min(acc, d);
        else if (linkage == Linkage::kComplete) acc = std::max(acc, d);
        else acc += d;
      }
    }
    if (linkage == Linkage::kAverage) {
      acc /= static_cast<double>(a.members.size() * b.members.size());
    }
    return acc;
  };

  auto ids_of = [&](const Group& g) {
    std::vector<std::string> ids;
    for (const auto i : g.members) ids.push_back(matrix.rows()[i].id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  Clustering result;
  while (groups.size() > 1) {
    if (stop.clusters && groups.size() <= *stop.clusters) break;

    std::size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::string, std::string> best_key;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        const double d = linkage_distance(groups[a], groups[b]);
        auto key = std::minmax(groups[a].key, groups[b].key);
        std::pair<std::string, std::string> pair_key{key.first, key.second};
        if (d < best || (d == best && pair_key < best_key)) {
          best = d;
          best_a = a;
          best_b = b;
          best_key = std::move(pair_key);
        }
      }
    }
    if (stop.max_distance && best > *stop.max_distance) break;

    result.merges.push_back({ids_of(groups[best_a]), ids_of(groups[best_b]), best});
    Group merged;
    merged.members = groups[best_a].members;
    merged.members.insert(merged.members.end(), groups[best_b].members.begin(),
                          groups[best_b].members.end());
    merged.key = std::min(groups[best_a].key, groups[best_b].key);
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_b));
    groups[best_a] = std::move(merged);
  }

  for (const auto& g : groups) result.groups.push_back(ids_of(g));
  std::sort(result.groups.begin(), result.groups.end());
  return result;
}

}  // namespace kcsim
