#include "kcsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kcsim/compressor.hpp"
#include "kcsim/corpus.hpp"
#include "kcsim/distances.hpp"
#include "kcsim/error.hpp"
#include "kcsim/relations.hpp"
#include "kcsim/text.hpp"

namespace kcsim::cli {
namespace {

namespace fs = std::filesystem;

// Failure inside provider loading; reported with its own exit code.
struct ProviderError {
  std::string message;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedInput:
    case ErrorKind::kIo:
      return kMalformed;
    case ErrorKind::kNotFound:
      return kNotFound;
    case ErrorKind::kDivisionDegenerate:
    case ErrorKind::kLogDomain:
    case ErrorKind::kMissingN:
    case ErrorKind::kOutOfRange:
      return kUndefined;
  }
  return kMalformed;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
}

BitString read_bits(const fs::path& path, bool raw_bytes) {
  const std::string text = read_text(path);
  BitString bits = raw_bytes
                       ? BitString::from_bytes(std::span(
                             reinterpret_cast<const std::uint8_t*>(text.data()),
                             text.size()))
                       : BitString::parse(text);
  if (bits.empty()) throw Error(ErrorKind::kMalformedInput, "empty bitstring");
  return bits;
}

// Owns whichever backing store the --provider flag named.
class LoadedProvider {
 public:
  static LoadedProvider load(const std::string& spec, std::ostream& err) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorKind::kMalformedInput,
                  "--provider must be index:<path> or table:<path>");
    }
    const std::string scheme = spec.substr(0, colon);
    const fs::path path = spec.substr(colon + 1);
    if (scheme != "index" && scheme != "table") {
      throw Error(ErrorKind::kMalformedInput, "unknown provider scheme " + scheme);
    }
    LoadedProvider loaded;
    try {
      if (scheme == "index") {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
        loaded.index_ = std::make_unique<CorpusIndex>(CorpusIndex::load(in));
        loaded.provider_ = std::make_unique<IndexProvider>(*loaded.index_);
      } else {
        loaded.table_ = std::make_unique<HitTable>(HitTable::load(path));
        for (const auto& w : loaded.table_->warnings()) err << "warning: " << w << '\n';
        loaded.provider_ = std::make_unique<TableProvider>(*loaded.table_);
      }
    } catch (const Error& e) {
      throw ProviderError{e.what()};
    }
    return loaded;
  }

  const HitProvider& provider() const { return *provider_; }

 private:
  std::unique_ptr<CorpusIndex> index_;
  std::unique_ptr<HitTable> table_;
  std::unique_ptr<HitProvider> provider_;
};

struct CompressArgs {
  std::string input;
  std::string keys;
  std::string key_mode = "shared";
  std::string share_by = "value";
  double q_bits = 0.0;
  bool raw_bytes = false;
};

int cmd_compress(const CompressArgs& args, std::ostream& out) {
  const BitString w = read_bits(args.input, args.raw_bytes);
  CompressedForm form;
  if (args.keys.empty()) {
    form = compress(w);
  } else {
    const KeyDictionary keys = KeyDictionary::parse(read_text(args.keys));
    if (args.key_mode == "declared") {
      form = compress_declared(w, keys);
    } else {
      form = compress_conditional(
          w, keys, args.share_by == "symbol" ? KeySharing::kBySymbol : KeySharing::kByValue);
    }
  }
  const ComplexityScore k = approx_complexity(form, args.q_bits);
  out << form.compressed_length_bits << ' ' << form.source_length_bits << ' '
      << format_trimmed(k.value) << '\n';
  out << "C(w) = " << form.to_text() << '\n';
  out << form.emitted_dictionary.to_text();
  return kOk;
}

struct SimArgs {
  std::string provider;
  std::string kind = "metric-m";
  std::optional<std::uint64_t> ngd_n;
  std::string x;
  std::string y;
  std::string share_by = "value";
};

int cmd_sim_compression(const SimArgs& args, std::ostream& out) {
  const BitString x = read_bits(args.x, false);
  const BitString y = read_bits(args.y, false);
  const KeySharing sharing =
      args.share_by == "symbol" ? KeySharing::kBySymbol : KeySharing::kByValue;
  const auto c_x = compress(x).compressed_length_bits;
  const auto c_y = compress(y).compressed_length_bits;
  const auto c_xy = compress_conditional(x, keys_of(y), sharing).compressed_length_bits;
  if (args.kind == "ncd") {
    const auto score = ncd(static_cast<double>(c_x), static_cast<double>(c_y),
                           static_cast<double>(c_xy));
    out << "C(x)=" << c_x << " C(y)=" << c_y << " C(x|y)=" << c_xy
        << " ncd=" << format_fixed(score.value) << '\n';
  } else {
    const double k_x = approx_complexity(x).value;
    const double k_y = approx_complexity(y).value;
    const double k_xy = approx_complexity(x, keys_of(y), sharing).value;
    out << "K(x)=" << format_fixed(k_x) << " K(y)=" << format_fixed(k_y)
        << " K(x|y)=" << format_fixed(k_xy)
        << " nid=" << format_fixed(nid(k_x, k_y, k_xy).value) << '\n';
  }
  return kOk;
}

int cmd_sim(const SimArgs& args, std::ostream& out, std::ostream& err) {
  if (args.kind == "ncd" || args.kind == "nid") return cmd_sim_compression(args, out);
  const MatrixKind kind = matrix_kind_from_string(args.kind);
  if (args.provider.empty()) {
    throw Error(ErrorKind::kMalformedInput, "--provider is required for --kind " + args.kind);
  }
  const auto loaded = LoadedProvider::load(args.provider, err);
  HitCounts counts = hit_counts(loaded.provider(), args.x, args.y);
  if (args.ngd_n) counts.n_total = args.ngd_n;
  const double value = evaluate(kind, counts);
  out << "f_x=" << counts.f_x << " f_y=" << counts.f_y << " f_xy=" << counts.f_xy;
  if (counts.n_total) out << " N=" << *counts.n_total;
  out << ' ' << args.kind << '=' << format_fixed(value) << '\n';
  return kOk;
}

struct MatrixArgs {
  std::string objects;
  std::string cols;
  std::string provider;
  std::string kind = "metric-m";
  std::optional<std::uint64_t> ngd_n;
  std::string out_dir;
  std::string format = "categories";
  unsigned threads = 1;
};

int cmd_matrix(const MatrixArgs& args, std::ostream& out, std::ostream& err) {
  const MatrixKind kind = matrix_kind_from_string(args.kind);
  const auto rows = load_objects_csv(args.objects);
  const auto cols = args.cols.empty() ? rows : load_objects_csv(args.cols);
  if (rows.size() < 2 && args.cols.empty()) {
    throw Error(ErrorKind::kMalformedInput, "need >= 2 objects");
  }
  if (rows.empty() || cols.empty()) {
    throw Error(ErrorKind::kMalformedInput, "need >= 2 objects");
  }
  if (args.out_dir.empty()) throw Error(ErrorKind::kMalformedInput, "--out is required");
  const auto loaded = LoadedProvider::load(args.provider, err);

  MatrixOptions options;
  options.ngd_n = args.ngd_n;
  options.threads = args.threads;
  const RelationMatrix matrix = build_matrix(rows, cols, loaded.provider(), kind, options);

  std::size_t cells = 0, with_counts = 0, defined = 0;
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      if (matrix.is_diagonal(r, c)) continue;
      ++cells;
      if (matrix.at(r, c).counts) ++with_counts;
      if (matrix.at(r, c).value) ++defined;
    }
  }

  const fs::path dir = args.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string());
  const std::string values = export_matrix(matrix, ExportFormat::kValues);
  const std::string categories = export_matrix(matrix, ExportFormat::kCategories);
  write_text(dir / "values.tsv", values);
  write_text(dir / "categories.tsv", categories);
  write_text(dir / "legend.txt", category_legend());
  write_text(dir / "provenance.tsv", provenance_log(matrix));

  out << (args.format == "values" ? values : categories);

  // Objects with no defined cell at all are flagged as absent blocks.
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    bool any = false;
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
      if (!matrix.is_diagonal(r, c) && matrix.at(r, c).value) any = true;
    }
    if (!any) err << "flagged: no defined cells for row " << matrix.rows()[r].id << '\n';
  }
  err << "cells=" << cells << " defined=" << defined
      << " absent=" << (cells - defined) << '\n';
  if (cells > 0 && with_counts == 0) {
    err << "error: provider returned no counts for any cell\n";
    return kProviderFailure;
  }
  return kOk;
}

struct IndexArgs {
  std::string corpus;
  std::string out;
  std::string omega = "term-occurrences";
  bool no_case_fold = false;
  bool keep_punctuation = false;
};

int cmd_index(const IndexArgs& args, std::ostream& out) {
  TokenizerConfig config;
  config.case_fold = !args.no_case_fold;
  config.strip_punctuation = !args.keep_punctuation;
  const auto docs = read_corpus(args.corpus);
  const auto index = CorpusIndex::build(docs, config, omega_mode_from_string(args.omega));
  if (!args.out.empty()) {
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw Error(ErrorKind::kIo, "cannot write " + args.out);
    index.save(file);
  }
  out << "docs=" << index.document_count() << " vocab=" << index.vocabulary_size()
      << " omega=" << index.omega_cardinality() << " psi=" << index.psi() << '\n';
  return kOk;
}

struct ClusterArgs {
  std::string matrix;
  std::string linkage = "average";
  std::optional<std::size_t> k;
  std::optional<double> threshold;
};

int cmd_cluster(const ClusterArgs& args, std::ostream& out) {
  const RelationMatrix matrix =
      import_matrix(read_text(args.matrix), ExportFormat::kValues);
  const Clustering result =
      cluster(matrix, linkage_from_string(args.linkage), {args.k, args.threshold});
  auto join = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
    return s;
  };
  for (const auto& m : result.merges) {
    out << "merge {" << join(m.left) << "} {" << join(m.right) << "} "
        << format_fixed(m.distance) << '\n';
  }
  for (const auto& g : result.groups) out << "group " << join(g) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compression and hit-count similarity toolkit", "kcsim"};
  app.require_subcommand(1);

  CompressArgs compress_args;
  auto* compress_cmd = app.add_subcommand("compress", "Nibble-key compression report");
  compress_cmd->add_option("input", compress_args.input, "Bitstring file")->required();
  compress_cmd->add_option("--keys", compress_args.keys, "Key dictionary file");
  compress_cmd->add_option("--key-mode", compress_args.key_mode,
                           "shared: keys are known to the decoder; declared: keys are "
                           "w's own table and are emitted")
      ->check(CLI::IsMember({"shared", "declared"}));
  compress_cmd->add_option("--share-by", compress_args.share_by)
      ->check(CLI::IsMember({"value", "symbol"}));
  compress_cmd->add_option("--q", compress_args.q_bits, "Program overhead in bits");
  compress_cmd->add_flag("--bytes", compress_args.raw_bytes,
                         "Read the input as raw bytes, MSB first");

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand("sim", "Similarity of one pair");
  sim_cmd->add_option("--provider", sim_args.provider, "index:<path> or table:<path>");
  sim_cmd->add_option("--kind", sim_args.kind)
      ->check(CLI::IsMember({"ncd", "nsd", "ngd", "metric-m", "dice", "nid"}));
  sim_cmd->add_option("--ngd-n", sim_args.ngd_n, "Index size N");
  sim_cmd->add_option("--share-by", sim_args.share_by)
      ->check(CLI::IsMember({"value", "symbol"}));
  sim_cmd->add_option("x", sim_args.x)->required();
  sim_cmd->add_option("y", sim_args.y)->required();

  MatrixArgs matrix_args;
  auto* matrix_cmd = app.add_subcommand("matrix", "Relation matrix over named objects");
  matrix_cmd->add_option("objects", matrix_args.objects, "Object CSV")->required();
  matrix_cmd->add_option("--cols", matrix_args.cols, "Column object CSV");
  matrix_cmd->add_option("--provider", matrix_args.provider)->required();
  matrix_cmd->add_option("--kind", matrix_args.kind)
      ->check(CLI::IsMember({"ncd", "nsd", "ngd", "metric-m", "dice", "nid"}));
  matrix_cmd->add_option("--ngd-n", matrix_args.ngd_n);
  matrix_cmd->add_option("--out", matrix_args.out_dir, "Output directory")->required();
  matrix_cmd->add_option("--format", matrix_args.format)
      ->check(CLI::IsMember({"values", "categories"}));
  matrix_cmd->add_option("--threads", matrix_args.threads);

  IndexArgs index_args;
  auto* index_cmd = app.add_subcommand("index", "Build a corpus index");
  index_cmd->add_option("corpus", index_args.corpus, "Directory or JSON-lines file")
      ->required();
  index_cmd->add_option("--out", index_args.out, "Index file to write");
  index_cmd->add_option("--omega", index_args.omega)
      ->check(CLI::IsMember({"term-occurrences", "vocabulary-size", "document-count"}));
  index_cmd->add_flag("--no-case-fold", index_args.no_case_fold);
  index_cmd->add_flag("--keep-punct", index_args.keep_punctuation);

  ClusterArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("cluster", "Agglomerative clustering of a values TSV");
  cluster_cmd->add_option("matrix", cluster_args.matrix)->required();
  cluster_cmd->add_option("--linkage", cluster_args.linkage)
      ->check(CLI::IsMember({"single", "average", "complete"}));
  cluster_cmd->add_option("--k", cluster_args.k);
  cluster_cmd->add_option("--threshold", cluster_args.threshold,
                          "Largest linkage distance still merged");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformed;
  }

  try {
    if (*compress_cmd) return cmd_compress(compress_args, out);
    if (*sim_cmd) return cmd_sim(sim_args, out, err);
    if (*matrix_cmd) return cmd_matrix(matrix_args, out, err);
    if (*index_cmd) return cmd_index(index_args, out);
    if (*cluster_cmd) return cmd_cluster(cluster_args, out);
  } catch (const ProviderError& e) {
    err << "error: provider: " << e.message << '\n';
    return kProviderFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kMalformed;
}

}  // namespace kcsim::cli
