#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcsim/distances.hpp"

namespace kcsim {

struct TokenizerConfig {
  bool case_fold = true;          // ASCII letters only
  bool strip_punctuation = true;  // ASCII punctuation is removed from tokens

  std::string describe() const;
  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

// Whitespace split, then the configured folding. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config);

// A single word or a phrase of several words; phrases match as contiguous
// token runs.
class Term {
 public:
  enum class Kind { kWord, kPhrase };

  // Throws kMalformedInput when nothing is left after normalization.
  static Term make(std::string_view raw, const TokenizerConfig& config = {});

  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  Kind kind() const noexcept {
    return tokens_.size() > 1 ? Kind::kPhrase : Kind::kWord;
  }

 private:
  std::string text_;
  std::vector<std::string> tokens_;
};

struct RawDocument {
  std::string id;
  std::string text;
};

// What |Omega| counts. The default sums, over documents, the number of
// distinct terms in each document.
enum class OmegaMode { kTermOccurrences, kVocabularySize, kDocumentCount };

const char* to_string(OmegaMode mode);
OmegaMode omega_mode_from_string(std::string_view name);

// Inverted index with positions. Built once, immutable afterwards apart from
// add_document; all const queries are safe to run concurrently.
class CorpusIndex {
 public:
  struct Posting {
    std::uint32_t doc = 0;
    std::vector<std::uint32_t> positions;

    friend bool operator==(const Posting&, const Posting&) = default;
  };

  // Throws kMalformedInput for an empty collection or duplicate ids.
  static CorpusIndex build(std::span<const RawDocument> documents,
                           const TokenizerConfig& config = {},
                           OmegaMode omega_mode = OmegaMode::kTermOccurrences);

  void add_document(const RawDocument& document);

  std::size_t document_count() const noexcept { return doc_ids_.size(); }
  std::size_t vocabulary_size() const noexcept { return postings_.size(); }
  const std::vector<std::string>& document_ids() const noexcept { return doc_ids_; }
  std::vector<std::string> vocabulary() const;
  const std::map<std::string, std::vector<Posting>>& postings() const noexcept {
    return postings_;
  }
  const TokenizerConfig& tokenizer() const noexcept { return config_; }
  OmegaMode omega_mode() const noexcept { return omega_mode_; }

  std::uint64_t omega_cardinality() const;
  std::uint64_t psi() const noexcept { return psi_; }

  Term term(std::string_view raw) const { return Term::make(raw, config_); }

  // Sorted ids (indices into document_ids()) of documents containing the term.
  std::vector<std::uint32_t> documents_with(const Term& x) const;

  std::uint64_t singleton_count(const Term& x) const;
  std::uint64_t doubleton_count(const Term& x, const Term& y) const;

  // Event probabilities over |Omega|.
  double probability(const Term& x) const;
  double probability(const Term& x, const Term& y) const;

  // Counts normalized by Psi instead of |Omega|.
  double psi_normalized(const Term& x) const;
  double psi_normalized(const Term& x, const Term& y) const;

  // Versioned single-file persistence. Output is deterministic.
  void save(std::ostream& out) const;
  static CorpusIndex load(std::istream& in);

 private:
  CorpusIndex() = default;

  TokenizerConfig config_;
  OmegaMode omega_mode_ = OmegaMode::kTermOccurrences;
  std::vector<std::string> doc_ids_;
  std::map<std::string, std::vector<Posting>> postings_;
  std::uint64_t term_occurrences_ = 0;  // sum of distinct terms per document
  std::uint64_t psi_ = 0;
};

inline constexpr std::string_view kIndexMagic = "KCSIM-INDEX";
inline constexpr int kIndexVersion = 1;

// Corpus readers: a directory of plain-text files (sorted by file name, id =
// file stem) or a JSON-lines file with `id` and `text` fields.
std::vector<RawDocument> read_corpus(const std::filesystem::path& path);

// Static hit-count table standing in for search-engine results.
class HitTable {
 public:
  struct Row {
    std::string term_x;
    std::string term_y;
    std::uint64_t f_x = 0;
    std::uint64_t f_y = 0;
    std::uint64_t f_xy = 0;
  };

  // CSV with header `term_x,term_y,f_x,f_y,f_xy` and an optional `#N=<int>`
  // line anywhere. Rows with f_xy > min(f_x, f_y) are kept and noted in
  // warnings(); duplicate unordered pairs are malformed input.
  static HitTable parse(std::string_view csv);
  static HitTable load(const std::filesystem::path& path);

  const std::vector<Row>& rows() const noexcept { return rows_; }
  const std::optional<std::uint64_t>& n_total() const noexcept { return n_total_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  // Unordered lookup; (y, x) returns the row with f_x and f_y swapped.
  // Throws kNotFound when the pair is absent.
  HitCounts lookup(std::string_view x, std::string_view y) const;

 private:
  std::vector<Row> rows_;
  std::optional<std::uint64_t> n_total_;
  std::vector<std::string> warnings_;
  std::map<std::pair<std::string, std::string>, std::size_t> by_pair_;
};

// Table keys: trimmed, ASCII-lowercased, inner whitespace collapsed.
std::string normalize_table_term(std::string_view raw);

// Source of hit counts for term pairs.
class HitProvider {
 public:
  virtual ~HitProvider() = default;
  virtual HitCounts hit_counts(std::string_view x, std::string_view y) const = 0;
  virtual std::string describe() const = 0;
};

class IndexProvider final : public HitProvider {
 public:
  explicit IndexProvider(const CorpusIndex& index) : index_(index) {}
  // (singleton(x), singleton(y), doubleton(x,y), N = document count).
  HitCounts hit_counts(std::string_view x, std::string_view y) const override;
  std::string describe() const override { return "index"; }

 private:
  const CorpusIndex& index_;
};

class TableProvider final : public HitProvider {
 public:
  explicit TableProvider(const HitTable& table) : table_(table) {}
  HitCounts hit_counts(std::string_view x, std::string_view y) const override {
    return table_.lookup(x, y);
  }
  std::string describe() const override { return "table"; }

 private:
  const HitTable& table_;
};

inline HitCounts hit_counts(const HitProvider& provider, std::string_view x,
                            std::string_view y) {
  return provider.hit_counts(x, y);
}

}  // namespace kcsim
