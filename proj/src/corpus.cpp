#include "kcsim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kcsim/error.hpp"
#include "kcsim/text.hpp"

namespace kcsim {
namespace {

using json = nlohmann::json;

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

const CorpusIndex::Posting* find_posting(
    const std::vector<CorpusIndex::Posting>& list, std::uint32_t doc) {
  const auto it = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const CorpusIndex::Posting& p, std::uint32_t d) { return p.doc < d; });
  return it != list.end() && it->doc == doc ? &*it : nullptr;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
  const auto text = trim(field);
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kMalformedInput,
                "line " + std::to_string(line_no) + ": count '" +
                    std::string(text) + "' is not a plain decimal integer");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string TokenizerConfig::describe() const {
  return std::string("whitespace") + (case_fold ? "+casefold" : "") +
         (strip_punctuation ? "+strip-punct" : "");
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      flush();
      continue;
    }
    if (c < 0x80) {
      if (config.strip_punctuation && std::ispunct(c)) continue;
      current.push_back(config.case_fold ? static_cast<char>(std::tolower(c)) : ch);
    } else {
      current.push_back(ch);  // UTF-8 continuation/lead bytes pass through
    }
  }
  flush();
  return tokens;
}

Term Term::make(std::string_view raw, const TokenizerConfig& config) {
  Term term;
  term.tokens_ = tokenize(raw, config);
  if (term.tokens_.empty()) {
    throw Error(ErrorKind::kMalformedInput,
                "term '" + std::string(raw) + "' is empty after normalization");
  }
  for (const auto& token : term.tokens_) {
    if (!term.text_.empty()) term.text_.push_back(' ');
    term.text_ += token;
  }
  return term;
}

const char* to_string(OmegaMode mode) {
  switch (mode) {
    case OmegaMode::kTermOccurrences: return "term-occurrences";
    case OmegaMode::kVocabularySize: return "vocabulary-size";
    case OmegaMode::kDocumentCount: return "document-count";
  }
  return "unknown";
}

OmegaMode omega_mode_from_string(std::string_view name) {
  for (const auto mode : {OmegaMode::kTermOccurrences, OmegaMode::kVocabularySize,
                          OmegaMode::kDocumentCount}) {
    if (name == to_string(mode)) return mode;
  }
  throw Error(ErrorKind::kMalformedInput, "unknown omega mode " + std::string(name));
}

CorpusIndex CorpusIndex::build(std::span<const RawDocument> documents,
                               const TokenizerConfig& config,
                               OmegaMode omega_mode) {
  if (documents.empty()) {
    throw Error(ErrorKind::kMalformedInput, "corpus has no documents");
  }
  CorpusIndex index;
  index.config_ = config;
  index.omega_mode_ = omega_mode;
  for (const auto& doc : documents) index.add_document(doc);
  return index;
}

void CorpusIndex::add_document(const RawDocument& document) {
  if (std::find(doc_ids_.begin(), doc_ids_.end(), document.id) != doc_ids_.end()) {
    throw Error(ErrorKind::kMalformedInput, "duplicate document id " + document.id);
  }
  const auto doc = static_cast<std::uint32_t>(doc_ids_.size());
  doc_ids_.push_back(document.id);

  const auto tokens = tokenize(document.text, config_);
  std::map<std::string, std::vector<std::uint32_t>> positions;
  for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
    positions[tokens[pos]].push_back(pos);
  }
  for (auto& [token, where] : positions) {
    postings_[token].push_back({doc, std::move(where)});
  }
  const std::uint64_t distinct = positions.size();
  term_occurrences_ += distinct;
  // Every unordered pair of distinct terms co-occurs in this document once.
  psi_ += distinct > 1 ? distinct * (distinct - 1) / 2 : 0;
}

std::vector<std::string> CorpusIndex::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(postings_.size());
  for (const auto& [token, unused] : postings_) out.push_back(token);
  return out;
}

std::uint64_t CorpusIndex::omega_cardinality() const {
  switch (omega_mode_) {
    case OmegaMode::kTermOccurrences: return term_occurrences_;
    case OmegaMode::kVocabularySize: return postings_.size();
    case OmegaMode::kDocumentCount: return doc_ids_.size();
  }
  return 0;
}

std::vector<std::uint32_t> CorpusIndex::documents_with(const Term& x) const {
  const auto& tokens = x.tokens();
  const auto first = postings_.find(tokens.front());
  if (first == postings_.end()) return {};

  std::vector<const std::vector<Posting>*> rest;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto it = postings_.find(tokens[i]);
    if (it == postings_.end()) return {};
    rest.push_back(&it->second);
  }

  std::vector<std::uint32_t> docs;
  for (const auto& posting : first->second) {
    if (rest.empty()) {
      docs.push_back(posting.doc);
      continue;
    }
    std::vector<const Posting*> others;
    for (const auto* list : rest) {
      const Posting* p = find_posting(*list, posting.doc);
      if (p == nullptr) break;
      others.push_back(p);
    }
    if (others.size() != rest.size()) continue;
    const bool found = std::any_of(
        posting.positions.begin(), posting.positions.end(), [&](std::uint32_t start) {
          for (std::size_t i = 0; i < others.size(); ++i) {
            const auto& pos = others[i]->positions;
            if (!std::binary_search(pos.begin(), pos.end(),
                                    start + static_cast<std::uint32_t>(i + 1))) {
              return false;
            }
          }
          return true;
        });
    if (found) docs.push_back(posting.doc);
  }
  return docs;
}

std::uint64_t CorpusIndex::singleton_count(const Term& x) const {
  return documents_with(x).size();
}

std::uint64_t CorpusIndex::doubleton_count(const Term& x, const Term& y) const {
  return intersect(documents_with(x), documents_with(y)).size();
}

double CorpusIndex::probability(const Term& x) const {
  const auto omega = omega_cardinality();
  if (omega == 0) throw Error(ErrorKind::kDivisionDegenerate, "|Omega| is zero");
  return static_cast<double>(singleton_count(x)) / static_cast<double>(omega);
}

double CorpusIndex::probability(const Term& x, const Term& y) const {
  const auto omega = omega_cardinality();
  if (omega == 0) throw Error(ErrorKind::kDivisionDegenerate, "|Omega| is zero");
  return static_cast<double>(doubleton_count(x, y)) / static_cast<double>(omega);
}

double CorpusIndex::psi_normalized(const Term& x) const {
  if (psi_ == 0) throw Error(ErrorKind::kDivisionDegenerate, "Psi is zero");
  return static_cast<double>(singleton_count(x)) / static_cast<double>(psi_);
}

double CorpusIndex::psi_normalized(const Term& x, const Term& y) const {
  if (psi_ == 0) throw Error(ErrorKind::kDivisionDegenerate, "Psi is zero");
  return static_cast<double>(doubleton_count(x, y)) / static_cast<double>(psi_);
}

void CorpusIndex::save(std::ostream& out) const {
  json postings = json::object();
  for (const auto& [token, list] : postings_) {
    json entries = json::array();
    for (const auto& p : list) entries.push_back({p.doc, p.positions});
    postings[token] = std::move(entries);
  }
  const json doc = {
      {"version", kIndexVersion},
      {"tokenizer",
       {{"case_fold", config_.case_fold},
        {"strip_punctuation", config_.strip_punctuation},
        {"description", config_.describe()}}},
      {"omega_mode", to_string(omega_mode_)},
      {"documents", doc_ids_},
      {"vocabulary_size", postings_.size()},
      {"term_occurrences", term_occurrences_},
      {"omega_cardinality", omega_cardinality()},
      {"psi", psi_},
      {"postings", std::move(postings)},
  };
  out << kIndexMagic << ' ' << kIndexVersion << '\n' << doc.dump(1) << '\n';
}

CorpusIndex CorpusIndex::load(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != std::string(kIndexMagic) + " " + std::to_string(kIndexVersion)) {
    throw Error(ErrorKind::kMalformedInput, "not a kcsim index (bad magic header)");
  }
  json doc;
  try {
    in >> doc;
    CorpusIndex index;
    index.config_.case_fold = doc.at("tokenizer").at("case_fold").get<bool>();
    index.config_.strip_punctuation =
        doc.at("tokenizer").at("strip_punctuation").get<bool>();
    index.omega_mode_ = omega_mode_from_string(doc.at("omega_mode").get<std::string>());
    index.doc_ids_ = doc.at("documents").get<std::vector<std::string>>();
    index.term_occurrences_ = doc.at("term_occurrences").get<std::uint64_t>();
    index.psi_ = doc.at("psi").get<std::uint64_t>();
    for (const auto& [token, entries] : doc.at("postings").items()) {
      auto& list = index.postings_[token];
      for (const auto& entry : entries) {
        const auto d = entry.at(0).get<std::uint32_t>();
        if (d >= index.doc_ids_.size()) {
          throw Error(ErrorKind::kMalformedInput, "posting refers to unknown document");
        }
        list.push_back({d, entry.at(1).get<std::vector<std::uint32_t>>()});
      }
    }
    return index;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, std::string("corrupt index: ") + e.what());
  }
}

std::vector<RawDocument> read_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorKind::kIo, "cannot list " + path.string());
    std::sort(files.begin(), files.end());
    std::vector<RawDocument> docs;
    for (const auto& file : files) {
      docs.push_back({file.stem().string(), read_file(file)});
    }
    return docs;
  }
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorKind::kIo, "cannot read corpus at " + path.string());
  }

  std::vector<RawDocument> docs;
  std::size_t line_no = 0;
  for (const auto& raw : split(read_file(path), '\n')) {
    ++line_no;
    if (trim(raw).empty()) continue;
    try {
      const auto obj = json::parse(raw);
      const auto& id = obj.at("id");
      docs.push_back({id.is_string() ? id.get<std::string>() : id.dump(),
                      obj.at("text").get<std::string>()});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kMalformedInput,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::string normalize_table_term(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (const char ch : trim(raw)) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
  return out;
}

HitTable HitTable::parse(std::string_view csv) {
  HitTable table;
  bool seen_header = false;
  std::size_t line_no = 0;
  for (const auto& raw : split(csv, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.substr(0, 3) == "#N=") {
        table.n_total_ = parse_count(line.substr(3), line_no);
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (!seen_header) {
      const std::vector<std::string> expected = {"term_x", "term_y", "f_x", "f_y",
                                                 "f_xy"};
      std::vector<std::string> got;
      for (const auto& f : fields) got.emplace_back(trim(f));
      if (got != expected) {
        throw Error(ErrorKind::kMalformedInput,
                    "hit table header must be term_x,term_y,f_x,f_y,f_xy");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != 5) {
      throw Error(ErrorKind::kMalformedInput,
                  "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    Row row{normalize_table_term(fields[0]), normalize_table_term(fields[1]),
            parse_count(fields[2], line_no), parse_count(fields[3], line_no),
            parse_count(fields[4], line_no)};
    if (row.term_x.empty() || row.term_y.empty()) {
      throw Error(ErrorKind::kMalformedInput,
                  "line " + std::to_string(line_no) + ": empty term");
    }
    auto key = std::minmax(row.term_x, row.term_y);
    if (table.by_pair_.count({key.first, key.second}) != 0) {
      throw Error(ErrorKind::kMalformedInput,
                  "line " + std::to_string(line_no) + ": duplicate pair (" +
                      row.term_x + ", " + row.term_y + ")");
    }
    if (row.f_xy > std::min(row.f_x, row.f_y)) {
      table.warnings_.push_back("line " + std::to_string(line_no) + ": f_xy " +
                                std::to_string(row.f_xy) +
                                " exceeds min(f_x, f_y); kept as given");
    }
    table.by_pair_[{key.first, key.second}] = table.rows_.size();
    table.rows_.push_back(std::move(row));
  }
  if (!seen_header) {
    throw Error(ErrorKind::kMalformedInput, "hit table has no header line");
  }
  if (table.n_total_) {
    for (const auto& row : table.rows_) {
      if (*table.n_total_ < std::max(row.f_x, row.f_y)) {
        table.warnings_.push_back("N is smaller than a hit count for (" +
                                  row.term_x + ", " + row.term_y + ")");
      }
    }
  }
  return table;
}

HitTable HitTable::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

HitCounts HitTable::lookup(std::string_view x, std::string_view y) const {
  const auto nx = normalize_table_term(x);
  const auto ny = normalize_table_term(y);
  const auto key = std::minmax(nx, ny);
  const auto it = by_pair_.find({key.first, key.second});
  if (it == by_pair_.end()) {
    throw Error(ErrorKind::kNotFound, "pair (" + nx + ", " + ny + ") not in hit table");
  }
  const Row& row = rows_[it->second];
  HitCounts counts{row.f_x, row.f_y, row.f_xy, n_total_};
  return row.term_x == nx ? counts : counts.swapped();
}

HitCounts IndexProvider::hit_counts(std::string_view x, std::string_view y) const {
  const Term tx = index_.term(x);
  const Term ty = index_.term(y);
  const auto dx = index_.documents_with(tx);
  const auto dy = index_.documents_with(ty);
  return {dx.size(), dy.size(), intersect(dx, dy).size(), index_.document_count()};
}

}  // namespace kcsim
