#include "kcsim/compressor.hpp"

#include <array>

#include "kcsim/error.hpp"
#include "kcsim/text.hpp"

namespace kcsim {
namespace {

std::string nibble_text(std::uint8_t nibble) {
  std::string out(4, '0');
  for (int i = 0; i < 4; ++i) {
    if (nibble & (0x8 >> i)) out[i] = '1';
  }
  return out;
}

// Hands out k1, k2, ... skipping names that are already taken.
class KeyNamer {
 public:
  explicit KeyNamer(const KeyDictionary* reserved) : reserved_(reserved) {}

  std::string next() {
    while (true) {
      std::string name = "k" + std::to_string(++counter_);
      if (reserved_ == nullptr || reserved_->find_by_symbol(name) == nullptr) {
        return name;
      }
    }
  }

 private:
  const KeyDictionary* reserved_;
  int counter_ = 0;
};

std::size_t length_of(std::size_t symbols, std::size_t entries) {
  return symbols * kSymbolCostBits + entries * kEntryCostBits;
}

// Shared scan: nibbles found in `known` reuse its symbol, the rest get auto
// keys which are emitted.
CompressedForm scan(const BitString& w, const KeyDictionary* known) {
  const auto nibbles = w.nibbles();
  CompressedForm form;
  form.source_length_bits = w.length();
  form.symbol_stream.reserve(nibbles.size());

  std::array<int, 16> auto_index;
  auto_index.fill(-1);
  KeyNamer namer(known);
  for (const std::uint8_t nibble : nibbles) {
    if (known != nullptr) {
      if (const KeyEntry* hit = known->find_by_value(nibble)) {
        form.symbol_stream.push_back(hit->symbol);
        continue;
      }
    }
    if (auto_index[nibble] < 0) {
      auto_index[nibble] = static_cast<int>(form.emitted_dictionary.size());
      form.emitted_dictionary.add(namer.next(), nibble);
    }
    form.symbol_stream.push_back(
        form.emitted_dictionary.entries()[auto_index[nibble]].symbol);
  }
  form.compressed_length_bits =
      length_of(form.symbol_stream.size(), form.emitted_dictionary.size());
  return form;
}

}  // namespace

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (const auto b : bits_) {
    if (b > 1) throw Error(ErrorKind::kMalformedInput, "bit value must be 0 or 1");
  }
}

BitString BitString::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '0': bits.push_back(0); break;
      case '1': bits.push_back(1); break;
      case ' ': case '\t': case '\n': case '\r': case '\f': case '\v': break;
      default:
        throw Error(ErrorKind::kMalformedInput,
                    std::string("unexpected character '") + c + "' in bitstring");
    }
  }
  return BitString(std::move(bits));
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (const std::uint8_t byte : bytes) {
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1);
  }
  return BitString(std::move(bits));
}

BitString BitString::from_nibbles(std::span<const std::uint8_t> nibbles) {
  std::vector<std::uint8_t> bits;
  bits.reserve(nibbles.size() * 4);
  for (const std::uint8_t nibble : nibbles) {
    if (nibble > 15) throw Error(ErrorKind::kMalformedInput, "nibble out of range");
    for (int i = 3; i >= 0; --i) bits.push_back((nibble >> i) & 1);
  }
  return BitString(std::move(bits));
}

std::vector<std::uint8_t> BitString::nibbles() const {
  if (bits_.size() % 4 != 0) {
    throw Error(ErrorKind::kMalformedInput,
                "bitstring length " + std::to_string(bits_.size()) +
                    " is not a multiple of 4");
  }
  std::vector<std::uint8_t> out;
  out.reserve(bits_.size() / 4);
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    out.push_back(static_cast<std::uint8_t>(bits_[i] << 3 | bits_[i + 1] << 2 |
                                            bits_[i + 2] << 1 | bits_[i + 3]));
  }
  return out;
}

std::string BitString::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (i > 0 && i % 4 == 0 && bits_.size() % 4 == 0) out.push_back(' ');
    out.push_back(bits_[i] ? '1' : '0');
  }
  return out;
}

BitString BitString::concat(const BitString& other) const {
  std::vector<std::uint8_t> bits = bits_;
  bits.insert(bits.end(), other.bits_.begin(), other.bits_.end());
  return BitString(std::move(bits));
}

KeyDictionary KeyDictionary::parse(std::string_view text) {
  KeyDictionary dict;
  for (const auto& raw : split(text, '\n')) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kMalformedInput,
                  "key line without '=': " + std::string(line));
    }
    const auto symbol = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (symbol.empty() || value.size() != 4 ||
        value.find_first_not_of("01") != std::string_view::npos) {
      throw Error(ErrorKind::kMalformedInput,
                  "key line must be <symbol>=<4 binary digits>: " +
                      std::string(line));
    }
    std::uint8_t nibble = 0;
    for (const char c : value) nibble = static_cast<std::uint8_t>(nibble << 1 | (c - '0'));
    dict.add(std::string(symbol), nibble);
  }
  return dict;
}

void KeyDictionary::add(std::string symbol, std::uint8_t nibble) {
  if (nibble > 15) throw Error(ErrorKind::kMalformedInput, "nibble out of range");
  if (symbol.empty()) throw Error(ErrorKind::kMalformedInput, "empty key symbol");
  if (find_by_symbol(symbol) != nullptr) {
    throw Error(ErrorKind::kMalformedInput, "duplicate key symbol " + symbol);
  }
  entries_.push_back({std::move(symbol), nibble});
}

const KeyEntry* KeyDictionary::find_by_value(std::uint8_t nibble) const {
  for (const auto& entry : entries_) {
    if (entry.nibble == nibble) return &entry;
  }
  return nullptr;
}

const KeyEntry* KeyDictionary::find_by_symbol(std::string_view symbol) const {
  for (const auto& entry : entries_) {
    if (entry.symbol == symbol) return &entry;
  }
  return nullptr;
}

bool KeyDictionary::has_unique_values() const {
  std::array<bool, 16> seen{};
  for (const auto& entry : entries_) {
    if (seen[entry.nibble]) return false;
    seen[entry.nibble] = true;
  }
  return true;
}

std::string KeyDictionary::to_text() const {
  std::string out;
  for (const auto& entry : entries_) {
    out += entry.symbol + "=" + nibble_text(entry.nibble) + "\n";
  }
  return out;
}

std::string CompressedForm::to_text() const {
  std::string out;
  for (const auto& symbol : symbol_stream) out += symbol;
  out += " + \"";
  bool first = true;
  for (const auto& entry : emitted_dictionary.entries()) {
    if (!first) out += ' ';
    first = false;
    out += entry.symbol + "=" + nibble_text(entry.nibble);
  }
  out += "\"";
  return out;
}

CompressedForm compress(const BitString& w) { return scan(w, nullptr); }

CompressedForm compress(const BitString& w, const KeyDictionary& preset) {
  if (!preset.has_unique_values()) {
    throw Error(ErrorKind::kMalformedInput,
                "preset dictionary maps several symbols to one nibble value");
  }
  return scan(w, &preset);
}

CompressedForm compress_conditional(const BitString& x,
                                    const KeyDictionary& y_keys,
                                    KeySharing sharing) {
  if (sharing == KeySharing::kByValue) return scan(x, &y_keys);

  CompressedForm own = scan(x, nullptr);
  KeyDictionary emitted;
  for (const auto& entry : own.emitted_dictionary.entries()) {
    if (y_keys.find_by_symbol(entry.symbol) == nullptr) {
      emitted.add(entry.symbol, entry.nibble);
    }
  }
  own.emitted_dictionary = std::move(emitted);
  own.compressed_length_bits =
      length_of(own.symbol_stream.size(), own.emitted_dictionary.size());
  return own;
}

CompressedForm compress_declared(const BitString& w, const KeyDictionary& table) {
  CompressedForm form = scan(w, &table);
  KeyDictionary emitted = table;
  for (const auto& entry : form.emitted_dictionary.entries()) {
    emitted.add(entry.symbol, entry.nibble);
  }
  form.emitted_dictionary = std::move(emitted);
  form.compressed_length_bits =
      length_of(form.symbol_stream.size(), form.emitted_dictionary.size());
  return form;
}

KeyDictionary keys_of(const BitString& w) { return compress(w).emitted_dictionary; }

BitString decompress(std::span<const std::string> symbol_stream,
                     const KeyDictionary& dictionary) {
  std::vector<std::uint8_t> nibbles;
  nibbles.reserve(symbol_stream.size());
  for (const auto& symbol : symbol_stream) {
    const KeyEntry* entry = dictionary.find_by_symbol(symbol);
    if (entry == nullptr) {
      throw Error(ErrorKind::kNotFound, "symbol " + symbol + " not in dictionary");
    }
    nibbles.push_back(entry->nibble);
  }
  return BitString::from_nibbles(nibbles);
}

ComplexityScore approx_complexity(const CompressedForm& form,
                                  double q_overhead_bits) {
  if (form.source_length_bits == 0) {
    throw Error(ErrorKind::kMalformedInput, "empty bitstring");
  }
  const double length = static_cast<double>(form.source_length_bits);
  return {static_cast<double>(form.compressed_length_bits) / length +
              q_overhead_bits / length,
          q_overhead_bits};
}

ComplexityScore approx_complexity(const BitString& w, double q_overhead_bits) {
  if (w.empty()) throw Error(ErrorKind::kMalformedInput, "empty bitstring");
  return approx_complexity(compress(w), q_overhead_bits);
}

ComplexityScore approx_complexity(const BitString& w,
                                  const KeyDictionary& conditional_on,
                                  KeySharing sharing, double q_overhead_bits) {
  if (w.empty()) throw Error(ErrorKind::kMalformedInput, "empty bitstring");
  return approx_complexity(compress_conditional(w, conditional_on, sharing),
                           q_overhead_bits);
}

double shared_information(const BitString& x, const KeyDictionary& y_keys,
                          KeySharing sharing) {
  if (x.empty()) throw Error(ErrorKind::kMalformedInput, "empty bitstring");
  const auto plain = compress(x).compressed_length_bits;
  const auto given = compress_conditional(x, y_keys, sharing).compressed_length_bits;
  return (static_cast<double>(plain) - static_cast<double>(given)) /
         static_cast<double>(x.length());
}

double shared_information(const BitString& x, const BitString& y,
                          KeySharing sharing) {
  return shared_information(x, keys_of(y), sharing);
}

std::size_t NibbleKeyCompressor::length_bits(const BitString& x) const {
  return compress(x).compressed_length_bits;
}

std::size_t NibbleKeyCompressor::conditional_length_bits(const BitString& x,
                                                         const BitString& y) const {
  return compress_conditional(x, keys_of(y), sharing_).compressed_length_bits;
}

}  // namespace kcsim
