#pragma once

// Nibble-key compression: every run of four binary digits is replaced by a key
// symbol, and the compressed form is the symbol stream plus the key table
// that has to travel with it. Costs are 1 bit per emitted symbol and 4 bits
// per emitted dictionary entry.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kcsim {

inline constexpr std::size_t kSymbolCostBits = 1;
inline constexpr std::size_t kEntryCostBits = 4;

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  // ASCII '0'/'1'; whitespace is ignored, anything else is malformed input.
  static BitString parse(std::string_view text);
  // 8 bits per byte, most significant bit first.
  static BitString from_bytes(std::span<const std::uint8_t> bytes);
  static BitString from_nibbles(std::span<const std::uint8_t> nibbles);

  std::size_t length() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  // Throws kMalformedInput unless length() % 4 == 0.
  std::vector<std::uint8_t> nibbles() const;

  // Groups of four separated by single spaces when the length allows it.
  std::string to_text() const;

  BitString concat(const BitString& other) const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;  // each element 0 or 1
};

struct KeyEntry {
  std::string symbol;
  std::uint8_t nibble = 0;

  friend bool operator==(const KeyEntry&, const KeyEntry&) = default;
};

// Ordered key table. Symbols are unique; nibble values need not be (the
// printed table for one of the reference strings maps two symbols to 1001).
class KeyDictionary {
 public:
  KeyDictionary() = default;

  // Text format: one `<symbol>=<4 binary digits>` per line. Blank lines and
  // lines starting with '#' are skipped.
  static KeyDictionary parse(std::string_view text);

  void add(std::string symbol, std::uint8_t nibble);

  const std::vector<KeyEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // First entry carrying the value, if any.
  const KeyEntry* find_by_value(std::uint8_t nibble) const;
  const KeyEntry* find_by_symbol(std::string_view symbol) const;
  bool has_unique_values() const;

  std::string to_text() const;

  friend bool operator==(const KeyDictionary&, const KeyDictionary&) = default;

 private:
  std::vector<KeyEntry> entries_;
};

struct CompressedForm {
  std::vector<std::string> symbol_stream;
  KeyDictionary emitted_dictionary;
  std::size_t compressed_length_bits = 0;
  std::size_t source_length_bits = 0;

  // Table-style rendering: `k1k2k1 + "k1=0100 k2=1101"`.
  std::string to_text() const;
};

// How a conditioning dictionary decides that a key of x is already known.
enum class KeySharing {
  kByValue,   // a nibble is shared when its value occurs in the dictionary
  kBySymbol,  // x's auto-named key is shared when its symbol occurs there
};

// Scans nibbles left to right. Without a preset every distinct nibble gets a
// new key k1, k2, ... in order of first appearance and all of them are
// emitted. With a preset (unique values required) the preset keys are
// presumed known to the decoder: they are used in the stream but not emitted.
CompressedForm compress(const BitString& w);
CompressedForm compress(const BitString& w, const KeyDictionary& preset);

// C(x|y): compress x with y's keys available for free.
CompressedForm compress_conditional(const BitString& x,
                                    const KeyDictionary& y_keys,
                                    KeySharing sharing = KeySharing::kByValue);

// Uses `table` as w's own key column: every entry of it is emitted, nibbles
// it does not cover get auto keys appended. This reproduces key tables that
// were written down by hand, duplicates included.
CompressedForm compress_declared(const BitString& w, const KeyDictionary& table);

// Key table produced by compress(w) without a preset.
KeyDictionary keys_of(const BitString& w);

// Inverse of compress for forms whose dictionary covers every symbol.
BitString decompress(std::span<const std::string> symbol_stream,
                     const KeyDictionary& dictionary);

struct ComplexityScore {
  double value = 0.0;
  double q_overhead_bits = 0.0;
};

// K_C(w) = |C(w)| / |w| + q / |w|. q is the program-length overhead in bits
// and defaults to 0.
ComplexityScore approx_complexity(const CompressedForm& form,
                                  double q_overhead_bits = 0.0);
ComplexityScore approx_complexity(const BitString& w,
                                  double q_overhead_bits = 0.0);
ComplexityScore approx_complexity(const BitString& w,
                                  const KeyDictionary& conditional_on,
                                  KeySharing sharing = KeySharing::kByValue,
                                  double q_overhead_bits = 0.0);

// I_C(y:x) = K_C(x) - K_C(x | keys(y)). Computed from the bit difference so
// equal-length ratios subtract exactly.
double shared_information(const BitString& x, const KeyDictionary& y_keys,
                          KeySharing sharing = KeySharing::kByValue);
double shared_information(const BitString& x, const BitString& y,
                          KeySharing sharing = KeySharing::kByValue);

// Generic contract consumed by the compression distances.
class Compressor {
 public:
  virtual ~Compressor() = default;
  virtual std::size_t length_bits(const BitString& x) const = 0;
  virtual std::size_t conditional_length_bits(const BitString& x,
                                              const BitString& y) const = 0;
};

class NibbleKeyCompressor final : public Compressor {
 public:
  explicit NibbleKeyCompressor(KeySharing sharing = KeySharing::kByValue)
      : sharing_(sharing) {}

  std::size_t length_bits(const BitString& x) const override;
  std::size_t conditional_length_bits(const BitString& x,
                                      const BitString& y) const override;

 private:
  KeySharing sharing_;
};

}  // namespace kcsim
