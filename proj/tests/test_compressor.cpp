#include <doctest.h>

#include <map>
#include <random>

#include "kcsim/compressor.hpp"
#include "kcsim/error.hpp"
#include "oracles.hpp"

using namespace kcsim;

namespace {

BitString fixture_bits(const std::string& name) {
  return BitString::parse(oracle::slurp(oracle::data_path("table1/" + name + ".bits")));
}

KeyDictionary fixture_keys(const std::string& name) {
  return KeyDictionary::parse(oracle::slurp(oracle::data_path("table1/" + name + ".keys")));
}

std::vector<std::string> emitted_symbols(const CompressedForm& form) {
  std::vector<std::string> out;
  for (const auto& e : form.emitted_dictionary.entries()) out.push_back(e.symbol);
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected kcsim::Error");
  return ErrorKind::kIo;
}

}  // namespace

TEST_CASE("s1 compresses to 34 bits with six keys") {
  const auto form = compress(fixture_bits("s1"));
  CHECK(form.compressed_length_bits == 34);
  CHECK(form.source_length_bits == 40);
  CHECK(form.emitted_dictionary == fixture_keys("s1"));
  CHECK(form.to_text() ==
        "k1k2k1k3k1k4k5k6k5k5 + \"k1=0100 k2=1101 k3=0001 k4=1000 k5=0101 k6=1010\"");
}

TEST_CASE("s2 compresses to 20 bits with three entries") {
  const auto form = compress(fixture_bits("s2"));
  CHECK(form.compressed_length_bits == 20);
  CHECK(form.emitted_dictionary.size() == 3);
}

TEST_CASE("sixteen zero nibbles cost 16 symbols plus one entry") {
  const auto form = compress(BitString(std::vector<std::uint8_t>(64, 0)));
  CHECK(form.compressed_length_bits == 20);
  CHECK(form.emitted_dictionary.size() == 1);
}

TEST_CASE("s3 under value-keyed auto mode") {
  // The printed key column for s3 has a duplicate value; auto mode only sees
  // three distinct nibbles.
  const auto form = compress(fixture_bits("s3"));
  CHECK(form.compressed_length_bits == 20);
  CHECK(approx_complexity(form).value == 0.625);
}

TEST_CASE("declared key table reproduces the printed s3 row") {
  const auto form = compress_declared(fixture_bits("s3"), fixture_keys("s3"));
  CHECK(form.compressed_length_bits == 24);
  CHECK(approx_complexity(form).value == 0.75);
}

TEST_CASE("conditional compression against s2 keys") {
  const auto form = compress_conditional(fixture_bits("s1"), fixture_keys("s2"));
  CHECK(form.compressed_length_bits == 30);
  CHECK(emitted_symbols(form) == std::vector<std::string>{"k2", "k3", "k4", "k5", "k6"});
  CHECK(approx_complexity(form).value == 0.75);
}

TEST_CASE("conditional compression against printed s3 keys") {
  const auto s1 = fixture_bits("s1");
  const auto s3_keys = fixture_keys("s3");
  const auto by_symbol = compress_conditional(s1, s3_keys, KeySharing::kBySymbol);
  CHECK(by_symbol.compressed_length_bits == 22);
  CHECK(emitted_symbols(by_symbol) == std::vector<std::string>{"k2", "k3", "k4"});
  CHECK(approx_complexity(by_symbol).value == 0.55);

  // By value only 0100 and 1010 are known, so 0101 must still be emitted.
  const auto by_value = compress_conditional(s1, s3_keys, KeySharing::kByValue);
  CHECK(by_value.compressed_length_bits == 26);
}

TEST_CASE("conditioning on its own keys leaves only the stream") {
  const auto s2 = fixture_bits("s2");
  const auto form = compress_conditional(s2, keys_of(s2));
  CHECK(form.emitted_dictionary.empty());
  CHECK(form.compressed_length_bits == 8);
  CHECK(approx_complexity(s2, keys_of(s2)).value == 0.25);
}

TEST_CASE("approximate complexity column") {
  CHECK(approx_complexity(fixture_bits("s1")).value == 0.85);
  CHECK(approx_complexity(fixture_bits("s2")).value == 0.625);
  CHECK(approx_complexity(fixture_bits("s1"), fixture_keys("s2")).value == 0.75);

  SUBCASE("q is amortized over the source length") {
    const auto k = approx_complexity(fixture_bits("s1"), 8.0);
    CHECK(k.value == doctest::Approx(0.85 + 8.0 / 40.0));
    CHECK(k.q_overhead_bits == 8.0);
  }
}

TEST_CASE("shared information") {
  const auto s1 = fixture_bits("s1");
  const auto s2 = fixture_bits("s2");
  CHECK(shared_information(s1, fixture_keys("s2")) == 0.10);
  CHECK(shared_information(s1, s2) == 0.10);
  CHECK(shared_information(s1, fixture_keys("s3"), KeySharing::kBySymbol) == 0.30);
  CHECK(shared_information(s2, s2) == 0.375);
}

TEST_CASE("malformed inputs") {
  CHECK(kind_of([] { compress(BitString::parse("010")); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { BitString::parse("01x0"); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { approx_complexity(BitString()); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { KeyDictionary::parse("k1=010"); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { KeyDictionary::parse("k1 0100"); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { KeyDictionary::parse("k1=0100\nk1=0101"); }) ==
        ErrorKind::kMalformedInput);
  // A preset must not map two symbols to one value.
  CHECK(kind_of([] {
          compress(BitString::parse("1001"), KeyDictionary::parse("a=1001\nb=1001"));
        }) == ErrorKind::kMalformedInput);
}

TEST_CASE("preset keys are used but not emitted") {
  const auto preset = KeyDictionary::parse("k1=0100\nk7=1001\nk8=1110");
  const auto form = compress(fixture_bits("s1"), preset);
  CHECK(form.compressed_length_bits == 30);
  CHECK(form.symbol_stream.front() == "k1");
}

TEST_CASE("raw bytes are read most significant bit first") {
  const std::uint8_t bytes[] = {0x4D, 0x41};
  const auto bits = BitString::from_bytes(bytes);
  CHECK(bits.to_text() == "0100 1101 0100 0001");
  CHECK(bits == BitString::parse("0100110101000001"));
}

TEST_CASE("decompress rejects unknown symbols") {
  const std::vector<std::string> stream = {"k1", "k9"};
  CHECK(kind_of([&] { decompress(stream, KeyDictionary::parse("k1=0000")); }) ==
        ErrorKind::kNotFound);
}

TEST_CASE("random strings: round trip, determinism, conditional bound, K range") {
  std::mt19937 rng(20111);
  std::uniform_int_distribution<int> length(1, 40);
  std::uniform_int_distribution<int> alphabet(1, 16);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = length(rng);
    std::uniform_int_distribution<int> nib(0, alphabet(rng) - 1);
    std::vector<std::uint8_t> nibbles(n);
    for (auto& x : nibbles) x = static_cast<std::uint8_t>(nib(rng));
    const auto w = BitString::from_nibbles(nibbles);

    const auto form = compress(w);
    CHECK(decompress(form.symbol_stream, form.emitted_dictionary) == w);

    const auto again = compress(w);
    CHECK(again.symbol_stream == form.symbol_stream);
    CHECK(again.emitted_dictionary == form.emitted_dictionary);

    std::vector<std::uint8_t> other(length(rng));
    for (auto& x : other) x = static_cast<std::uint8_t>(nib(rng));
    const auto y_keys = keys_of(BitString::from_nibbles(other));
    for (const auto sharing : {KeySharing::kByValue, KeySharing::kBySymbol}) {
      CHECK(compress_conditional(w, y_keys, sharing).compressed_length_bits <=
            form.compressed_length_bits);
    }

    const double k = approx_complexity(form).value;
    CHECK(k > 0.0);
    CHECK(k <= 1.5);
    CHECK(k <= 1.0 + 4.0 * 16.0 / static_cast<double>(w.length()));
  }
}

TEST_CASE("fewer distinct nibbles never compress longer (all 4-nibble strings)") {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> range_by_distinct;
  for (int v = 0; v < 65536; ++v) {
    const std::vector<int> nibbles = {(v >> 12) & 15, (v >> 8) & 15, (v >> 4) & 15, v & 15};
    const std::size_t distinct = std::set<int>(nibbles.begin(), nibbles.end()).size();
    const auto len = compress(BitString::parse(oracle::nibble_text(nibbles)))
                         .compressed_length_bits;
    auto [it, inserted] = range_by_distinct.try_emplace(distinct, len, len);
    it->second.first = std::min(it->second.first, len);
    it->second.second = std::max(it->second.second, len);
  }
  REQUIRE(range_by_distinct.size() == 4);
  for (auto it = range_by_distinct.begin(); std::next(it) != range_by_distinct.end(); ++it) {
    CHECK(it->second.second <= std::next(it)->second.first);
  }
}
