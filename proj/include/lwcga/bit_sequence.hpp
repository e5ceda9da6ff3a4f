#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lwcga/error.hpp"

namespace lwcga {

/// Ordered binary symbols, one per byte (0 or 1) for cheap random access.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  static BitSequence from_string(std::string_view s) {
    std::vector<std::uint8_t> v;
    v.reserve(s.size());
    for (char c : s) {
      if (c == '0' || c == '1')
        v.push_back(static_cast<std::uint8_t>(c - '0'));
      else if (c != ' ' && c != '\n' && c != '\r' && c != '\t')
        throw ParseError(std::string("invalid bit character '") + c + "'");
    }
    return BitSequence(std::move(v));
  }

  /// MSB of the first byte is the first bit.
  static BitSequence from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits = SIZE_MAX) {
    nbits = std::min(nbits, bytes.size() * 8);
    std::vector<std::uint8_t> v(nbits);
    for (std::size_t i = 0; i < nbits; ++i) v[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return BitSequence(std::move(v));
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  void push_back(bool b) { bits_.push_back(b ? 1 : 0); }
  void append_word(std::uint64_t w, unsigned width) {
    for (unsigned i = width; i-- > 0;) bits_.push_back(static_cast<std::uint8_t>((w >> i) & 1));
  }

  /// X_i = 2*e_i - 1
  int pm1(std::size_t i) const { return 2 * bits_[i] - 1; }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    return out;
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
  }

  BitSequence slice(std::size_t begin, std::size_t len) const {
    return BitSequence(std::vector<std::uint8_t>(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                 bits_.begin() + static_cast<std::ptrdiff_t>(begin + len)));
  }

  friend bool operator==(const BitSequence&, const BitSequence&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class BitFileFormat { Raw, Ascii, Auto };

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// ASCII when the content is nothing but '0', '1' and whitespace.
inline BitFileFormat detect_bit_format(std::span<const std::uint8_t> content) {
  bool saw_bit = false;
  for (auto c : content) {
    if (c == '0' || c == '1')
      saw_bit = true;
    else if (c != ' ' && c != '\n' && c != '\r' && c != '\t')
      return BitFileFormat::Raw;
  }
  return saw_bit ? BitFileFormat::Ascii : BitFileFormat::Raw;
}

inline BitSequence read_bit_file(const std::string& path, BitFileFormat fmt = BitFileFormat::Auto) {
  auto content = read_file_bytes(path);
  if (fmt == BitFileFormat::Auto) fmt = detect_bit_format(content);
  if (fmt == BitFileFormat::Ascii)
    return BitSequence::from_string(std::string_view(reinterpret_cast<const char*>(content.data()), content.size()));
  return BitSequence::from_bytes(content);
}

inline void write_bit_file(const std::string& path, const BitSequence& bits, BitFileFormat fmt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  if (fmt == BitFileFormat::Ascii) {
    out << bits.to_string();
  } else {
    auto bytes = bits.to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error("short write to " + path);
}

}  // namespace lwcga
