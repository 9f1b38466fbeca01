#include "polyshannon/binary_io.hpp"

namespace polyshannon::bin {

void Writer::bytes(const void* data, std::size_t n) {
  os_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void Writer::u32(std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  bytes(b, 4);
}

void Writer::u64(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  bytes(b, 8);
}

void Writer::f64s(const std::vector<double>& v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void Writer::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s.data(), s.size());
}

void Reader::bytes(void* data, std::size_t n) {
  is_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is_.gcount()) != n) fail("unexpected end of file");
  offset_ += n;
}

void Reader::expect_magic(const char (&tag)[5]) {
  const std::size_t at = offset_;
  char got[4];
  bytes(got, 4);
  if (std::memcmp(got, tag, 4) != 0) throw ParseError(std::string("bad magic, expected ") + tag, at);
}

std::uint32_t Reader::u32() {
  unsigned char b[4];
  bytes(b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t Reader::u64() {
  unsigned char b[8];
  bytes(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::vector<double> Reader::f64s(std::size_t limit) {
  const std::size_t at = offset_;
  const std::uint64_t n = u64();
  if (n > limit) throw ParseError("array length " + std::to_string(n) + " exceeds limit", at);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = f64();
  return v;
}

std::string Reader::str(std::size_t limit) {
  const std::size_t at = offset_;
  const std::uint32_t n = u32();
  if (n > limit) throw ParseError("string length exceeds limit", at);
  std::string s(n, '\0');
  bytes(s.data(), n);
  return s;
}

}  // namespace polyshannon::bin
