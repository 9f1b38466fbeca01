#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "polyshannon/errors.hpp"

// Little-endian primitives for the binary container formats. Readers track the byte
// offset so malformed input can be reported precisely.
namespace polyshannon::bin {

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  void bytes(const void* data, std::size_t n);
  void magic(const char (&tag)[5]) { bytes(tag, 4); }
  void u32(std::uint32_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v);
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(const std::vector<double>& v);
  void str(const std::string& s);

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}
  void bytes(void* data, std::size_t n);
  void expect_magic(const char (&tag)[5]);
  std::uint32_t u32();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64();
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<double> f64s(std::size_t limit = std::size_t(1) << 28);
  std::string str(std::size_t limit = 1 << 20);
  std::size_t offset() const { return offset_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, offset_); }

 private:
  std::istream& is_;
  std::size_t offset_ = 0;
};

}  // namespace polyshannon::bin
