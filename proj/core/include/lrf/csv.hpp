#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrf {

struct CsvValue {
  enum class Kind { real, integer, text };
  Kind kind;
  double real = 0.0;
  long long integer = 0;
  std::string text;

  CsvValue(double v) : kind(Kind::real), real(v) {}
  CsvValue(int v) : kind(Kind::integer), integer(v) {}
  CsvValue(long v) : kind(Kind::integer), integer(v) {}
  CsvValue(long long v) : kind(Kind::integer), integer(v) {}
  CsvValue(unsigned long long v) : kind(Kind::integer), integer(static_cast<long long>(v)) {}
  CsvValue(std::string v) : kind(Kind::text), text(std::move(v)) {}
  CsvValue(const char* v) : kind(Kind::text), text(v) {}
};

/// Deterministic CSV output: fixed column order, %.17g for reals.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<CsvValue>& values);
  void close();

 private:
  void* fp_;
  std::size_t columns_;
};

/// FNV-1a 64-bit checksum of a file's bytes.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace lrf
