#include "lrf/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace lrf {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : fp_(std::fopen(path.c_str(), "wb")), columns_(columns.size()) {
  if (!fp_) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(static_cast<std::FILE*>(fp_), "%s%s", i ? "," : "", columns[i].c_str());
  std::fprintf(static_cast<std::FILE*>(fp_), "\n");
}

CsvWriter::~CsvWriter() {
  if (fp_) std::fclose(static_cast<std::FILE*>(fp_));
}

void CsvWriter::row(const std::vector<CsvValue>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  std::FILE* fp = static_cast<std::FILE*>(fp_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) std::fputc(',', fp);
    const CsvValue& v = values[i];
    switch (v.kind) {
      case CsvValue::Kind::real:
        std::fprintf(fp, "%.17g", v.real);
        break;
      case CsvValue::Kind::integer:
        std::fprintf(fp, "%lld", static_cast<long long>(v.integer));
        break;
      case CsvValue::Kind::text:
        std::fprintf(fp, "%s", v.text.c_str());
        break;
    }
  }
  std::fputc('\n', fp);
}

void CsvWriter::close() {
  if (fp_) {
    std::fclose(static_cast<std::FILE*>(fp_));
    fp_ = nullptr;
  }
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  unsigned char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, fp)) > 0) {
    for (std::size_t i = 0; i < got; ++i) {
      h ^= buf[i];
      h *= 0x100000001b3ULL;
    }
  }
  std::fclose(fp);
  return h;
}

}  // namespace lrf
