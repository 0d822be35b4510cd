#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lrf::cli {

/// Flat key-value experiment configuration with [section] grouping.
/// Keys are stored as "section.key" ("" section for the preamble).
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<long> get_ints(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

struct Violation {
  std::string precondition;  // the module precondition breached
};

/// Empty list iff run() would start.
std::vector<Violation> validate(const Config& config);

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int workers = 0;  // 0 = hardware
  bool json_mirror = false;
};

struct RunManifest {
  std::string experiment;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;  // path, checksum
};

/// Executes the configured experiment; throws on validation or runtime
/// failure (partial outputs are removed). Writes <out>/manifest.json.
RunManifest run(const Config& config, const RunOptions& options);

}  // namespace lrf::cli
