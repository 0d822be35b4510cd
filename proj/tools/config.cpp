#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrf::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw std::runtime_error(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_real(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key + "' is not a real number: " + v);
  }
}

double Config::get_real(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key + "' is not an integer: " + v);
  }
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  return static_cast<std::uint64_t>(std::stoull(get_string(key)));
}

std::vector<double> Config::get_reals(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty())
    throw std::runtime_error(origin_ + ": key '" + key + "' holds no numbers");
  return out;
}

std::vector<long> Config::get_ints(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<long> out;
  long v;
  while (in >> v) out.push_back(v);
  if (out.empty())
    throw std::runtime_error(origin_ + ": key '" + key + "' holds no integers");
  return out;
}

}  // namespace lrf::cli
