#pragma once

// Output plumbing: shortest round-trip number formatting, atomic file
// writes and the run manifest written next to every artifact.

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace pdem::cli {

inline std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

/// Writes to a sibling temporary and renames over the target, so readers
/// never observe a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

/// Files are staged in memory and committed together, so a failing
/// command leaves nothing behind.
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first.string());
    return out;
  }

  void commit() const {
    for (const auto& [path, content] : files_) write_atomic(path, content);
  }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string tool_version;
  std::string digits;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  std::string invocation;

  void set(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }

  std::string render() const {
    std::string s;
    s += "command=" + command + "\n";
    s += "tool=pdem-wigner " + tool_version + "\n";
    s += "digits=" + digits + "\n";
    for (const auto& [k, v] : parameters) s += "param." + k + "=" + v + "\n";
    s += "invocation=" + invocation + "\n";
    for (const auto& o : outputs) s += "output=" + o + "\n";
    s += "wall_seconds=" + format_double(wall_seconds) + "\n";
    return s;
  }
};

inline std::filesystem::path manifest_path_for(const std::filesystem::path& primary) {
  auto p = primary;
  p += ".manifest.txt";
  return p;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace pdem::cli
