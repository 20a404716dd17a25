#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace codeprompt {

// Error raised by loaders, configuration and backends. Parsing never throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Replay lookup miss. Kept distinct so tests fail loudly instead of going live.
class FixtureMissingError : public Error {
 public:
  explicit FixtureMissingError(const std::string& what) : Error(what) {}
};

namespace util {

// ---------------------------------------------------------------------------
// Hashing. Both functions are bit-stable across platforms; every persistent
// key (cache keys, config hashes, manifest hashes) goes through sha256_hex.
// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data);

// ---------------------------------------------------------------------------
// Counter-based RNG. A stream is keyed by (seed, label); draws are a pure
// function of (key, counter), so adding new streams never perturbs existing
// ones and results are identical on every platform.
// ---------------------------------------------------------------------------

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream_label);

  std::uint64_t next();
  // Uniform draw in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Strings
// ---------------------------------------------------------------------------

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(std::span<const std::string> parts, std::string_view sep);
std::string replace_all(std::string_view s, std::string_view from, std::string_view to);
// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);
bool contains(std::string_view haystack, std::string_view needle);

// Canonical text form of a double for hashing/serialization ("%.10g").
std::string canonical_double(double v);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
std::optional<std::string> read_file_if_exists(const std::filesystem::path& path);
// Writes via a temp file in the same directory, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace util
}  // namespace codeprompt
