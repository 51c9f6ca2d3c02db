#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace gridmkt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Structured diagnostics. Every malformed input surfaces as one of these;
// solver outcome statuses (infeasible, failed_to_converge, ...) are values,
// never exceptions.
// ---------------------------------------------------------------------------
enum class ErrorKind {
  syntax,       // unparseable text (line/col populated when known)
  reference,    // dangling id (bus referenced but not defined)
  invariant,    // a domain-type invariant is violated
  island,       // in-service network is not a single island
  structural,   // numerical structure failure (singular reduced matrix, ...)
  io,           // filesystem / format problems
  config,       // bad run configuration
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, std::string where = {},
        int line = -1, int col = -1)
      : std::runtime_error(format(kind, message, where, line, col)),
        kind_(kind), where_(std::move(where)), line_(line), col_(col) {}

  ErrorKind kind() const { return kind_; }
  const std::string& where() const { return where_; }
  int line() const { return line_; }
  int col() const { return col_; }

private:
  static std::string format(ErrorKind kind, const std::string& message,
                            const std::string& where, int line, int col) {
    std::ostringstream os;
    switch (kind) {
      case ErrorKind::syntax: os << "syntax error"; break;
      case ErrorKind::reference: os << "referential error"; break;
      case ErrorKind::invariant: os << "invariant violation"; break;
      case ErrorKind::island: os << "island detected"; break;
      case ErrorKind::structural: os << "structural error"; break;
      case ErrorKind::io: os << "io error"; break;
      case ErrorKind::config: os << "config error"; break;
    }
    if (!where.empty()) os << " at " << where;
    if (line >= 0) {
      os << " (line " << line;
      if (col >= 0) os << ", column " << col;
      os << ")";
    }
    os << ": " << message;
    return os.str();
  }

  ErrorKind kind_;
  std::string where_;
  int line_;
  int col_;
};

// ---------------------------------------------------------------------------
// Hashing (input manifests, case hashes).
// ---------------------------------------------------------------------------
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 is the base generator; substream() derives an
// independent stream from (master seed, counter), so parallel draws never
// depend on scheduling order.
// ---------------------------------------------------------------------------
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  // standard normal, Box-Muller (two uniforms per call; no state cached so
  // draw sequences stay trivially reproducible)
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.2831853071795864769 * u2);
  }

private:
  std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t master_seed, std::uint64_t index) {
  SplitMix64 mix(master_seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  mix.next();
  return SplitMix64(mix.next());
}

// ---------------------------------------------------------------------------
// Number formatting: shortest decimal text that parses back to the same
// double. Used everywhere bytes must be reproducible (CSV, JSON, manifests).
// ---------------------------------------------------------------------------
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{}) {
    throw Error(ErrorKind::syntax, "not a number: '" + std::string(text) + "'", where);
  }
  return v;
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------
inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open file", path.string());
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// write-temp-then-rename so readers never observe a partial file
inline void atomic_write_file(const std::filesystem::path& path,
                              std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot create file", tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "write failed", tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Tiny fork-join helper: runs fn(i) for i in [0, n) on up to `jobs` threads.
// Work is partitioned by index, so results land in caller-owned slots and the
// outcome is independent of scheduling.
// ---------------------------------------------------------------------------
inline void parallel_for_index(std::size_t n, unsigned jobs,
                               const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// line/column of a byte offset in a text buffer (1-based)
inline std::pair<int, int> line_col_of_offset(std::string_view text,
                                              std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace gridmkt
