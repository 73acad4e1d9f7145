//==============================================================================
//  cli.hpp
//
//  Command-line front end.  Six subcommands (exponents, verify-resolvent,
//  stationary, evolve, orthogonality, reconstruct) share a common shape:
//
//    * parameters come from a flat key=value config file (--config) merged
//      with a handful of command-line flags (flags win); unknown config keys
//      are a hard error and nothing is written,
//    * every run is deterministic given (--seed, config): randomness is
//      counter-based, CSV floats are printed with 17 significant digits,
//    * artifacts land in --out together with manifest.csv listing each file
//      with the subcommand, seed, the resolved parameter string, and an
//      FNV-1a 64-bit hash of its bytes, so byte-identical reruns are checkable
//      from the manifest alone.
//
//  The pieces (config parsing, CSV formatting, hashing) are exposed so tests
//  can drive run_cli in-process and inspect artifacts.
//==============================================================================
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace schrec::cli {

// Flat key=value store.  Lines are trimmed; blank lines and lines starting
// with '#' are ignored; everything before the first '=' is the key.
struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    // Comma-separated integer list ("4,8,16,32").
    std::vector<int> get_int_list(const std::string& key,
                                  const std::vector<int>& fallback) const;
};

// Throws std::runtime_error with a line-numbered message on malformed input.
Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

// Throws listing every key of cfg absent from `allowed`.
void require_known_keys(const Config& cfg, const std::vector<std::string>& allowed,
                        const std::string& subcommand);

// printf "%.17g": shortest round-trip decimal for every double.
std::string format_g17(double v);

// FNV-1a, 64-bit (offset 14695981039346656037, prime 1099511628211).
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

// Entry point used by main() and by the test harness.  Returns the process
// exit code: 0 on success, nonzero on usage errors, config errors, or failed
// built-in verification checks.
int run_cli(int argc, const char* const* argv);

}  // namespace schrec::cli
