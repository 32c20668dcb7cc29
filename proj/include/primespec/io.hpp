#pragma once

#include <map>
#include <string>
#include <vector>

#include "primespec/sieve.hpp"
#include "primespec/types.hpp"

namespace primespec::io {

// Fixed 17-significant-digit representation (exact double round-trip).
std::string format_double(double v);

// Shortest representation that still round-trips exactly; used in header
// comments where readability matters.
std::string format_double_short(double v);

// Newline-delimited decimal values; metadata rides in '#' comments.
void write_prime_text(const std::string& path, const PrimeSequence& seq,
                      const std::vector<std::string>& comments = {});
PrimeSequence read_prime_text(const std::string& path);

// Fixed binary layout: u64le start_index, u64le count, u64le values.
void write_prime_binary(const std::string& path, const PrimeSequence& seq);
PrimeSequence read_prime_binary(const std::string& path);

// Text values at 17 significant digits, preceded by the header comment
// `# method=<name> rescaled=<bool> start_index=<k>`.
void write_unfolded(const std::string& path, const UnfoldedSequence& useq,
                    const std::vector<std::string>& comments = {});
UnfoldedSequence read_unfolded(const std::string& path);

// CSV with header row `L,value,stderr`.
void write_curve_csv(const std::string& path, const StatisticCurve& curve,
                     const std::vector<std::string>& comments = {});
StatisticCurve read_curve_csv(const std::string& path);

// CSV with header row `s_left,s_right,density`.
void write_histogram_csv(const std::string& path, const SpacingHistogram& hist,
                         const std::vector<std::string>& comments = {});

// Lines of `x<TAB>pi_x`. Entries are parsed but not verified here; call
// sieve::verify_checkpoints before trusting them.
std::vector<sieve::PiCheckpoint> read_checkpoints(const std::string& path);

std::string fit_to_json(const BRFit& fit);

// Line-oriented `key = value` configuration with '#' comments. Unknown keys
// are rejected.
struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
};

Config read_config(const std::string& path);

} // namespace primespec::io
