#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subexp {

/// Stable textual form for table cells: %.12g, enough digits to pin
/// regression values while staying readable.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// CSV with a leading `# config_hash=...` comment and a header row of
/// column names. Identical inputs produce byte-identical output.
void write_csv(std::ostream& os, const std::string& config_hash,
               std::span<const std::string> columns,
               const std::vector<std::vector<std::string>>& rows);

/// Sample input: one real per line; blank lines and '#' comments (full-line
/// or trailing) are ignored. Unparseable content is an input error naming
/// the line.
std::vector<double> read_sample_file(const std::string& path);

/// Minimal log-log line plot of gap vs N written as standalone SVG.
/// Nonpositive gaps are clamped to a floor one decade below the smallest
/// positive gap so they stay visible on the log axis.
void write_svg_loglog(std::ostream& os, const std::string& title,
                      std::span<const double> xs, std::span<const double> ys);

} // namespace subexp
