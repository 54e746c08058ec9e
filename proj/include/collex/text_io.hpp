#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "collex/context.hpp"
#include "collex/implication.hpp"

namespace collex {

// Whitespace-separated tokens; double quotes group, backslash escapes inside quotes.
std::vector<std::string> tokenize(std::string_view line, std::size_t line_number = 0);

// Strips a trailing '#' comment that is not inside quotes.
std::string_view strip_comment(std::string_view line);

std::string read_file(const std::filesystem::path& path);

/// Burmeister context format:
///
///   B
///   <optional name line>
///   <object count>
///   <attribute count>
///   <object names, one per line>
///   <attribute names, one per line>
///   <one row of 'X' / '.' per object>
///
/// Blank lines between sections are ignored.
FormalContext parse_burmeister(std::string_view text);
FormalContext load_burmeister(const std::filesystem::path& path);
std::string write_burmeister(const FormalContext& ctx);

Implication parse_implication(const Universe& universe, std::string_view line, std::size_t line_number = 0);
// One implication per line, `a b -> c d`, '#' comments, blank lines ignored.
ImplicationTheory parse_implications(const UniversePtr& universe, std::string_view text);

// `a b -> c d`; the conclusion is written without the premise.
std::string format_implication(const Universe& universe, const Implication& f);
std::string write_implications(const ImplicationTheory& theory);

}  // namespace collex
