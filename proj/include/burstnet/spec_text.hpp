#pragma once

// Line-oriented sectioned text shared by network specs and run configs:
//
//   # comment
//   [section]
//   key = value
//   token token token
//
// Blank lines and everything after '#' are ignored.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace burstnet {

struct TextLine {
    std::size_t number = 0;  // 1-based line in the source
    std::string text;        // trimmed, comment stripped
};

struct TextSection {
    std::string name;
    std::vector<TextLine> lines;
};

struct SectionedText {
    std::vector<TextSection> sections;

    const TextSection* find(std::string_view name) const;
};

/// Throws Error(ParseError) on content outside a section or a malformed header.
SectionedText parse_sectioned_text(std::string_view text);
SectionedText load_sectioned_text(const std::filesystem::path& path);

/// Splits "key = value". Returns false when the line has no '='.
bool split_key_value(const std::string& line, std::string& key, std::string& value);

std::vector<std::string> split_tokens(std::string_view line);

std::string read_file(const std::filesystem::path& path);

double parse_real(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
std::uint64_t parse_seed(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

}  // namespace burstnet
