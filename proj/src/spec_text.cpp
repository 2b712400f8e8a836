#include "burstnet/spec_text.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

const TextSection* SectionedText::find(std::string_view name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

SectionedText parse_sectioned_text(std::string_view text) {
    SectionedText out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) {
            if (nl == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw Error(ErrorCode::ParseError,
                            fmt::format("line {}: malformed section header '{}'", line_no, line));
            }
            std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            for (const auto& s : out.sections) {
                if (s.name == name) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: section [{}] repeated", line_no, name));
                }
            }
            out.sections.push_back(TextSection{name, {}});
        } else {
            if (out.sections.empty()) {
                throw Error(ErrorCode::ParseError,
                            fmt::format("line {}: content before any section", line_no));
            }
            out.sections.back().lines.push_back(TextLine{line_no, std::move(line)});
        }
        if (nl == text.size()) break;
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SectionedText load_sectioned_text(const std::filesystem::path& path) {
    return parse_sectioned_text(read_file(path));
}

bool split_key_value(const std::string& line, std::string& key, std::string& value) {
    auto eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = trim(std::string_view(line).substr(0, eq));
    value = trim(std::string_view(line).substr(eq + 1));
    return !key.empty();
}

std::vector<std::string> split_tokens(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_real(std::string_view text, std::string_view what) {
    std::string s(text);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: expected a number, got '{}'", what, s));
    }
    return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
    std::string s(text);
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorCode::ParseError,
                    fmt::format("{}: expected an integer, got '{}'", what, s));
    }
    return v;
}

std::uint64_t parse_seed(std::string_view text, std::string_view what) {
    std::string s(text);
    errno = 0;
    char* end = nullptr;
    const bool digits = !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]));
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (!digits || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: expected a seed in [0, 2^64), got '{}'", what, s));
    }
    return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
    if (text == "on" || text == "true" || text == "yes" || text == "1") return true;
    if (text == "off" || text == "false" || text == "no" || text == "0") return false;
    throw Error(ErrorCode::ParseError, fmt::format("{}: expected on/off, got '{}'", what, text));
}

}  // namespace burstnet
