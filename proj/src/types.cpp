#include "burstnet/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateSynapse: return "DuplicateSynapse";
        case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
        case ErrorCode::InvalidWeight: return "InvalidWeight";
        case ErrorCode::MissingRegion: return "MissingRegion";
        case ErrorCode::DuplicateRegion: return "DuplicateRegion";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::InvalidApicalSource: return "InvalidApicalSource";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidStimulus: return "InvalidStimulus";
        case ErrorCode::PhaseMissing: return "PhaseMissing";
        case ErrorCode::EmptyCue: return "EmptyCue";
        case ErrorCode::ZeroDelta: return "ZeroDelta";
        case ErrorCode::ZeroValence: return "ZeroValence";
        case ErrorCode::EmptyStore: return "EmptyStore";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::SnapshotMissing: return "SnapshotMissing";
        case ErrorCode::Divergence: return "Divergence";
        case ErrorCode::UnknownSeries: return "UnknownSeries";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::string_view to_string(ModulatorKind kind) noexcept {
    switch (kind) {
        case ModulatorKind::DA: return "DA";
        case ModulatorKind::HT5: return "5-HT";
        case ModulatorKind::NA: return "NA";
        case ModulatorKind::ACh: return "ACh";
    }
    return "?";
}

bool parse_modulator(std::string_view text, ModulatorKind& out) noexcept {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "da") out = ModulatorKind::DA;
    else if (lower == "5-ht" || lower == "ht5" || lower == "5ht") out = ModulatorKind::HT5;
    else if (lower == "na") out = ModulatorKind::NA;
    else if (lower == "ach") out = ModulatorKind::ACh;
    else return false;
    return true;
}

StateKey state_key(const NeuronSet& members) {
    // FNV-1a over the little-endian bytes of the ascending ids.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (NeuronId id : members) {
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (id.value >> shift) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return StateKey{h};
}

std::string to_string(StateKey key) { return fmt::format("{:016x}", key.value); }

double jaccard(const NeuronSet& a, const NeuronSet& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++common; ++ia; ++ib; }
    }
    const std::size_t uni = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

NeuronSet set_union(const NeuronSet& a, const NeuronSet& b) {
    NeuronSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

namespace {

std::uint32_t parse_u32(std::string_view tok) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::ParseError, fmt::format("bad neuron id '{}'", tok));
    }
    return v;
}

}  // namespace

std::vector<NeuronId> parse_id_list(std::string_view text) {
    std::vector<NeuronId> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ',' || text[i] == ' ' || text[i] == '\t' ||
                                   text[i] == ';')) {
            ++i;
        }
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && text[j] != ',' && text[j] != ' ' && text[j] != '\t' &&
               text[j] != ';') {
            ++j;
        }
        std::string_view tok = text.substr(i, j - i);
        if (auto dash = tok.find('-'); dash != std::string_view::npos) {
            std::uint32_t lo = parse_u32(tok.substr(0, dash));
            std::uint32_t hi = parse_u32(tok.substr(dash + 1));
            if (hi < lo) throw Error(ErrorCode::ParseError, fmt::format("bad range '{}'", tok));
            for (std::uint32_t v = lo; v <= hi; ++v) out.emplace_back(v);
        } else {
            out.emplace_back(parse_u32(tok));
        }
        i = j;
    }
    return out;
}

std::string format_id_list(const NeuronSet& ids, char sep) {
    std::string out;
    for (NeuronId id : ids) {
        if (!out.empty()) out.push_back(sep);
        out += std::to_string(id.value);
    }
    return out;
}

}  // namespace burstnet
