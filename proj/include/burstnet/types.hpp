#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace burstnet {

/// Dense neuron index, 0..N-1 within one Network.
struct NeuronId {
    std::uint32_t value = 0;

    constexpr NeuronId() = default;
    constexpr explicit NeuronId(std::uint32_t v) : value(v) {}

    constexpr std::size_t index() const { return value; }
    friend constexpr auto operator<=>(NeuronId, NeuronId) = default;
};

using NeuronSet = std::set<NeuronId>;

enum class ModulatorKind : std::uint8_t { DA = 0, HT5 = 1, NA = 2, ACh = 3 };

inline constexpr std::array<ModulatorKind, 4> kAllModulators{
    ModulatorKind::DA, ModulatorKind::HT5, ModulatorKind::NA, ModulatorKind::ACh};

std::string_view to_string(ModulatorKind kind) noexcept;
/// Accepts "DA", "5-HT"/"HT5", "NA", "ACh" (case-insensitive).
bool parse_modulator(std::string_view text, ModulatorKind& out) noexcept;

/// Canonical hash of a sorted neuron-id set. Identifies an attended percept.
struct StateKey {
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(StateKey, StateKey) = default;
};

StateKey state_key(const NeuronSet& members);
std::string to_string(StateKey key);

/// Jaccard similarity |a ∩ b| / |a ∪ b|; 0 when both are empty.
double jaccard(const NeuronSet& a, const NeuronSet& b);

NeuronSet set_union(const NeuronSet& a, const NeuronSet& b);

/// Parses id lists like "0-8", "3,5,9-11" or "4 7". Throws Error(ParseError).
std::vector<NeuronId> parse_id_list(std::string_view text);
std::string format_id_list(const NeuronSet& ids, char sep = ';');

}  // namespace burstnet

template <>
struct std::hash<burstnet::NeuronId> {
    std::size_t operator()(burstnet::NeuronId id) const noexcept { return id.value; }
};

template <>
struct std::hash<burstnet::StateKey> {
    std::size_t operator()(burstnet::StateKey key) const noexcept {
        return static_cast<std::size_t>(key.value);
    }
};
