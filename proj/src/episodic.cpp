#include "burstnet/episodic.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

EpisodicStore::EpisodicStore(int capacity_per_cycle, double theta_recall, double ach_suppress)
    : capacity_(capacity_per_cycle), theta_recall_(theta_recall), ach_suppress_(ach_suppress) {
    if (capacity_per_cycle < 5 || capacity_per_cycle > 9) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("capacity_per_cycle {} outside 5..9", capacity_per_cycle));
    }
    if (!(theta_recall > 0.0 && theta_recall <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("theta_recall {} outside (0,1]", theta_recall));
    }
}

std::size_t EpisodicStore::item_count() const {
    std::size_t n = 0;
    for (const auto& t : traces_) n += t.items.size();
    return n;
}

std::size_t EpisodicStore::items_in_cycle(std::int64_t theta_index) const {
    std::size_t n = 0;
    for (const auto& t : traces_) {
        n += static_cast<std::size_t>(
            std::count(t.theta_indices.begin(), t.theta_indices.end(), theta_index));
    }
    return n;
}

void EpisodicStore::encode(const NeuronSet& dominant_members, std::int64_t theta_index,
                           double na_level) {
    if (dominant_members.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot encode an empty ensemble");
    }
    if (!(na_level >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("na_level {} negative", na_level));
    }
    const std::int64_t order = encode_sequence_++;

    if (items_in_cycle(theta_index) >= static_cast<std::size_t>(capacity_)) {
        // Lowest salience leaves, counting the incoming item; earliest encoded on ties.
        std::size_t victim_trace = traces_.size();
        std::size_t victim_pos = 0;
        double victim_salience = na_level;
        std::int64_t victim_order = order;
        for (std::size_t ti = 0; ti < traces_.size(); ++ti) {
            const auto& t = traces_[ti];
            for (std::size_t p = 0; p < t.items.size(); ++p) {
                if (t.theta_indices[p] != theta_index) continue;
                double s = t.items[p].salience;
                std::int64_t o = encode_order_[ti][p];
                if (s < victim_salience || (s == victim_salience && o < victim_order)) {
                    victim_trace = ti;
                    victim_pos = p;
                    victim_salience = s;
                    victim_order = o;
                }
            }
        }
        if (victim_trace == traces_.size()) return;  // incoming item is the weakest
        auto& t = traces_[victim_trace];
        t.items.erase(t.items.begin() + static_cast<std::ptrdiff_t>(victim_pos));
        t.theta_indices.erase(t.theta_indices.begin() + static_cast<std::ptrdiff_t>(victim_pos));
        encode_order_[victim_trace].erase(encode_order_[victim_trace].begin() +
                                          static_cast<std::ptrdiff_t>(victim_pos));
        if (t.items.empty()) {
            traces_.erase(traces_.begin() + static_cast<std::ptrdiff_t>(victim_trace));
            encode_order_.erase(encode_order_.begin() + static_cast<std::ptrdiff_t>(victim_trace));
        }
    }

    const bool continue_open = !traces_.empty() && !traces_.back().theta_indices.empty() &&
                               traces_.back().theta_indices.back() == theta_index - 1;
    if (!continue_open) {
        traces_.push_back(EpisodicTrace{next_trace_id_++, {}, {}});
        encode_order_.emplace_back();
    }
    traces_.back().items.push_back(MemoryItem{dominant_members, na_level});
    traces_.back().theta_indices.push_back(theta_index);
    encode_order_.back().push_back(order);
}

RecallResult EpisodicStore::recall(const NeuronSet& cue, double ach_level) const {
    if (cue.empty()) throw Error(ErrorCode::EmptyCue, "recall needs a non-empty cue");
    RecallResult result;
    if (ach_level >= ach_suppress_) return result;

    bool found = false;
    double best = 0.0;
    const EpisodicTrace* best_trace = nullptr;
    std::size_t best_pos = 0;
    for (auto it = traces_.rbegin(); it != traces_.rend(); ++it) {
        for (std::size_t p = 0; p + 1 < it->items.size(); ++p) {
            double sim = jaccard(cue, it->items[p].neurons);
            if (!found || sim > best) {
                found = true;
                best = sim;
                best_trace = &*it;
                best_pos = p;
            }
        }
    }
    if (!found) return result;
    result.similarity = best;
    if (best >= theta_recall_) {
        result.hit = RecallHit{best_trace->trace_id, best_pos + 1, best_trace->items[best_pos + 1].neurons};
    }
    return result;
}

std::string EpisodicStore::dump() const {
    std::string out = "trace_id\tposition\ttheta_index\tsalience\tneuron_ids\n";
    for (const auto& t : traces_) {
        for (std::size_t p = 0; p < t.items.size(); ++p) {
            out += fmt::format("{}\t{}\t{}\t{:.6f}\t{}\n", t.trace_id, p, t.theta_indices[p],
                               t.items[p].salience, format_id_list(t.items[p].neurons, ';'));
        }
    }
    return out;
}

NeuronSet merge_step(const NeuronSet& recalled, const NeuronSet& stimulus_bursting) {
    return set_union(recalled, stimulus_bursting);
}

}  // namespace burstnet
