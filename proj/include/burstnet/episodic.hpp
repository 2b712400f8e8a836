#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "burstnet/types.hpp"

namespace burstnet {

struct MemoryItem {
    NeuronSet neurons;
    double salience = 0.0;  // NA level at encoding
};

/// Theta-indexed item sequence; item k cues item k+1.
struct EpisodicTrace {
    std::int64_t trace_id = 0;
    std::vector<MemoryItem> items;
    std::vector<std::int64_t> theta_indices;  // strictly increasing
};

struct RecallHit {
    std::int64_t trace_id = 0;
    std::size_t position = 0;  // of the recalled (successor) item
    NeuronSet recalled;
};

struct RecallResult {
    std::optional<RecallHit> hit;
    double similarity = 0.0;
};

inline constexpr int kDefaultCapacityPerCycle = 9;
inline constexpr double kDefaultThetaRecall = 0.6;
inline constexpr double kDefaultAchSuppress = 0.7;

class EpisodicStore {
public:
    explicit EpisodicStore(int capacity_per_cycle = kDefaultCapacityPerCycle,
                           double theta_recall = kDefaultThetaRecall,
                           double ach_suppress = kDefaultAchSuppress);

    int capacity_per_cycle() const { return capacity_; }
    double theta_recall() const { return theta_recall_; }
    double ach_suppress() const { return ach_suppress_; }
    const std::vector<EpisodicTrace>& traces() const { return traces_; }
    bool empty() const { return traces_.empty(); }
    std::size_t item_count() const;
    std::size_t items_in_cycle(std::int64_t theta_index) const;

    /// Appends the dominant members to the open trace, opening a new trace when the
    /// previous encode was not at theta_index - 1. A full cycle drops its
    /// lowest-salience item, counting the incoming one (earliest encoded goes first
    /// on ties).
    void encode(const NeuronSet& dominant_members, std::int64_t theta_index, double na_level);

    /// Best Jaccard match among items that have a successor. Suppressed entirely when
    /// ach_level >= ach_suppress. Ties prefer the most recent trace, then the earliest
    /// position. Throws Error(EmptyCue).
    RecallResult recall(const NeuronSet& cue, double ach_level) const;

    /// One record per item: trace_id, position, theta_index, salience, neuron ids.
    std::string dump() const;

private:
    std::vector<EpisodicTrace> traces_;
    int capacity_;
    double theta_recall_;
    double ach_suppress_;
    std::int64_t next_trace_id_ = 0;
    std::int64_t encode_sequence_ = 0;
    std::vector<std::vector<std::int64_t>> encode_order_;  // parallel to traces_[i].items
};

/// Neurons forced to burst next window: recalled items plus stimulus-driven bursting.
NeuronSet merge_step(const NeuronSet& recalled, const NeuronSet& stimulus_bursting);

}  // namespace burstnet
