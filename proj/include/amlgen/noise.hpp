#pragma once

#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/features.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

/// Observed-label view of a train table after weak-supervision noise.
/// Features and true labels stay untouched; only `observed` and `labeled`
/// change. Rows align with the source FeatureTable.
struct NoisyLabels {
    std::vector<int> observed;   // per row
    std::vector<char> labeled;   // 0 = label withheld
};

NoisyLabels init_labels(const FeatureTable& table);

/// Masks a uniform (1 - fraction) subset of row labels.
void drop_labels(const FeatureTable& table, NoisyLabels& labels, double fraction,
                 RandomStream& rng);

/// Flips each labeled row independently with its class's probability.
void apply_class_noise(const FeatureTable& table, NoisyLabels& labels, double flip_prob_benign,
                       double flip_prob_alert, RandomStream& rng);

/// Selects each alert pattern with probability prob and relabels its member
/// rows benign (grouped alert -> benign flips).
void apply_typology_noise(const FeatureTable& table, NoisyLabels& labels,
                          const std::vector<PatternInstance>& alert_instances, double prob,
                          RandomStream& rng);

/// Flags benign-observed rows with probability prob when they have an
/// outgoing window-graph edge to a true-alert node.
void apply_neighbor_noise(const FeatureTable& table, NoisyLabels& labels,
                          const WindowedGraph& wg, double prob, RandomStream& rng);

/// Full pipeline in the fixed order drop -> class -> typology -> neighbor,
/// on the substream derived from the config's master seed.
NoisyLabels apply_noise(const FeatureTable& table, const WindowedGraph& wg,
                        const std::vector<PatternInstance>& alert_instances,
                        const SimulationConfig& cfg);

}  // namespace amlgen
