#include "amlgen/noise.hpp"

#include <unordered_map>
#include <unordered_set>

namespace amlgen {

NoisyLabels init_labels(const FeatureTable& table) {
    NoisyLabels labels;
    labels.observed.reserve(table.rows.size());
    for (const auto& row : table.rows) labels.observed.push_back(row.label);
    labels.labeled.assign(table.rows.size(), 1);
    return labels;
}

void drop_labels(const FeatureTable& table, NoisyLabels& labels, double fraction,
                 RandomStream& rng) {
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        if (rng.next_double() >= fraction) labels.labeled[i] = 0;
}

void apply_class_noise(const FeatureTable& table, NoisyLabels& labels, double flip_prob_benign,
                       double flip_prob_alert, RandomStream& rng) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!labels.labeled[i]) continue;
        double p = labels.observed[i] ? flip_prob_alert : flip_prob_benign;
        if (rng.bernoulli(p)) labels.observed[i] ^= 1;
    }
}

void apply_typology_noise(const FeatureTable& table, NoisyLabels& labels,
                          const std::vector<PatternInstance>& alert_instances, double prob,
                          RandomStream& rng) {
    std::unordered_set<int> flip_members;
    for (const auto& inst : alert_instances)
        if (rng.bernoulli(prob))
            flip_members.insert(inst.members.begin(), inst.members.end());
    if (flip_members.empty()) return;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        if (flip_members.count(table.rows[i].account)) labels.observed[i] = 0;
}

void apply_neighbor_noise(const FeatureTable& table, NoisyLabels& labels,
                          const WindowedGraph& wg, double prob, RandomStream& rng) {
    std::unordered_set<int> true_alert;
    for (std::size_t i = 0; i < wg.nodes.size(); ++i)
        if (wg.labels[i]) true_alert.insert(wg.nodes[i]);
    std::unordered_set<int> eligible;  // nodes with an out-edge to a true alert
    for (const auto& [u, v] : wg.edges)
        if (true_alert.count(v)) eligible.insert(u);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!labels.labeled[i] || labels.observed[i]) continue;
        if (table.rows[i].label) continue;  // only truly benign accounts
        if (!eligible.count(table.rows[i].account)) continue;
        if (rng.bernoulli(prob)) labels.observed[i] = 1;
    }
}

NoisyLabels apply_noise(const FeatureTable& table, const WindowedGraph& wg,
                        const std::vector<PatternInstance>& alert_instances,
                        const SimulationConfig& cfg) {
    NoisyLabels labels = init_labels(table);
    RandomStream root(cfg.master_seed);
    auto r1 = root.derive("noise-drop");
    auto r2 = root.derive("noise-class");
    auto r3 = root.derive("noise-typology");
    auto r4 = root.derive("noise-neighbor");
    drop_labels(table, labels, cfg.noise.labeled_fraction, r1);
    apply_class_noise(table, labels, cfg.noise.flip_prob_benign, cfg.noise.flip_prob_alert, r2);
    apply_typology_noise(table, labels, alert_instances, cfg.noise.typology_flip_prob, r3);
    apply_neighbor_noise(table, labels, wg, cfg.noise.neighbor_flag_prob, r4);
    return labels;
}

}  // namespace amlgen
