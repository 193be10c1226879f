#pragma once

#include <utility>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/graph.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

/// Structural template of a typology: edges refer to role positions
/// 0..size-1, each edge tagged with its ordering layer. Chain-like kinds
/// (mutual, periodic, forward, cycle) put every edge in its own layer;
/// fan-in/fan-out/direct are a single unordered layer.
struct PatternTemplate {
    int size = 0;
    std::vector<std::pair<int, int>> edges;  // (src role, dst role)
    std::vector<int> edge_layer;
    int n_layers = 1;
};

PatternTemplate build_template(PatternKind kind, int size, int layers = 3);

struct PatternInstance {
    int id = 0;
    PatternKind kind = PatternKind::FanOut;
    bool is_alert = false;
    std::vector<int> members;                // node ids by role position
    std::vector<std::pair<int, int>> edges;  // node-id edges, template order
    std::vector<int> edge_layer;
    int n_layers = 1;
    std::vector<int> edge_steps;  // filled by schedule_pattern
};

/// Assign a step to every template edge inside [t_start, t_end].
/// Chain and layered kinds keep strict layer barriers: every edge of layer l
/// executes strictly before any edge of layer l+1. Throws ConfigError when
/// the scheme cannot satisfy the ordering (simultaneous on ordered kinds, or
/// a window shorter than the number of layers).
void schedule_pattern(PatternInstance& inst, TimingScheme scheme, int t_start, int t_end,
                      RandomStream& rng);

struct FitResult {
    std::vector<PatternInstance> instances;
    /// (kind, requested, placed) per spec, in spec order.
    std::vector<std::tuple<PatternKind, int, int>> census;
    /// Blueprint edge indices consumed by some normal instance.
    std::vector<char> consumed;
};

/// Greedy randomized placement of normal typologies over unconsumed
/// blueprint edges; instances that cannot be placed within the attempt
/// budget are discarded and counted.
FitResult fit_normal_patterns(const BlueprintGraph& bp, const std::vector<TypologySpec>& specs,
                              RandomStream& rng, int first_pattern_id = 0);

/// Stateful member picker implementing logarithmic account reuse: the
/// stationary distribution of per-account alert participation counts is
/// Log(p) with PMF (-1/ln(1-p)) p^k / k.
class ReuseSelector {
public:
    ReuseSelector(int n_nodes, double p, RandomStream rng);

    /// Pick k distinct nodes, updating participation counts.
    std::vector<int> select(int k);

    const std::vector<int>& participation() const { return count_; }
    int used_nodes() const { return n_ - static_cast<int>(unused_.size()); }

private:
    int pick_one(const std::vector<char>& taken);
    void extend_cum(double target);

    int n_;
    double p_;
    RandomStream rng_;
    std::vector<int> count_;                 // current participation per node
    std::vector<int> unused_;                // nodes with count 0
    std::vector<std::vector<int>> groups_;   // groups_[g] = nodes with count g+1
    std::vector<double> cum_;                // cumulative level probabilities
};

/// Place every requested alert instance, adding missing edges to the graph
/// and bumping ml_participation_count for all members. Edges are added
/// regardless of blueprint fit.
std::vector<PatternInstance> inject_alert_patterns(BlueprintGraph& bp,
                                                   const std::vector<TypologySpec>& specs,
                                                   double reuse_p, RandomStream& rng,
                                                   int first_pattern_id);

/// Drop nodes participating in no pattern; returns old-id -> new-id map
/// (-1 for removed) and rewrites graph plus instances in place.
std::vector<int> prune_unused(BlueprintGraph& bp, std::vector<PatternInstance>& normal,
                              std::vector<PatternInstance>& alert);

}  // namespace amlgen
