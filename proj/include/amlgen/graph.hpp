#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/degree.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

/// Directed simple graph over accounts 0..n-1 plus per-node laundering
/// participation counters.
struct BlueprintGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> ml_participation_count;
    int dropped_stubs = 0;

    bool has_edge(int u, int v) const {
        return edge_keys.count(static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v) >
               0;
    }
    /// Returns false if the edge already existed or is a self-loop.
    bool add_edge(int u, int v) {
        if (u == v) return false;
        auto key = static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
        if (!edge_keys.insert(key).second) return false;
        edges.emplace_back(u, v);
        return true;
    }

    std::unordered_set<std::uint64_t> edge_keys;
};

/// Wire the degree sequences into a simple directed graph by configuration-
/// model stub matching. Self-loops and duplicate edges are rejected and the
/// offending stubs reshuffled for up to 100 rounds; unresolvable stubs are
/// dropped and counted in dropped_stubs.
BlueprintGraph realize_blueprint(const DegreeSequences& seq, RandomStream& rng);

}  // namespace amlgen
