#include "amlgen/graph.hpp"

#include <algorithm>

namespace amlgen {

BlueprintGraph realize_blueprint(const DegreeSequences& seq, RandomStream& rng) {
    const int n = static_cast<int>(seq.in_degrees.size());
    BlueprintGraph g;
    g.n = n;
    g.ml_participation_count.assign(n, 0);
    g.edge_keys.reserve(static_cast<std::size_t>(n) * 2);

    std::vector<int> out_stubs, in_stubs;
    for (int i = 0; i < n; ++i) {
        out_stubs.insert(out_stubs.end(), seq.out_degrees[i], i);
        in_stubs.insert(in_stubs.end(), seq.in_degrees[i], i);
    }
    auto rshuf = rng.derive("wire-shuffle");
    auto shuffle = [&](std::vector<int>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rshuf.uniform_int(i)]);
    };
    shuffle(out_stubs);
    shuffle(in_stubs);

    for (int round = 0; round < 100 && !out_stubs.empty(); ++round) {
        std::vector<int> rej_out, rej_in;
        for (std::size_t i = 0; i < out_stubs.size(); ++i) {
            if (!g.add_edge(out_stubs[i], in_stubs[i])) {
                rej_out.push_back(out_stubs[i]);
                rej_in.push_back(in_stubs[i]);
            }
        }
        out_stubs = std::move(rej_out);
        in_stubs = std::move(rej_in);
        if (!out_stubs.empty()) {
            shuffle(out_stubs);
            shuffle(in_stubs);
        }
    }
    g.dropped_stubs = static_cast<int>(out_stubs.size());
    return g;
}

}  // namespace amlgen
