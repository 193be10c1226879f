#include "amlgen/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace amlgen {

PatternTemplate build_template(PatternKind kind, int size, int layers) {
    PatternTemplate t;
    t.size = size;
    auto add = [&](int u, int v, int layer) {
        t.edges.emplace_back(u, v);
        t.edge_layer.push_back(layer);
    };
    switch (kind) {
        case PatternKind::Direct:
            t.size = 2;
            add(0, 1, 0);
            t.n_layers = 1;
            break;
        case PatternKind::Mutual:
            t.size = 2;
            add(0, 1, 0);
            add(1, 0, 1);
            t.n_layers = 2;
            break;
        case PatternKind::Periodic:
            t.size = 2;
            add(0, 1, 0);
            add(0, 1, 1);
            add(0, 1, 2);
            t.n_layers = 3;
            break;
        case PatternKind::Forward:
            t.size = 3;
            add(0, 1, 0);
            add(1, 2, 1);
            t.n_layers = 2;
            break;
        case PatternKind::FanIn:
            for (int i = 1; i < size; ++i) add(i, 0, 0);
            t.n_layers = 1;
            break;
        case PatternKind::FanOut:
            for (int i = 1; i < size; ++i) add(0, i, 0);
            t.n_layers = 1;
            break;
        case PatternKind::Cycle:
            for (int i = 0; i < size; ++i) add(i, (i + 1) % size, i);
            t.n_layers = size;
            break;
        case PatternKind::ScatterGather:
            // role 0 scatters to the middles, middles forward to role size-1
            for (int i = 1; i < size - 1; ++i) add(0, i, 0);
            for (int i = 1; i < size - 1; ++i) add(i, size - 1, 1);
            t.n_layers = 2;
            break;
        case PatternKind::GatherScatter: {
            // sources feed role 0, which scatters to the remaining roles
            int n_src = (size - 1 + 1) / 2;
            for (int i = 1; i <= n_src; ++i) add(i, 0, 0);
            for (int i = n_src + 1; i < size; ++i) add(0, i, 1);
            t.n_layers = 2;
            break;
        }
        case PatternKind::StackedBipartite: {
            // members split as evenly as possible across `layers` node layers,
            // consecutive layers joined by round-robin partial bipartite edges
            int L = layers;
            std::vector<std::vector<int>> node_layers(L);
            int base = size / L, rem = size % L, next = 0;
            for (int l = 0; l < L; ++l) {
                int cnt = base + (l < rem ? 1 : 0);
                for (int c = 0; c < cnt; ++c) node_layers[l].push_back(next++);
            }
            for (int l = 0; l + 1 < L; ++l) {
                const auto& a = node_layers[l];
                const auto& b = node_layers[l + 1];
                std::set<std::pair<int, int>> seen;
                int m = std::max(static_cast<int>(a.size()), static_cast<int>(b.size()));
                for (int i = 0; i < m; ++i) {
                    auto e = std::make_pair(a[i % a.size()], b[i % b.size()]);
                    if (seen.insert(e).second) add(e.first, e.second, l);
                }
            }
            t.n_layers = L - 1;
            break;
        }
    }
    return t;
}

void schedule_pattern(PatternInstance& inst, TimingScheme scheme, int t_start, int t_end,
                      RandomStream& rng) {
    const int window = t_end - t_start + 1;
    const int n_edges = static_cast<int>(inst.edges.size());
    const int n_layers = inst.n_layers;
    if (window < 1) throw ConfigError("schedule: empty window");
    inst.edge_steps.assign(n_edges, t_start);

    if (scheme == TimingScheme::Simultaneous) {
        if (n_layers > 1)
            throw ConfigError(std::string("schedule: ") + to_string(inst.kind) +
                              " requires ordering, simultaneous timing infeasible");
        return;  // one common step at t_start
    }
    if (n_layers > window)
        throw ConfigError("schedule: window shorter than the required ordering ranks");

    if (scheme == TimingScheme::FixedInterval) {
        if (n_layers > 1) {
            for (int e = 0; e < n_edges; ++e) {
                int l = inst.edge_layer[e];
                inst.edge_steps[e] =
                    t_start +
                    static_cast<int>(std::llround(static_cast<double>(l) * (window - 1) /
                                                  (n_layers - 1)));
            }
        } else if (n_edges > 1) {
            for (int e = 0; e < n_edges; ++e)
                inst.edge_steps[e] =
                    t_start + static_cast<int>(std::llround(static_cast<double>(e) *
                                                            (window - 1) / (n_edges - 1)));
        }
        return;
    }

    // random_interval and unordered: iid uniform steps, then sorted just
    // enough to restore the layer barriers.
    for (int e = 0; e < n_edges; ++e)
        inst.edge_steps[e] = t_start + static_cast<int>(rng.uniform_int(window));
    if (n_layers == 1) return;

    std::sort(inst.edge_steps.begin(), inst.edge_steps.end());
    // template edges are emitted in layer order, so sorted steps line up
    int prev_layer_max = t_start - 1;
    int cur_layer = inst.edge_layer.empty() ? 0 : inst.edge_layer[0];
    int cur_max = t_start - 1;
    for (int e = 0; e < n_edges; ++e) {
        int l = inst.edge_layer[e];
        if (l != cur_layer) {
            prev_layer_max = cur_max;
            cur_layer = l;
        }
        // leave room for every later layer so the forward bump cannot
        // overflow the window
        int upper = t_end - (n_layers - 1 - l);
        if (inst.edge_steps[e] > upper) inst.edge_steps[e] = upper;
        if (inst.edge_steps[e] <= prev_layer_max) inst.edge_steps[e] = prev_layer_max + 1;
        cur_max = std::max(cur_max, inst.edge_steps[e]);
    }
}

namespace {

/// Unconsumed-edge bookkeeping for greedy normal-pattern placement.
struct EdgePool {
    const BlueprintGraph& bp;
    std::vector<char> consumed;
    std::vector<int> pool;      // unconsumed edge indices
    std::vector<int> pool_pos;  // edge idx -> position in pool, -1 if consumed
    std::vector<std::vector<int>> out_list, in_list;
    std::unordered_map<std::uint64_t, int> edge_index;

    explicit EdgePool(const BlueprintGraph& g) : bp(g) {
        int m = static_cast<int>(g.edges.size());
        consumed.assign(m, 0);
        pool.resize(m);
        pool_pos.resize(m);
        out_list.resize(g.n);
        in_list.resize(g.n);
        edge_index.reserve(m * 2);
        for (int e = 0; e < m; ++e) {
            pool[e] = e;
            pool_pos[e] = e;
            auto [u, v] = g.edges[e];
            out_list[u].push_back(e);
            in_list[v].push_back(e);
            edge_index[static_cast<std::uint64_t>(u) * g.n + v] = e;
        }
    }

    int find(int u, int v) const {
        auto it = edge_index.find(static_cast<std::uint64_t>(u) * bp.n + v);
        return it == edge_index.end() ? -1 : it->second;
    }

    void consume(int e) {
        consumed[e] = 1;
        int pos = pool_pos[e];
        int last = pool.back();
        pool[pos] = last;
        pool_pos[last] = pos;
        pool.pop_back();
        pool_pos[e] = -1;
    }

    int random_unconsumed(RandomStream& rng) const {
        if (pool.empty()) return -1;
        return pool[rng.uniform_int(pool.size())];
    }

    /// Unconsumed edges incident to node n on the given side, excluding a
    /// counterparty, up to `want` of them starting at a random offset.
    std::vector<int> pick_incident(const std::vector<int>& list, int want, int exclude_node,
                                   bool exclude_is_src, RandomStream& rng) const {
        std::vector<int> found;
        if (list.empty()) return found;
        std::size_t off = rng.uniform_int(list.size());
        for (std::size_t i = 0; i < list.size() && static_cast<int>(found.size()) < want; ++i) {
            int e = list[(i + off) % list.size()];
            if (consumed[e]) continue;
            int other = exclude_is_src ? bp.edges[e].first : bp.edges[e].second;
            if (other == exclude_node) continue;
            found.push_back(e);
        }
        return found;
    }
};

}  // namespace

FitResult fit_normal_patterns(const BlueprintGraph& bp, const std::vector<TypologySpec>& specs,
                              RandomStream& rng, int first_pattern_id) {
    FitResult res;
    EdgePool pool(bp);
    auto rfit = rng.derive("fit-normal");
    int next_id = first_pattern_id;

    for (std::size_t si = 0; si < specs.size(); ++si) {
        const auto& spec = specs[si];
        auto rspec = rfit.derive(to_string(spec.kind), si);
        int placed = 0;
        for (int inst_i = 0; inst_i < spec.count; ++inst_i) {
            bool ok = false;
            std::vector<int> use_edges;  // blueprint edges to consume
            std::vector<int> members;
            for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
                use_edges.clear();
                members.clear();
                int e0 = pool.random_unconsumed(rspec);
                if (e0 < 0) break;
                auto [u, v] = bp.edges[e0];
                switch (spec.kind) {
                    case PatternKind::Direct:
                    case PatternKind::Periodic:
                        members = {u, v};
                        use_edges = {e0};
                        ok = true;
                        break;
                    case PatternKind::Mutual: {
                        int rev = pool.find(v, u);
                        if (rev >= 0 && !pool.consumed[rev]) {
                            members = {u, v};
                            use_edges = {e0, rev};
                            ok = true;
                        }
                        break;
                    }
                    case PatternKind::Forward: {
                        auto nexts = pool.pick_incident(pool.out_list[v], 1, u, false, rspec);
                        if (!nexts.empty() && nexts[0] != e0) {
                            members = {u, v, bp.edges[nexts[0]].second};
                            use_edges = {e0, nexts[0]};
                            ok = true;
                        }
                        break;
                    }
                    case PatternKind::FanIn: {
                        int s = spec.min_size == spec.max_size
                                    ? spec.min_size
                                    : static_cast<int>(
                                          rspec.uniform_range(spec.min_size, spec.max_size));
                        auto ins = pool.pick_incident(pool.in_list[v], s - 1, -1, true, rspec);
                        if (static_cast<int>(ins.size()) == s - 1) {
                            members.push_back(v);
                            for (int e : ins) members.push_back(bp.edges[e].first);
                            use_edges = ins;
                            ok = true;
                        }
                        break;
                    }
                    case PatternKind::FanOut: {
                        int s = spec.min_size == spec.max_size
                                    ? spec.min_size
                                    : static_cast<int>(
                                          rspec.uniform_range(spec.min_size, spec.max_size));
                        auto outs = pool.pick_incident(pool.out_list[u], s - 1, -1, false, rspec);
                        if (static_cast<int>(outs.size()) == s - 1) {
                            members.push_back(u);
                            for (int e : outs) members.push_back(bp.edges[e].second);
                            use_edges = outs;
                            ok = true;
                        }
                        break;
                    }
                    default:
                        throw ConfigError(std::string("fit_normal_patterns: ") +
                                          to_string(spec.kind) + " is not a normal kind");
                }
            }
            if (!ok) continue;
            for (int e : use_edges) pool.consume(e);
            PatternInstance inst;
            inst.id = next_id++;
            inst.kind = spec.kind;
            inst.is_alert = false;
            inst.members = members;
            auto tpl = build_template(spec.kind, static_cast<int>(members.size()), spec.layers);
            for (std::size_t e = 0; e < tpl.edges.size(); ++e)
                inst.edges.emplace_back(members[tpl.edges[e].first], members[tpl.edges[e].second]);
            inst.edge_layer = tpl.edge_layer;
            inst.n_layers = tpl.n_layers;
            res.instances.push_back(std::move(inst));
            ++placed;
        }
        res.census.emplace_back(spec.kind, spec.count, placed);
    }
    res.consumed = std::move(pool.consumed);
    return res;
}

ReuseSelector::ReuseSelector(int n_nodes, double p, RandomStream rng)
    : n_(n_nodes), p_(p), rng_(rng), count_(n_nodes, 0) {
    unused_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) unused_[i] = i;
    // Per-selection level probabilities q_k = c * sum_{j>k} p^j / j with
    // c = (1-p)/p make the stationary participation counts Log(p).
    extend_cum(0.999999);
}

void ReuseSelector::extend_cum(double target) {
    double c = (1.0 - p_) / p_;
    // Recompute the remaining tail sum from scratch on each extension.
    std::size_t k0 = cum_.size();
    double tail = -std::log(1.0 - p_);  // sum_{j>=1} p^j / j
    double pk = 1.0;
    for (std::size_t k = 1; k <= k0; ++k) {
        pk *= p_;
        tail -= pk / static_cast<double>(k);
    }
    double acc = cum_.empty() ? 0.0 : cum_.back();
    std::size_t k = k0;
    while ((cum_.empty() || cum_.back() < target) && k < 4000) {
        acc += c * tail;
        cum_.push_back(acc);
        ++k;
        pk *= p_;
        tail -= pk / static_cast<double>(k);
        if (tail < 0.0) tail = 0.0;
    }
}

int ReuseSelector::pick_one(const std::vector<char>& taken) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        double u = rng_.next_double();
        if (u > cum_.back()) extend_cum(u);
        int level = static_cast<int>(
            std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        int node = -1;
        if (level == 0) {
            if (!unused_.empty()) {
                std::size_t pos = rng_.uniform_int(unused_.size());
                if (!taken[unused_[pos]]) {
                    node = unused_[pos];
                    unused_[pos] = unused_.back();
                    unused_.pop_back();
                }
            }
        } else {
            // fall back to the nearest lower non-empty group, then the pool
            int g = std::min(level - 1, static_cast<int>(groups_.size()) - 1);
            while (g >= 0 && groups_[g].empty()) --g;
            if (g >= 0) {
                std::size_t pos = rng_.uniform_int(groups_[g].size());
                if (!taken[groups_[g][pos]]) {
                    node = groups_[g][pos];
                    groups_[g][pos] = groups_[g].back();
                    groups_[g].pop_back();
                }
            } else if (!unused_.empty()) {
                std::size_t pos = rng_.uniform_int(unused_.size());
                if (!taken[unused_[pos]]) {
                    node = unused_[pos];
                    unused_[pos] = unused_.back();
                    unused_.pop_back();
                }
            }
        }
        if (node >= 0) {
            ++count_[node];
            int g = count_[node] - 1;
            if (static_cast<int>(groups_.size()) <= g) groups_.resize(g + 1);
            groups_[g].push_back(node);
            return node;
        }
    }
    // deterministic sweep as a last resort
    for (std::size_t pos = 0; pos < unused_.size(); ++pos) {
        int node = unused_[pos];
        if (taken[node]) continue;
        unused_[pos] = unused_.back();
        unused_.pop_back();
        ++count_[node];
        if (groups_.empty()) groups_.resize(1);
        groups_[0].push_back(node);
        return node;
    }
    for (auto& grp : groups_) {
        for (std::size_t pos = 0; pos < grp.size(); ++pos) {
            int node = grp[pos];
            if (taken[node]) continue;
            grp[pos] = grp.back();
            grp.pop_back();
            ++count_[node];
            int g = count_[node] - 1;
            if (static_cast<int>(groups_.size()) <= g) groups_.resize(g + 1);
            groups_[g].push_back(node);
            return node;
        }
    }
    throw std::runtime_error("ReuseSelector: node pool exhausted");
}

std::vector<int> ReuseSelector::select(int k) {
    if (k > n_) throw std::runtime_error("ReuseSelector: pattern larger than node count");
    std::vector<char> taken(n_, 0);
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        int node = pick_one(taken);
        taken[node] = 1;
        out.push_back(node);
    }
    return out;
}

std::vector<PatternInstance> inject_alert_patterns(BlueprintGraph& bp,
                                                   const std::vector<TypologySpec>& specs,
                                                   double reuse_p, RandomStream& rng,
                                                   int first_pattern_id) {
    std::vector<PatternInstance> out;
    ReuseSelector selector(bp.n, reuse_p, rng.derive("reuse"));
    auto rsize = rng.derive("alert-size");
    int next_id = first_pattern_id;
    for (std::size_t si = 0; si < specs.size(); ++si) {
        const auto& spec = specs[si];
        for (int i = 0; i < spec.count; ++i) {
            int s = spec.min_size == spec.max_size
                        ? spec.min_size
                        : static_cast<int>(rsize.uniform_range(spec.min_size, spec.max_size));
            PatternInstance inst;
            inst.id = next_id++;
            inst.kind = spec.kind;
            inst.is_alert = true;
            inst.members = selector.select(s);
            auto tpl = build_template(spec.kind, s, spec.layers);
            for (const auto& [a, b] : tpl.edges) {
                int u = inst.members[a], v = inst.members[b];
                inst.edges.emplace_back(u, v);
                bp.add_edge(u, v);  // no-op when already present
            }
            inst.edge_layer = tpl.edge_layer;
            inst.n_layers = tpl.n_layers;
            for (int m : inst.members) ++bp.ml_participation_count[m];
            out.push_back(std::move(inst));
        }
    }
    return out;
}

std::vector<int> prune_unused(BlueprintGraph& bp, std::vector<PatternInstance>& normal,
                              std::vector<PatternInstance>& alert) {
    std::vector<char> keep(bp.n, 0);
    for (const auto* vec : {&normal, &alert})
        for (const auto& inst : *vec)
            for (int m : inst.members) keep[m] = 1;
    std::vector<int> remap(bp.n, -1);
    int next = 0;
    for (int i = 0; i < bp.n; ++i)
        if (keep[i]) remap[i] = next++;

    BlueprintGraph pruned;
    pruned.n = next;
    pruned.ml_participation_count.resize(next);
    for (int i = 0; i < bp.n; ++i)
        if (keep[i]) pruned.ml_participation_count[remap[i]] = bp.ml_participation_count[i];
    for (const auto& [u, v] : bp.edges)
        if (keep[u] && keep[v]) pruned.add_edge(remap[u], remap[v]);
    pruned.dropped_stubs = bp.dropped_stubs;
    bp = std::move(pruned);

    for (auto* vec : {&normal, &alert}) {
        for (auto& inst : *vec) {
            for (auto& m : inst.members) m = remap[m];
            for (auto& [u, v] : inst.edges) {
                u = remap[u];
                v = remap[v];
            }
        }
    }
    return remap;
}

}  // namespace amlgen
