#pragma once

#include "oracle_order/model.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle_order {

// Deterministic, platform-independent randomness: mt19937_64 output reduced
// with explicit rejection sampling, so a seed pins every generated byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    int uniform(int lo, int hi) {  // inclusive bounds
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return lo + static_cast<int>(x % span);
    }

    bool chance_percent(int pct) { return uniform(1, 100) <= pct; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<int>(i) - 1))]);
    }

private:
    std::mt19937_64 eng_;
};

struct GeneratorParams {
    int n_states = 6;
    int n_players = 2;
    int n_ckcs_target = 2;
    int block_bias = 50;  // percent chance an oracle merge step spans two CKCs
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    Partition to_partition() {
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < static_cast<int>(parent.size()); ++i) groups[find(i)].push_back(i);
        std::vector<std::vector<int>> blocks;
        for (auto& [root, members] : groups) blocks.push_back(members);
        return Partition::from_blocks(static_cast<int>(parent.size()), blocks);
    }
};

}  // namespace detail

// Merges `rounds` random block pairs starting from singletons.
inline Partition random_partition(Rng& rng, int n_states, int rounds) {
    detail::UnionFind uf(n_states);
    for (int r = 0; r < rounds; ++r) {
        int a = rng.uniform(0, n_states - 1);
        int b = rng.uniform(0, n_states - 1);
        if (uf.find(a) != uf.find(b)) uf.unite(a, b);
    }
    return uf.to_partition();
}

// Row-stochastic strategy constant on each block of f, with small random
// integer weights normalized exactly.
inline SignalingStrategy random_measurable_strategy(Rng& rng, const Instance& inst,
                                                    const Partition& f, int n_signals) {
    SignalingStrategy t;
    for (int s = 0; s < n_signals; ++s) t.signals.push_back("s" + std::to_string(s + 1));
    t.rows.assign(inst.state_count(), {});
    for (int b = 0; b < f.block_count(); ++b) {
        std::vector<int> weights(static_cast<std::size_t>(n_signals));
        int total = 0;
        for (int& w : weights) {
            w = rng.uniform(0, 4);
            total += w;
        }
        if (total == 0) {
            weights[static_cast<std::size_t>(rng.uniform(0, n_signals - 1))] = 1;
            total = 1;
        }
        std::vector<Rat> row;
        for (int w : weights) row.emplace_back(Int(w), Int(total));
        for (int state : f.block(b)) t.rows[state] = row;
    }
    t.validate(inst.state_count());
    return t;
}

// Deterministic random instance. Player partitions realize exactly the
// target CKC count: two players chain each component together with offset
// pairs, extra players refine within components, and a single player takes
// whole components as blocks. Oracles are random merge processes whose bias
// knob controls how often blocks span two components.
inline Instance generate_instance(std::uint64_t seed, GeneratorParams params = {}) {
    if (params.n_states < 1) throw ModelError("generator: n_states must be positive");
    if (params.n_states > 64)
        throw ModelError("generator: n_states exceeds the prior denominator budget");
    if (params.n_players < 1) throw ModelError("generator: n_players must be positive");
    if (params.n_ckcs_target < 1 || params.n_ckcs_target > params.n_states)
        throw ModelError("generator: n_ckcs_target must be between 1 and n_states");
    if (params.block_bias < 0 || params.block_bias > 100)
        throw ModelError("generator: block_bias must be a percentage");

    Rng rng(seed);
    const int n = params.n_states;
    const int k = params.n_ckcs_target;

    Instance inst;
    for (int i = 0; i < n; ++i) inst.space.names.push_back("w" + std::to_string(i + 1));

    // components: shuffled states dealt into k nonempty groups
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(k));
    for (int g = 0; g < k; ++g) groups[g].push_back(order[g]);
    for (int i = k; i < n; ++i) groups[static_cast<std::size_t>(rng.uniform(0, k - 1))].push_back(order[i]);

    auto chain_partition = [&](int offset) {
        std::vector<std::vector<int>> blocks;
        for (const auto& g : groups) {
            std::size_t i = 0;
            if (offset == 1 && g.size() > 1) {
                blocks.push_back({g[0]});
                i = 1;
            }
            for (; i < g.size(); i += 2) {
                if (i + 1 < g.size())
                    blocks.push_back({g[i], g[i + 1]});
                else
                    blocks.push_back({g[i]});
            }
        }
        return Partition::from_blocks(n, blocks);
    };

    if (params.n_players == 1) {
        inst.players.push_back(Partition::from_blocks(n, groups));
    } else {
        inst.players.push_back(chain_partition(0));
        inst.players.push_back(chain_partition(1));
        for (int p = 2; p < params.n_players; ++p) {
            detail::UnionFind uf(n);
            for (const auto& g : groups) {
                if (g.size() < 2) continue;
                int merges = rng.uniform(0, static_cast<int>(g.size()) - 1);
                for (int r = 0; r < merges; ++r) {
                    int a = g[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(g.size()) - 1))];
                    int b = g[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(g.size()) - 1))];
                    if (uf.find(a) != uf.find(b)) uf.unite(a, b);
                }
            }
            inst.players.push_back(uf.to_partition());
        }
    }

    Partition ckcs = compute_ckcs(n, inst.players);

    auto random_oracle = [&]() {
        detail::UnionFind uf(n);
        int rounds = rng.uniform(0, n - 1);
        for (int r = 0; r < rounds; ++r) {
            bool want_cross = rng.chance_percent(params.block_bias);
            int a = -1, b = -1;
            for (int attempt = 0; attempt < 8; ++attempt) {
                int x = rng.uniform(0, n - 1);
                int y = rng.uniform(0, n - 1);
                if (uf.find(x) == uf.find(y)) continue;
                bool cross = !ckcs.same_block(x, y);
                if (cross == want_cross) {
                    a = x;
                    b = y;
                    break;
                }
                if (a == -1) {  // fallback if the preferred kind never shows up
                    a = x;
                    b = y;
                }
            }
            if (a != -1) uf.unite(a, b);
        }
        return uf.to_partition();
    };
    inst.oracle1 = random_oracle();
    inst.oracle2 = random_oracle();

    // prior: composition of a common denominator into positive parts
    int denom = rng.uniform(n, 64);
    std::vector<int> cuts(static_cast<std::size_t>(denom - 1));
    std::iota(cuts.begin(), cuts.end(), 1);
    rng.shuffle(cuts);
    cuts.resize(static_cast<std::size_t>(n - 1));
    std::sort(cuts.begin(), cuts.end());
    int prev = 0;
    for (int i = 0; i < n; ++i) {
        int next = i + 1 < n ? cuts[static_cast<std::size_t>(i)] : denom;
        inst.space.prior.emplace_back(Int(next - prev), Int(denom));
        prev = next;
    }

    inst.validate();
    return inst;
}

}  // namespace oracle_order
