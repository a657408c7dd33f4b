#pragma once

#include "oracle_order/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oracle_order {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an enumeration outgrows its explicit budget. Callers may retry
// with a larger budget; nothing is silently pruned.
struct SizeGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A partition of {0, .., n-1}. Blocks are stored sorted by smallest member,
// members sorted ascending, so equal partitions compare equal structurally.
class Partition {
public:
    Partition() = default;

    static Partition from_blocks(int n_states, std::vector<std::vector<int>> blocks) {
        Partition p;
        p.block_of_.assign(n_states, -1);
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            if (blocks[bi].empty()) throw ModelError("partition has an empty block");
            for (int s : blocks[bi]) {
                if (s < 0 || s >= n_states) throw ModelError("partition: state out of range");
                if (p.block_of_[s] != -1) throw ModelError("partition: state in two blocks");
                p.block_of_[s] = static_cast<int>(bi);
            }
        }
        for (int s = 0; s < n_states; ++s)
            if (p.block_of_[s] == -1) throw ModelError("partition: state not covered");
        p.blocks_ = std::move(blocks);
        return p;
    }

    static Partition discrete(int n_states) {
        std::vector<std::vector<int>> blocks;
        for (int s = 0; s < n_states; ++s) blocks.push_back({s});
        return from_blocks(n_states, std::move(blocks));
    }

    static Partition trivial(int n_states) {
        std::vector<int> all(n_states);
        std::iota(all.begin(), all.end(), 0);
        return from_blocks(n_states, {all});
    }

    int state_count() const { return static_cast<int>(block_of_.size()); }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<int>& block(int b) const { return blocks_.at(b); }
    int block_index_of(int s) const { return block_of_.at(s); }
    const std::vector<int>& block_containing(int s) const { return blocks_[block_of_.at(s)]; }
    bool same_block(int a, int b) const { return block_of_.at(a) == block_of_.at(b); }

    // True when every block of *this sits inside one block of coarser.
    bool refines(const Partition& coarser) const {
        if (coarser.state_count() != state_count())
            throw ModelError("refines: mismatched state counts");
        for (const auto& b : blocks_)
            for (std::size_t i = 1; i < b.size(); ++i)
                if (!coarser.same_block(b[0], b[i])) return false;
        return true;
    }

    // Common refinement: blocks are the nonempty pairwise intersections.
    Partition join(const Partition& other) const {
        if (other.state_count() != state_count())
            throw ModelError("join: mismatched state counts");
        std::map<std::pair<int, int>, std::vector<int>> cells;
        for (int s = 0; s < state_count(); ++s)
            cells[{block_of_[s], other.block_of_[s]}].push_back(s);
        std::vector<std::vector<int>> blocks;
        for (auto& [key, members] : cells) blocks.push_back(std::move(members));
        return from_blocks(state_count(), std::move(blocks));
    }

    // Trace of the partition on a subset of states, expressed in original ids.
    std::vector<std::vector<int>> restrict_to(const std::vector<int>& subset) const {
        std::map<int, std::vector<int>> cells;
        for (int s : subset) cells[block_of_.at(s)].push_back(s);
        std::vector<std::vector<int>> out;
        for (auto& [b, members] : cells) {
            std::sort(members.begin(), members.end());
            out.push_back(std::move(members));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }
    bool operator!=(const Partition& other) const { return !(*this == other); }

private:
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

// Connected components of the "some player cannot tell the states apart"
// relation: the finest event structure every player agrees on.
inline Partition compute_ckcs(int n_states, const std::vector<Partition>& players) {
    if (players.empty()) throw ModelError("compute_ckcs: no players");
    std::vector<int> parent(n_states);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& pl : players) {
        if (pl.state_count() != n_states) throw ModelError("compute_ckcs: mismatched state counts");
        for (const auto& b : pl.blocks())
            for (std::size_t i = 1; i < b.size(); ++i) {
                int ra = find(b[0]), rb = find(b[i]);
                if (ra != rb) parent[rb] = ra;
            }
    }
    std::map<int, std::vector<int>> comps;
    for (int s = 0; s < n_states; ++s) comps[find(s)].push_back(s);
    std::vector<std::vector<int>> blocks;
    for (auto& [root, members] : comps) blocks.push_back(std::move(members));
    return Partition::from_blocks(n_states, std::move(blocks));
}

struct StateSpace {
    std::vector<std::string> names;
    std::vector<Rat> prior;

    int state_count() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < state_count(); ++i)
            if (names[i] == name) return i;
        throw ModelError("unknown state: " + name);
    }

    void validate() const {
        if (names.empty()) throw ModelError("state space is empty");
        if (prior.size() != names.size()) throw ModelError("prior size mismatch");
        Rat total = 0;
        for (const Rat& p : prior) {
            if (p <= 0) throw ModelError("prior must be strictly positive");
            total += p;
        }
        if (total != 1) throw ModelError("prior must sum to 1, got " + format_rational(total));
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j]) throw ModelError("duplicate state name: " + names[i]);
    }
};

// Row-stochastic emission table over named signals. rows[state][signal].
struct SignalingStrategy {
    std::vector<std::string> signals;
    std::vector<std::vector<Rat>> rows;

    int signal_count() const { return static_cast<int>(signals.size()); }
    int state_count() const { return static_cast<int>(rows.size()); }

    int signal_index(const std::string& name) const {
        for (int i = 0; i < signal_count(); ++i)
            if (signals[i] == name) return i;
        throw ModelError("unknown signal: " + name);
    }

    void validate(int n_states) const {
        if (state_count() != n_states) throw ModelError("strategy row count mismatch");
        if (signals.empty()) throw ModelError("strategy has no signals");
        for (std::size_t i = 0; i < signals.size(); ++i)
            for (std::size_t j = i + 1; j < signals.size(); ++j)
                if (signals[i] == signals[j]) throw ModelError("duplicate signal name: " + signals[i]);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != signal_count())
                throw ModelError("strategy row width mismatch");
            Rat total = 0;
            for (const Rat& x : row) {
                if (x < 0) throw ModelError("negative emission probability");
                total += x;
            }
            if (total != 1) throw ModelError("strategy row must sum to 1, got " + format_rational(total));
        }
    }

    bool is_measurable(const Partition& f) const {
        for (const auto& b : f.blocks())
            for (std::size_t i = 1; i < b.size(); ++i)
                if (rows[b[i]] != rows[b[0]]) return false;
        return true;
    }
};

struct Instance {
    StateSpace space;
    std::vector<Partition> players;
    Partition oracle1;
    Partition oracle2;
    std::map<std::string, SignalingStrategy> strategies;

    int state_count() const { return space.state_count(); }

    Partition ckcs() const { return compute_ckcs(state_count(), players); }

    void validate() const {
        space.validate();
        if (players.empty()) throw ModelError("instance has no players");
        for (const auto& pl : players)
            if (pl.state_count() != state_count()) throw ModelError("player partition size mismatch");
        if (oracle1.state_count() != state_count() || oracle2.state_count() != state_count())
            throw ModelError("oracle partition size mismatch");
        for (const auto& [name, t] : strategies) t.validate(state_count());
    }
};

// One belief per player: sparse (state, probability) rows, positive entries
// only, sorted by state. Compared structurally, so exact rational equality.
struct PosteriorProfile {
    std::vector<std::vector<std::pair<int, Rat>>> beliefs;

    bool operator==(const PosteriorProfile& o) const { return beliefs == o.beliefs; }

    bool operator<(const PosteriorProfile& o) const {
        if (beliefs.size() != o.beliefs.size()) return beliefs.size() < o.beliefs.size();
        for (std::size_t p = 0; p < beliefs.size(); ++p) {
            const auto& a = beliefs[p];
            const auto& b = o.beliefs[p];
            if (a.size() != b.size()) return a.size() < b.size();
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i].first != b[i].first) return a[i].first < b[i].first;
                int c = compare(a[i].second, b[i].second);
                if (c != 0) return c < 0;
            }
        }
        return false;
    }
};

using PosteriorDistribution = std::map<PosteriorProfile, Rat>;

// Belief of every player after observing private information at w and the
// public signal s. Requires (w, s) to have positive probability under t.
inline PosteriorProfile posterior_profile(const Instance& inst, const SignalingStrategy& t,
                                          int w, int s) {
    if (t.rows.at(w).at(s) == 0)
        throw ModelError("posterior_profile: zero-probability state/signal pair");
    PosteriorProfile profile;
    profile.beliefs.reserve(inst.players.size());
    for (const auto& player : inst.players) {
        const auto& block = player.block_containing(w);
        Rat total = 0;
        std::vector<std::pair<int, Rat>> belief;
        for (int v : block) {
            Rat mass = inst.space.prior[v] * t.rows[v][s];
            if (mass > 0) belief.emplace_back(v, mass);
            total += mass;
        }
        for (auto& [v, mass] : belief) mass /= total;
        profile.beliefs.push_back(std::move(belief));
    }
    return profile;
}

// Probability of each realized profile; values sum to 1 and are positive.
inline PosteriorDistribution posterior_distribution(const Instance& inst,
                                                    const SignalingStrategy& t) {
    PosteriorDistribution dist;
    for (int w = 0; w < inst.state_count(); ++w)
        for (int s = 0; s < t.signal_count(); ++s) {
            Rat mass = inst.space.prior[w] * t.rows[w][s];
            if (mass == 0) continue;
            dist[posterior_profile(inst, t, w, s)] += mass;
        }
    return dist;
}

}  // namespace oracle_order
