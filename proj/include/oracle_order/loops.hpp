#pragma once

#include "oracle_order/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle_order {

// A cyclic sequence of in-component state pairs (w_j, wbar_j), linked through
// the oracle partition f: the successor's w lies in the same f block as the
// predecessor's wbar. Pairs are stored in traversal order.
struct Loop {
    std::vector<std::pair<int, int>> pairs;

    int pair_count() const { return static_cast<int>(pairs.size()); }

    std::vector<int> state_seq() const {
        std::vector<int> seq;
        seq.reserve(pairs.size() * 2);
        for (auto [w, wb] : pairs) {
            seq.push_back(w);
            seq.push_back(wb);
        }
        return seq;
    }

    bool operator==(const Loop& o) const { return pairs == o.pairs; }
    bool operator<(const Loop& o) const { return pairs < o.pairs; }
};

// Checks the four loop conditions. Throws ModelError describing the first
// violation: same-component distinct pairs, f-linking, consecutive components
// distinct, pairwise-disjoint links. Distinctness of all 2m states follows
// from those conditions and is asserted as well.
inline void validate_loop(const Loop& loop, const Partition& f, const Partition& ckcs) {
    const int m = loop.pair_count();
    if (m < 2) throw ModelError("loop needs at least two pairs");
    for (auto [w, wb] : loop.pairs) {
        if (w == wb) throw ModelError("loop pair repeats a state");
        if (!ckcs.same_block(w, wb)) throw ModelError("loop pair spans two components");
    }
    for (int j = 0; j < m; ++j) {
        auto [w, wb] = loop.pairs[j];
        auto [wn, wbn] = loop.pairs[(j + 1) % m];
        if (!f.same_block(wb, wn)) throw ModelError("consecutive pairs not linked by the oracle");
        if (ckcs.same_block(w, wn)) throw ModelError("consecutive pairs share a component");
    }
    std::set<int> seen;
    for (auto [w, wb] : loop.pairs) {
        // distinct states imply pairwise-disjoint link sets here and vice versa
        if (!seen.insert(w).second || !seen.insert(wb).second)
            throw ModelError("loop states are not pairwise distinct");
    }
}

inline bool is_valid_loop(const Loop& loop, const Partition& f, const Partition& ckcs) {
    try {
        validate_loop(loop, f, ckcs);
        return true;
    } catch (const ModelError&) {
        return false;
    }
}

// A loop equals any of its rotations, and its reversal traverses the same
// cycle with pair roles swapped. The canonical form is the lexicographically
// least flattened state sequence over all 2m such representatives.
inline Loop canonical_loop(const Loop& loop) {
    const int m = loop.pair_count();
    std::vector<std::pair<int, int>> best = loop.pairs;
    auto flat = [](const std::vector<std::pair<int, int>>& pairs) {
        std::vector<int> seq;
        for (auto [w, wb] : pairs) {
            seq.push_back(w);
            seq.push_back(wb);
        }
        return seq;
    };
    std::vector<int> best_seq = flat(best);
    for (int orient = 0; orient < 2; ++orient) {
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, int>> cand;
            cand.reserve(m);
            for (int k = 0; k < m; ++k) {
                if (orient == 0) {
                    cand.push_back(loop.pairs[(r + k) % m]);
                } else {
                    auto [w, wb] = loop.pairs[((r - k) % m + m) % m];
                    cand.emplace_back(wb, w);
                }
            }
            std::vector<int> seq = flat(cand);
            if (seq < best_seq) {
                best_seq = std::move(seq);
                best = std::move(cand);
            }
        }
    }
    return Loop{std::move(best)};
}

struct LoopBudget {
    int max_pairs = 0;             // 0 means unbounded (limited by state count)
    std::uint64_t max_steps = 50'000'000;
    std::size_t max_loops = 1'000'000;
};

namespace detail {

struct LoopSearch {
    const Partition& f;
    const Partition& ckcs;
    const std::vector<char>& allowed;
    LoopBudget budget;
    std::uint64_t steps = 0;
    std::set<std::vector<std::pair<int, int>>> found;
    std::vector<std::pair<int, int>> current;
    std::vector<char> used;

    LoopSearch(const Partition& f_, const Partition& ckcs_, const std::vector<char>& allowed_,
               LoopBudget budget_)
        : f(f_), ckcs(ckcs_), allowed(allowed_), budget(budget_), used(f_.state_count(), 0) {}

    void tick() {
        if (++steps > budget.max_steps)
            throw SizeGuardError("loop enumeration size guard exceeded");
    }

    void close_or_extend(int first_w) {
        tick();
        const auto [lw, lwb] = current.back();
        const int m = static_cast<int>(current.size());
        if (m >= 2 && f.same_block(lwb, first_w) && !ckcs.same_block(lw, first_w)) {
            Loop canon = canonical_loop(Loop{current});
            if (found.size() >= budget.max_loops)
                throw SizeGuardError("loop enumeration size guard exceeded");
            found.insert(std::move(canon.pairs));
        }
        if (budget.max_pairs > 0 && m >= budget.max_pairs) return;
        // next pair starts in the f block of the last wbar, in a fresh component
        for (int w : f.block_containing(lwb)) {
            if (!allowed[w] || used[w] || w < first_w) continue;
            if (ckcs.same_block(w, lw)) continue;
            for (int wb : ckcs.block_containing(w)) {
                if (!allowed[wb] || used[wb] || wb < first_w || wb == w) continue;
                used[w] = used[wb] = 1;
                current.emplace_back(w, wb);
                close_or_extend(first_w);
                current.pop_back();
                used[w] = used[wb] = 0;
            }
        }
    }

    void run() {
        const int n = f.state_count();
        // anchor the search at the loop's minimal state in the orientation
        // where that state plays the w role, so each loop is built once
        for (int w = 0; w < n; ++w) {
            if (!allowed[w]) continue;
            for (int wb : ckcs.block_containing(w)) {
                if (!allowed[wb] || wb <= w) continue;  // wb > w since w is minimal
                used[w] = used[wb] = 1;
                current.emplace_back(w, wb);
                close_or_extend(w);
                current.pop_back();
                used[w] = used[wb] = 0;
            }
        }
    }
};

}  // namespace detail

// All loops of the partition f, in canonical form, sorted. `universe`, when
// given, restricts the search to a subset of states (used for subloop
// questions). Exhaustive by construction; throws SizeGuardError rather than
// silently pruning when the budget runs out.
inline std::vector<Loop> enumerate_loops(const Partition& f, const Partition& ckcs,
                                         LoopBudget budget = {},
                                         const std::vector<int>* universe = nullptr) {
    std::vector<char> allowed(f.state_count(), universe ? 0 : 1);
    if (universe)
        for (int s : *universe) allowed.at(s) = 1;
    detail::LoopSearch search(f, ckcs, allowed, budget);
    search.run();
    std::vector<Loop> out;
    out.reserve(search.found.size());
    for (const auto& pairs : search.found) out.push_back(Loop{pairs});
    return out;
}

enum class Informativeness { NonInformative, FullyInformative, Mixed };

struct InformativenessReport {
    Informativeness kind;
    std::vector<bool> informative_pair;  // per pair: fk separates w from wbar
};

inline InformativenessReport classify_informativeness(const Loop& loop, const Partition& fk) {
    InformativenessReport report;
    int informative = 0;
    for (auto [w, wb] : loop.pairs) {
        bool sep = !fk.same_block(w, wb);
        report.informative_pair.push_back(sep);
        informative += sep;
    }
    if (informative == 0)
        report.kind = Informativeness::NonInformative;
    else if (informative == loop.pair_count())
        report.kind = Informativeness::FullyInformative;
    else
        report.kind = Informativeness::Mixed;
    return report;
}

// Per-block tallies of w entries vs wbar entries under g. The loop is
// g-balanced exactly when every block receives equally many of each, which
// matches the bipartition transition-count definition.
inline std::map<int, std::pair<int, int>> balance_counts(const Loop& loop, const Partition& g) {
    std::map<int, std::pair<int, int>> counts;
    for (auto [w, wb] : loop.pairs) {
        counts[g.block_index_of(w)].first += 1;
        counts[g.block_index_of(wb)].second += 1;
    }
    return counts;
}

inline bool is_balanced(const Loop& loop, const Partition& g) {
    for (const auto& [block, wc] : balance_counts(loop, g))
        if (wc.first != wc.second) return false;
    return true;
}

// A cover splits the loop's pairs into the fixed set J of pairs g cannot
// separate and a family of g-subloops over the rest, each subloop reusing
// pairs exactly as they appear in the loop.
struct Cover {
    std::vector<int> j_set;                    // pair indices with w in g(wbar)
    std::vector<std::vector<int>> subloops;    // pair-index cycles, in traversal order
};

// A subloop keeps the covered loop's cyclic pair order when its index cycle,
// started at its smallest member, is strictly increasing.
inline bool subloop_order_preserving(const std::vector<int>& cycle) {
    int min_pos = 0;
    for (std::size_t i = 1; i < cycle.size(); ++i)
        if (cycle[i] < cycle[min_pos]) min_pos = static_cast<int>(i);
    for (std::size_t k = 1; k < cycle.size(); ++k) {
        int prev = cycle[(min_pos + k - 1) % cycle.size()];
        int cur = cycle[(min_pos + k) % cycle.size()];
        if (cur < prev) return false;
    }
    return true;
}

inline bool cover_order_preserving(const Cover& cover) {
    for (const auto& cyc : cover.subloops)
        if (!subloop_order_preserving(cyc)) return false;
    return true;
}

namespace detail {

struct CoverSearch {
    const Loop& loop;
    const Partition& g;
    const Partition& ckcs;
    std::vector<int> rest;
    std::vector<char> used;
    std::vector<std::vector<int>> subloops;

    bool linked(int a, int b) const {
        return g.same_block(loop.pairs[a].second, loop.pairs[b].first) &&
               !ckcs.same_block(loop.pairs[a].first, loop.pairs[b].first);
    }

    bool cover_rest(std::size_t done) {
        if (done == rest.size()) return true;
        // deterministic: every subloop starts at the smallest unused pair
        int start = -1;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (!used[i]) {
                start = static_cast<int>(i);
                break;
            }
        used[start] = 1;
        subloops.push_back({rest[start]});
        bool ok = extend(done + 1, start);
        if (!ok) {
            subloops.pop_back();
            used[start] = 0;
        }
        return ok;
    }

    bool extend(std::size_t done, int start) {
        auto& cyc = subloops.back();
        int last_idx = cyc.back();
        if (cyc.size() >= 2 && linked(last_idx, rest[start])) {
            if (cover_rest(done)) return true;
        }
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (used[i] || !linked(last_idx, rest[i])) continue;
            used[i] = 1;
            cyc.push_back(rest[i]);
            if (extend(done + 1, start)) return true;
            cyc.pop_back();
            used[i] = 0;
        }
        return false;
    }
};

}  // namespace detail

inline std::optional<Cover> find_cover(const Loop& loop, const Partition& g,
                                       const Partition& ckcs) {
    Cover cover;
    std::vector<int> rest;
    for (int j = 0; j < loop.pair_count(); ++j) {
        if (g.same_block(loop.pairs[j].first, loop.pairs[j].second))
            cover.j_set.push_back(j);
        else
            rest.push_back(j);
    }
    detail::CoverSearch search{loop, g, ckcs, std::move(rest),
                               std::vector<char>(loop.pair_count(), 0), {}};
    if (!search.cover_rest(0)) return std::nullopt;
    cover.subloops = std::move(search.subloops);
    return cover;
}

inline bool ckc_revisited(const Loop& loop, const Partition& ckcs) {
    std::set<int> seen;
    for (auto [w, wb] : loop.pairs)
        if (!seen.insert(ckcs.block_index_of(w)).second) return true;
    return false;
}

inline int max_states_per_block(const Loop& loop, const Partition& f) {
    std::map<int, int> counts;
    int best = 0;
    for (int s : loop.state_seq()) best = std::max(best, ++counts[f.block_index_of(s)]);
    return best;
}

// No strict subset of the loop's states forms an f-loop. Two-pair loops are
// minimal, hence irreducible. Larger loops are irreducible exactly when no
// component repeats and no f block holds four or more loop states: a repeat
// splits the loop directly, and a crowded block holds two disjoint links
// whose cross-connection shortcuts the cycle.
inline bool is_irreducible(const Loop& loop, const Partition& f, const Partition& ckcs) {
    if (loop.pair_count() == 2) return true;
    return !ckc_revisited(loop, ckcs) && max_states_per_block(loop, f) < 4;
}

// Weaker notion keyed only to block crowding: components may repeat.
inline bool is_type2_irreducible(const Loop& loop, const Partition& f) {
    return max_states_per_block(loop, f) < 4;
}

namespace detail {

// Split a loop at a repeated component: pairs l1 < l2 share a component and
// cannot be cyclically adjacent. Both halves keep their original links; the
// cut pairs are re-paired across the halves.
inline std::pair<Loop, Loop> split_at_revisit(const Loop& loop, int l1, int l2) {
    const int m = loop.pair_count();
    Loop first, second;
    for (int j = 0; j < l1; ++j) first.pairs.push_back(loop.pairs[j]);
    first.pairs.emplace_back(loop.pairs[l1].first, loop.pairs[l2].second);
    for (int j = l2 + 1; j < m; ++j) first.pairs.push_back(loop.pairs[j]);
    second.pairs.emplace_back(loop.pairs[l2].first, loop.pairs[l1].second);
    for (int j = l1 + 1; j < l2; ++j) second.pairs.push_back(loop.pairs[j]);
    return {std::move(first), std::move(second)};
}

}  // namespace detail

// Extracts a fully-informative subloop from a loop with at least one
// informative pair: repeatedly split repeated components, then drop the
// pairs f cannot separate. Falls back to an exhaustive search over the
// loop's states when the splitting route dead-ends, and returns nullopt only
// when no fully-informative loop exists on those states at all.
inline std::optional<Loop> fully_informative_subloop(const Loop& loop, const Partition& f,
                                                     const Partition& ckcs) {
    auto report = classify_informativeness(loop, f);
    if (report.kind == Informativeness::NonInformative) return std::nullopt;
    if (report.kind == Informativeness::FullyInformative) return canonical_loop(loop);

    if (!ckc_revisited(loop, ckcs)) {
        Loop pruned;
        for (int j = 0; j < loop.pair_count(); ++j)
            if (report.informative_pair[j]) pruned.pairs.push_back(loop.pairs[j]);
        if (pruned.pair_count() >= 2 && is_valid_loop(pruned, f, ckcs))
            return canonical_loop(pruned);
    } else {
        const int m = loop.pair_count();
        for (int l1 = 0; l1 < m; ++l1)
            for (int l2 = l1 + 1; l2 < m; ++l2) {
                if (!ckcs.same_block(loop.pairs[l1].first, loop.pairs[l2].first)) continue;
                auto [a, b] = detail::split_at_revisit(loop, l1, l2);
                for (Loop* side : {&a, &b}) {
                    if (side->pair_count() < 2 || !is_valid_loop(*side, f, ckcs)) continue;
                    if (classify_informativeness(*side, f).kind == Informativeness::NonInformative)
                        continue;
                    if (auto sub = fully_informative_subloop(*side, f, ckcs)) return sub;
                }
            }
    }

    // The splitting route can lose every informative pair when the repeated
    // components interleave badly; search the loop's states directly before
    // concluding anything.
    std::vector<int> universe = loop.state_seq();
    for (const Loop& cand : enumerate_loops(f, ckcs, {}, &universe))
        if (classify_informativeness(cand, f).kind == Informativeness::FullyInformative)
            return cand;
    return std::nullopt;
}

// Splits a loop into type-2 irreducible parts without disturbing any pair:
// when two links land in one f block, the cycle closes through that block in
// two shorter cycles over the same pairs. Backtracks over the choice of
// block and link pair; returns nullopt when no choice yields valid halves.
inline std::optional<std::vector<Loop>> decompose_type2(const Loop& loop, const Partition& f,
                                                        const Partition& ckcs) {
    // parts keep their pairs verbatim so the union of output pairs is the input
    if (is_type2_irreducible(loop, f)) return std::vector<Loop>{loop};
    const int m = loop.pair_count();
    auto take = [&](int from, int to) {  // pairs from..to cyclically, inclusive
        Loop part;
        for (int k = from;; k = (k + 1) % m) {
            part.pairs.push_back(loop.pairs[k]);
            if (k == to) break;
        }
        return part;
    };
    for (int j = 0; j < m; ++j)
        for (int l = j + 1; l < m; ++l) {
            // links j and l live in the same f block
            if (!f.same_block(loop.pairs[j].second, loop.pairs[l].second)) continue;
            Loop side1 = take((j + 1) % m, l);
            Loop side2 = take((l + 1) % m, j);
            if (side1.pair_count() < 2 || side2.pair_count() < 2) continue;
            if (!is_valid_loop(side1, f, ckcs) || !is_valid_loop(side2, f, ckcs)) continue;
            auto d1 = decompose_type2(side1, f, ckcs);
            if (!d1) continue;
            auto d2 = decompose_type2(side2, f, ckcs);
            if (!d2) continue;
            d1->insert(d1->end(), d2->begin(), d2->end());
            return d1;
        }
    return std::nullopt;
}

struct ClusterReport {
    std::vector<std::vector<int>> clusters;  // each: sorted CKC block indices
    std::vector<int> unclustered_ckcs;       // CKC block indices in no cluster
};

// Clusters are the transitive closure of "two type-2 irreducible f-loops
// touch a common component", collected as component index sets.
inline ClusterReport compute_clusters(const Partition& f, const Partition& ckcs,
                                      LoopBudget budget = {}) {
    std::vector<Loop> loops = enumerate_loops(f, ckcs, budget);
    std::vector<std::set<int>> touched;
    for (const Loop& loop : loops) {
        if (!is_type2_irreducible(loop, f)) continue;
        std::set<int> comps;
        for (auto [w, wb] : loop.pairs) comps.insert(ckcs.block_index_of(w));
        touched.push_back(std::move(comps));
    }
    // union-find over CKCs seeded by each loop's component set
    std::vector<int> parent(ckcs.block_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<char> in_any(ckcs.block_count(), 0);
    for (const auto& comps : touched) {
        int first = *comps.begin();
        for (int c : comps) {
            in_any[c] = 1;
            int ra = find(first), rb = find(c);
            if (ra != rb) parent[rb] = ra;
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int c = 0; c < ckcs.block_count(); ++c)
        if (in_any[c]) groups[find(c)].push_back(c);
    ClusterReport report;
    for (auto& [root, members] : groups) report.clusters.push_back(std::move(members));
    for (int c = 0; c < ckcs.block_count(); ++c)
        if (!in_any[c]) report.unclustered_ckcs.push_back(c);
    return report;
}

}  // namespace oracle_order
