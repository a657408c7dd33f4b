#pragma once

#include "oracle_order/feasibility.hpp"
#include "oracle_order/loops.hpp"
#include "oracle_order/model.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle_order {

// ---------------------------------------------------------------------------
// Mimicry. Oracle 1 mimics tau2 when some F1-measurable tau1 induces exactly
// the same distribution over posterior profiles. The search space collapses
// because a signal's emission pattern, restricted to one CKC, is pinned up to
// scale by the profiles it induces:
//
//   * profile p pins the pattern on every player block it touches,
//     proportionally to the posterior itself;
//   * a connected admissible pattern ("bundle") is therefore one rational
//     vector up to scale, and a CKC has finitely many bundles;
//   * F1-measurability couples bundles across CKCs ("types"): any F1 block
//     touching a signal's support must be covered at one constant emission
//     value, which ties the bundle scales together and closes the support;
//   * a full signal is a set of mutually non-interfering types, and only the
//     total weight per type matters for the induced distribution.
//
// Mimicry then reduces to exact rational feasibility over type weights, and
// a signal-count cap to covering the active types with few compatible sets.
// ---------------------------------------------------------------------------

struct MimicBudget {
    std::uint64_t max_steps = 5'000'000;    // bundle/type search nodes
    std::size_t max_bundles = 20'000;
    std::size_t max_types = 20'000;
    std::uint64_t max_clique_subsets = 2'000'000;
};

enum class MimicOutcome { Feasible, Infeasible };

struct MimicStats {
    std::size_t profiles = 0;
    std::size_t bundles = 0;
    std::size_t types = 0;
    std::size_t maximal_cliques = 0;
    std::uint64_t lp_pivots = 0;
};

struct MimicResult {
    MimicOutcome outcome;
    std::optional<SignalingStrategy> tau1;
    MimicStats stats;
};

inline bool verify_mimic(const Instance& inst, const SignalingStrategy& t1,
                         const SignalingStrategy& t2) {
    try {
        t1.validate(inst.state_count());
        t2.validate(inst.state_count());
    } catch (const ModelError&) {
        return false;
    }
    if (!t1.is_measurable(inst.oracle1)) return false;
    return posterior_distribution(inst, t1) == posterior_distribution(inst, t2);
}

namespace detail {

// A profile pins emission mass (prior times emission probability) on every
// player block it touches, anchored so the profile's first jointly-supported
// state carries mass 1.
struct ProfilePin {
    int ckc = -1;
    std::vector<int> player_block;   // per player, block index in that player's partition
    std::vector<int> core;           // states every player deems possible, sorted
    std::map<int, Rat> mass;         // pinned mass over the union of touched blocks
};

struct Bundle {
    int ckc = -1;
    std::vector<int> support;        // positive states, sorted
    std::map<int, Rat> mass;         // positive entries only, normalized to sum 1
    std::map<int, int> induced;      // supported state -> profile id
    std::map<int, Rat> profile_mass; // profile id -> mass it carries

    Rat rate(int w, const std::vector<Rat>& prior) const { return mass.at(w) / prior[w]; }
};

struct MimicType {
    std::vector<int> bundle_ids;     // sorted
    std::vector<Rat> scales;         // parallel, smallest bundle id scaled to 1
    std::vector<int> support;        // union of supports, sorted
    std::map<int, Rat> rate;         // emission value per supported state
    std::map<int, Rat> profile_coef; // profile id -> scaled mass contribution
};

}  // namespace detail

class MimicProblem {
public:
    MimicProblem(const Instance& inst, const Partition& f1, const SignalingStrategy& t2,
                 MimicBudget budget = {})
        : inst_(inst), f1_(f1), t2_(t2), ckcs_(inst.ckcs()), budget_(budget) {
        t2_.validate(inst_.state_count());
        if (!t2_.is_measurable(inst_.oracle2))
            throw ModelError("mimic: strategy is not measurable for oracle 2");
        build_profiles();
        build_bundles();
        build_types();
    }

    const std::vector<PosteriorProfile>& profiles() const { return profiles_; }
    const std::vector<Rat>& profile_prob() const { return profile_prob_; }
    const std::vector<detail::ProfilePin>& pins() const { return pins_; }
    const std::vector<detail::Bundle>& bundles() const { return bundles_; }
    const std::vector<detail::MimicType>& types() const { return types_; }
    const Partition& ckcs() const { return ckcs_; }

    // Posterior profile induced at state w by an arbitrary emission pattern
    // (values need not be probabilities; only ratios within blocks matter).
    PosteriorProfile profile_at(const std::map<int, Rat>& pattern, int w) const {
        PosteriorProfile profile;
        for (const auto& player : inst_.players) {
            Rat total = 0;
            std::vector<std::pair<int, Rat>> belief;
            for (int v : player.block_containing(w)) {
                auto it = pattern.find(v);
                if (it == pattern.end() || it->second == 0) continue;
                belief.emplace_back(v, it->second);
                total += it->second;
            }
            for (auto& [v, x] : belief) x /= total;
            profile.beliefs.push_back(std::move(belief));
        }
        return profile;
    }

    // Exact feasibility of mimicry restricted to a subset of types. Columns
    // are type weights; rows demand the target profile distribution and unit
    // emission mass at every state.
    std::optional<std::vector<Rat>> solve_weights(const std::vector<int>& type_ids,
                                                  std::uint64_t* pivots = nullptr) const {
        const std::size_t cols = type_ids.size();
        std::vector<std::vector<Rat>> a;
        std::vector<Rat> b;
        for (std::size_t pid = 0; pid < profiles_.size(); ++pid) {
            std::vector<Rat> row(cols, Rat(0));
            for (std::size_t c = 0; c < cols; ++c) {
                const auto& coef = types_[type_ids[c]].profile_coef;
                auto it = coef.find(static_cast<int>(pid));
                if (it != coef.end()) row[c] = it->second;
            }
            a.push_back(std::move(row));
            b.push_back(profile_prob_[pid]);
        }
        for (int w = 0; w < inst_.state_count(); ++w) {
            std::vector<Rat> row(cols, Rat(0));
            for (std::size_t c = 0; c < cols; ++c) {
                const auto& rate = types_[type_ids[c]].rate;
                auto it = rate.find(w);
                if (it != rate.end()) row[c] = it->second;
            }
            a.push_back(std::move(row));
            b.push_back(Rat(1));
        }
        auto result = solve_equality_nonnegative(std::move(a), std::move(b));
        if (pivots) *pivots += result.pivots;
        return result.solution;
    }

    // Two types can share one signal when no player block (hence no F1 block
    // either, since type supports are unions of whole F1 blocks) touches both
    // supports within any CKC.
    bool compatible(int ta, int tb) const {
        const auto& a = types_[ta];
        const auto& b = types_[tb];
        for (int wa : a.support)
            for (int wb : b.support) {
                if (!ckcs_.same_block(wa, wb)) continue;
                if (wa == wb) return false;
                for (const auto& player : inst_.players)
                    if (player.same_block(wa, wb)) return false;
            }
        return true;
    }

    MimicResult search(std::optional<int> max_signals) {
        MimicResult result;
        result.stats.profiles = profiles_.size();
        result.stats.bundles = bundles_.size();
        result.stats.types = types_.size();

        std::vector<int> all(types_.size());
        std::iota(all.begin(), all.end(), 0);
        auto weights = solve_weights(all, &result.stats.lp_pivots);
        if (!weights) {
            result.outcome = MimicOutcome::Infeasible;
            return result;
        }

        std::vector<int> active;
        for (std::size_t t = 0; t < weights->size(); ++t)
            if ((*weights)[t] > 0) active.push_back(static_cast<int>(t));

        if (!max_signals) {
            result.outcome = MimicOutcome::Feasible;
            result.tau1 = emit(all, *weights, nullptr);
            return result;
        }

        const int cap = *max_signals;
        if (static_cast<int>(active.size()) <= cap) {
            result.outcome = MimicOutcome::Feasible;
            result.tau1 = emit(all, *weights, nullptr);
            return result;
        }

        auto cliques = maximal_cliques();
        result.stats.maximal_cliques = cliques.size();
        if (static_cast<int>(cliques.size()) <= cap) {
            result.outcome = MimicOutcome::Feasible;
            result.tau1 = emit(all, *weights, &cliques);
            return result;
        }

        // lexicographically first feasible K-subset of maximal cliques
        std::vector<int> pick(cap);
        std::uint64_t tried = 0;
        auto try_subsets = [&](auto&& self, int start, int depth) -> bool {
            if (depth == cap) {
                if (++tried > budget_.max_clique_subsets)
                    throw SizeGuardError("mimic clique search size guard exceeded");
                std::set<int> union_ids;
                for (int ci : pick)
                    union_ids.insert(cliques[ci].begin(), cliques[ci].end());
                std::vector<int> ids(union_ids.begin(), union_ids.end());
                auto w = solve_weights(ids, &result.stats.lp_pivots);
                if (!w) return false;
                std::vector<std::vector<int>> chosen;
                for (int ci : pick) chosen.push_back(cliques[ci]);
                std::vector<Rat> full(types_.size(), Rat(0));
                for (std::size_t c = 0; c < ids.size(); ++c) full[ids[c]] = (*w)[c];
                result.outcome = MimicOutcome::Feasible;
                result.tau1 = emit(all, full, &chosen);
                return true;
            }
            for (int c = start; c < static_cast<int>(cliques.size()); ++c) {
                pick[depth] = c;
                if (self(self, c + 1, depth + 1)) return true;
            }
            return false;
        };
        if (try_subsets(try_subsets, 0, 0)) return result;
        result.outcome = MimicOutcome::Infeasible;
        return result;
    }

private:
    const Instance& inst_;
    const Partition& f1_;
    SignalingStrategy t2_;
    Partition ckcs_;
    MimicBudget budget_;
    std::uint64_t steps_ = 0;

    std::vector<PosteriorProfile> profiles_;
    std::vector<Rat> profile_prob_;
    std::vector<detail::ProfilePin> pins_;
    std::map<int, std::vector<int>> profiles_by_core_state_;  // state -> profile ids
    std::vector<detail::Bundle> bundles_;
    std::map<int, std::vector<int>> bundles_by_state_;        // state -> bundle ids
    std::vector<detail::MimicType> types_;

    void tick() {
        if (++steps_ > budget_.max_steps)
            throw SizeGuardError("mimic search size guard exceeded");
    }

    void build_profiles() {
        PosteriorDistribution dist = posterior_distribution(inst_, t2_);
        for (auto& [profile, prob] : dist) {
            profiles_.push_back(profile);
            profile_prob_.push_back(prob);
        }
        for (std::size_t pid = 0; pid < profiles_.size(); ++pid) {
            const PosteriorProfile& p = profiles_[pid];
            detail::ProfilePin pin;
            pin.ckc = ckcs_.block_index_of(p.beliefs.at(0).at(0).first);

            std::set<int> core;
            bool first_player = true;
            for (std::size_t i = 0; i < inst_.players.size(); ++i) {
                const auto& belief = p.beliefs[i];
                pin.player_block.push_back(inst_.players[i].block_index_of(belief[0].first));
                std::set<int> supp;
                for (const auto& [w, x] : belief) supp.insert(w);
                if (first_player) {
                    core = std::move(supp);
                    first_player = false;
                } else {
                    std::set<int> inter;
                    for (int w : core)
                        if (supp.count(w)) inter.insert(w);
                    core = std::move(inter);
                }
            }
            pin.core.assign(core.begin(), core.end());
            const int anchor = pin.core.front();

            for (std::size_t i = 0; i < inst_.players.size(); ++i) {
                const auto& belief = p.beliefs[i];
                Rat at_anchor;
                for (const auto& [w, x] : belief)
                    if (w == anchor) at_anchor = x;
                const auto& block = inst_.players[i].block(pin.player_block[i]);
                std::map<int, Rat> values;
                for (const auto& [w, x] : belief) values[w] = x;
                for (int w : block) {
                    Rat m = values.count(w) ? values[w] / at_anchor : Rat(0);
                    auto it = pin.mass.find(w);
                    if (it == pin.mass.end())
                        pin.mass[w] = m;
                    else if (it->second != m)
                        throw ModelError("inconsistent posterior profile pin");
                }
            }
            for (int w : pin.core) profiles_by_core_state_[w].push_back(static_cast<int>(pid));
            pins_.push_back(std::move(pin));
        }
    }

    // Grow every admissible connected pattern from every profile seed. The
    // pattern map holds pinned masses including explicit zeros; positive
    // states must each be assigned the profile they induce, which pins more.
    void build_bundles() {
        std::set<std::vector<std::pair<int, Rat>>> seen;
        for (std::size_t pid = 0; pid < profiles_.size(); ++pid) {
            std::map<int, Rat> pattern;
            std::map<int, int> induced;
            if (!pin_profile(pattern, induced, static_cast<int>(pid), Rat(1))) continue;
            grow_bundle(pattern, induced, seen);
        }
        for (std::size_t b = 0; b < bundles_.size(); ++b)
            for (int w : bundles_[b].support) bundles_by_state_[w].push_back(static_cast<int>(b));
    }

    bool pin_profile(std::map<int, Rat>& pattern, std::map<int, int>& induced, int pid,
                     const Rat& factor) {
        const detail::ProfilePin& pin = pins_[pid];
        for (const auto& [w, m] : pin.mass) {
            Rat target = m * factor;
            auto it = pattern.find(w);
            if (it == pattern.end())
                pattern[w] = target;
            else if (it->second != target)
                return false;
        }
        for (int w : pin.core) {
            auto it = induced.find(w);
            if (it != induced.end() && it->second != pid) return false;
            induced[w] = pid;
        }
        return true;
    }

    void grow_bundle(std::map<int, Rat>& pattern, std::map<int, int>& induced,
                     std::set<std::vector<std::pair<int, Rat>>>& seen) {
        tick();
        int next = -1;
        for (const auto& [w, m] : pattern)
            if (m > 0 && !induced.count(w)) {
                next = w;
                break;
            }
        if (next == -1) {
            record_bundle(pattern, induced, seen);
            return;
        }
        auto it = profiles_by_core_state_.find(next);
        if (it == profiles_by_core_state_.end()) return;  // no admissible continuation
        for (int pid : it->second) {
            // candidate profile must match every player block at this state
            bool block_match = true;
            for (std::size_t i = 0; i < inst_.players.size() && block_match; ++i)
                block_match = pins_[pid].player_block[i] ==
                              inst_.players[i].block_index_of(next);
            if (!block_match) continue;
            std::map<int, Rat> pattern2 = pattern;
            std::map<int, int> induced2 = induced;
            Rat factor = pattern.at(next) / pins_[pid].mass.at(next);
            if (!pin_profile(pattern2, induced2, pid, factor)) continue;
            grow_bundle(pattern2, induced2, seen);
        }
    }

    void record_bundle(const std::map<int, Rat>& pattern, const std::map<int, int>& induced,
                       std::set<std::vector<std::pair<int, Rat>>>& seen) {
        Rat total = 0;
        for (const auto& [w, m] : pattern) total += m;
        std::vector<std::pair<int, Rat>> key;
        for (const auto& [w, m] : pattern)
            if (m > 0) key.emplace_back(w, m / total);
        if (!seen.insert(key).second) return;
        if (bundles_.size() >= budget_.max_bundles)
            throw SizeGuardError("mimic bundle count size guard exceeded");
        detail::Bundle b;
        b.ckc = ckcs_.block_index_of(key.front().first);
        for (const auto& [w, m] : key) {
            b.support.push_back(w);
            b.mass[w] = m;
            int pid = induced.at(w);
            b.induced[w] = pid;
            b.profile_mass[pid] += m;
        }
        bundles_.push_back(std::move(b));
    }

    // Types: close a bundle set under the F1 coverage rule. Every F1 block
    // touching the support must be covered entirely at one emission value.
    void build_types() {
        std::set<std::vector<std::pair<int, Rat>>> seen;
        for (std::size_t b = 0; b < bundles_.size(); ++b) {
            std::map<int, Rat> chosen{{static_cast<int>(b), Rat(1)}};
            std::map<int, Rat> value;  // state -> emission value
            if (!apply_bundle(value, static_cast<int>(b), Rat(1))) continue;
            close_type(chosen, value, seen);
        }
    }

    bool apply_bundle(std::map<int, Rat>& value, int bid, const Rat& scale) {
        for (int w : bundles_[bid].support) {
            Rat v = scale * bundles_[bid].rate(w, inst_.space.prior);
            auto it = value.find(w);
            if (it != value.end()) return false;  // overlapping supports never merge
            value[w] = v;
        }
        // measurability check within every touched F1 block
        for (int w : bundles_[bid].support)
            for (int u : f1_.block_containing(w)) {
                auto it = value.find(u);
                if (it != value.end() && it->second != value[w]) return false;
            }
        return true;
    }

    bool bundle_compatible_in_ckc(const std::map<int, Rat>& chosen, int bid) const {
        const auto& cand = bundles_[bid];
        for (const auto& [other, scale] : chosen) {
            if (bundles_[other].ckc != cand.ckc) continue;
            for (int wa : bundles_[other].support)
                for (int wb : cand.support) {
                    if (wa == wb) return false;
                    for (const auto& player : inst_.players)
                        if (player.same_block(wa, wb)) return false;
                }
        }
        return true;
    }

    void close_type(std::map<int, Rat>& chosen, std::map<int, Rat>& value,
                    std::set<std::vector<std::pair<int, Rat>>>& seen) {
        tick();
        // find the smallest uncovered state inside a touched F1 block
        int uncovered = -1;
        Rat needed;
        for (const auto& [w, v] : value) {
            for (int u : f1_.block_containing(w))
                if (!value.count(u) && (uncovered == -1 || u < uncovered)) {
                    uncovered = u;
                    needed = v;
                }
        }
        if (uncovered == -1) {
            record_type(chosen, seen);
            return;
        }
        auto it = bundles_by_state_.find(uncovered);
        if (it == bundles_by_state_.end()) return;  // block cannot be covered
        for (int bid : it->second) {
            if (chosen.count(bid)) continue;
            if (!bundle_compatible_in_ckc(chosen, bid)) continue;
            Rat scale = needed / bundles_[bid].rate(uncovered, inst_.space.prior);
            std::map<int, Rat> value2 = value;
            if (!apply_bundle(value2, bid, scale)) continue;
            std::map<int, Rat> chosen2 = chosen;
            chosen2[bid] = scale;
            close_type(chosen2, value2, seen);
        }
    }

    void record_type(const std::map<int, Rat>& chosen,
                     std::set<std::vector<std::pair<int, Rat>>>& seen) {
        // normalize so the smallest bundle id carries scale 1
        Rat anchor = chosen.begin()->second;
        std::vector<std::pair<int, Rat>> key;
        for (const auto& [bid, scale] : chosen) key.emplace_back(bid, scale / anchor);
        if (!seen.insert(key).second) return;
        if (types_.size() >= budget_.max_types)
            throw SizeGuardError("mimic type count size guard exceeded");
        detail::MimicType t;
        for (const auto& [bid, scale] : key) {
            t.bundle_ids.push_back(bid);
            t.scales.push_back(scale);
            for (int w : bundles_[bid].support) {
                t.support.push_back(w);
                t.rate[w] = scale * bundles_[bid].rate(w, inst_.space.prior);
            }
            for (const auto& [pid, m] : bundles_[bid].profile_mass)
                t.profile_coef[pid] += scale * m;
        }
        std::sort(t.support.begin(), t.support.end());
        types_.push_back(std::move(t));
    }

    std::vector<std::vector<int>> maximal_cliques() const {
        std::vector<std::vector<char>> adj(types_.size(), std::vector<char>(types_.size(), 0));
        for (std::size_t i = 0; i < types_.size(); ++i)
            for (std::size_t j = i + 1; j < types_.size(); ++j)
                adj[i][j] = adj[j][i] =
                    compatible(static_cast<int>(i), static_cast<int>(j)) ? 1 : 0;
        std::vector<std::vector<int>> cliques;
        std::vector<int> r, p(types_.size()), x;
        std::iota(p.begin(), p.end(), 0);
        bron_kerbosch(adj, r, p, x, cliques);
        std::sort(cliques.begin(), cliques.end());
        return cliques;
    }

    void bron_kerbosch(const std::vector<std::vector<char>>& adj, std::vector<int>& r,
                       std::vector<int> p, std::vector<int> x,
                       std::vector<std::vector<int>>& out) const {
        if (p.empty() && x.empty()) {
            out.push_back(r);
            return;
        }
        std::vector<int> p_copy = p;
        for (int v : p_copy) {
            std::vector<int> p2, x2;
            for (int u : p)
                if (adj[u][v]) p2.push_back(u);
            for (int u : x)
                if (adj[u][v]) x2.push_back(u);
            r.push_back(v);
            bron_kerbosch(adj, r, std::move(p2), std::move(x2), out);
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.push_back(v);
        }
    }

    // Turn type weights into an explicit strategy: one signal per active
    // type, or one per chosen clique when merging under a signal cap.
    SignalingStrategy emit(const std::vector<int>& type_ids, const std::vector<Rat>& weights,
                           const std::vector<std::vector<int>>* groups) const {
        std::vector<std::vector<int>> signal_groups;
        if (groups) {
            std::set<int> placed;
            for (const auto& clique : *groups) {
                std::vector<int> g;
                for (int t : clique)
                    if (weights[t] > 0 && !placed.count(t)) {
                        g.push_back(t);
                        placed.insert(t);
                    }
                if (!g.empty()) signal_groups.push_back(std::move(g));
            }
            for (int t : type_ids)
                if (weights[t] > 0 && !placed.count(t))
                    throw ModelError("mimic: active type outside chosen cliques");
        } else {
            for (int t : type_ids)
                if (weights[t] > 0) signal_groups.push_back({t});
        }
        SignalingStrategy out;
        out.rows.assign(inst_.state_count(), {});
        for (std::size_t g = 0; g < signal_groups.size(); ++g)
            out.signals.push_back("m" + std::to_string(g + 1));
        if (out.signals.empty()) out.signals.push_back("m1");  // degenerate, unreachable
        for (int w = 0; w < inst_.state_count(); ++w)
            out.rows[w].assign(out.signals.size(), Rat(0));
        for (std::size_t g = 0; g < signal_groups.size(); ++g)
            for (int t : signal_groups[g])
                for (const auto& [w, rate] : types_[t].rate)
                    out.rows[w][g] += weights[t] * rate;
        out.validate(inst_.state_count());
        return out;
    }
};

inline MimicResult mimic_search(const Instance& inst, const Partition& f1,
                                const SignalingStrategy& t2,
                                std::optional<int> max_signals = std::nullopt,
                                MimicBudget budget = {}) {
    MimicProblem problem(inst, f1, t2, budget);
    return problem.search(max_signals);
}

// ---------------------------------------------------------------------------
// Counter-strategies attached to negative dominance verdicts.
// ---------------------------------------------------------------------------

// Probabilities p_1..p_m in (0,1), pairwise distinct, such that all ratios of
// two distinct members of {p_j, 1-p_j} differ. Candidates are reciprocals of
// odd primes; each is accepted only after an exhaustive ratio check, so the
// output is correct by construction.
inline std::vector<Rat> ratio_generic_probabilities(int m) {
    auto ratios_ok = [](const std::vector<Rat>& chosen) {
        std::vector<Rat> pool;
        for (const Rat& p : chosen) {
            pool.push_back(p);
            pool.push_back(Rat(1) - p);
        }
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j)
                if (pool[i] == pool[j]) return false;
        std::set<Rat> seen;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (i == j) continue;
                if (!seen.insert(pool[i] / pool[j]).second) return false;
            }
        return true;
    };
    std::vector<Rat> chosen;
    Int candidate_den = 3;
    auto is_prime = [](const Int& n) {
        for (Int d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return n > 1;
    };
    while (static_cast<int>(chosen.size()) < m) {
        while (!is_prime(candidate_den)) ++candidate_den;
        chosen.emplace_back(Int(1), candidate_den);
        if (!ratios_ok(chosen)) chosen.pop_back();
        ++candidate_den;
    }
    return chosen;
}

// Two-signal strategy with a distinct, ratio-generic probability per f2
// block. Its posteriors are rigid enough that any mimicking strategy must be
// columnwise proportional within each CKC.
inline SignalingStrategy ratio_generic_strategy(const Instance& inst, const Partition& f2) {
    std::vector<Rat> ps = ratio_generic_probabilities(f2.block_count());
    SignalingStrategy t;
    t.signals = {"s1", "s2"};
    t.rows.assign(inst.state_count(), {});
    for (int w = 0; w < inst.state_count(); ++w) {
        Rat p = ps[f2.block_index_of(w)];
        t.rows[w] = {p, Rat(1) - p};
    }
    t.validate(inst.state_count());
    return t;
}

// Every signal of t1 with support inside the CKC must be a positive multiple
// of some t2 signal there.
inline bool check_proportionality(const SignalingStrategy& t1, const SignalingStrategy& t2,
                                  const std::vector<int>& ckc_states) {
    for (int s1 = 0; s1 < t1.signal_count(); ++s1) {
        bool nonzero = false;
        for (int w : ckc_states) nonzero = nonzero || t1.rows[w][s1] > 0;
        if (!nonzero) continue;
        bool matched = false;
        for (int s2 = 0; s2 < t2.signal_count() && !matched; ++s2) {
            Rat ratio;
            bool ok = true, have_ratio = false;
            for (int w : ckc_states) {
                const Rat& a = t1.rows[w][s1];
                const Rat& b = t2.rows[w][s2];
                if ((a == 0) != (b == 0)) {
                    ok = false;
                    break;
                }
                if (a == 0) continue;
                Rat r = a / b;
                if (!have_ratio) {
                    ratio = r;
                    have_ratio = true;
                } else if (r != ratio) {
                    ok = false;
                    break;
                }
            }
            matched = ok && have_ratio;
        }
        if (!matched) return false;
    }
    return true;
}

enum class ViolationKind { Refinement, UnbalancedLoop, OrderViolation };

struct Violation {
    ViolationKind kind;
    int state_a = -1;              // refinement: same F1 block, split by F2
    int state_b = -1;
    std::optional<Loop> loop;      // unbalanced loop, or covered loop
    std::vector<int> arrangement;  // order violation: pair indices in cover order
};

// Builds the two-signal strategy the dominated oracle cannot reproduce.
inline SignalingStrategy build_witness_strategy(const Violation& violation,
                                                const Instance& inst) {
    const Partition& f2 = inst.oracle2;
    switch (violation.kind) {
        case ViolationKind::Refinement:
            return ratio_generic_strategy(inst, f2);
        case ViolationKind::UnbalancedLoop: {
            // Blocks receiving more wbar than w entries emit signal one with
            // probability 1/3, everything else with 1/2. Pushing both signal
            // products around the loop forces the total deficit exponent to
            // zero, which contradicts the imbalance.
            auto counts = balance_counts(*violation.loop, f2);
            bool unbalanced = false;
            for (const auto& [block, wc] : counts)
                if (wc.first != wc.second) unbalanced = true;
            if (!unbalanced)
                throw ModelError("witness requested for a balanced loop: none exists");
            SignalingStrategy t;
            t.signals = {"s1", "s2"};
            t.rows.assign(inst.state_count(), {});
            for (int w = 0; w < inst.state_count(); ++w) {
                int block = f2.block_index_of(w);
                auto it = counts.find(block);
                bool deficit = it != counts.end() && it->second.first < it->second.second;
                Rat p = deficit ? Rat(1, 3) : Rat(1, 2);
                t.rows[w] = {p, Rat(1) - p};
            }
            t.validate(inst.state_count());
            return t;
        }
        case ViolationKind::OrderViolation: {
            // Cut the covering loop into three arcs between the inverted
            // pairs; each arc is a union of whole f2 blocks because the
            // cover is irreducible. A fourth probability fills the rest.
            const Loop& loop = *violation.loop;
            const auto& arr = violation.arrangement;
            const int m = loop.pair_count();
            int pos_a = -1, pos_b = -1;
            for (int a = 1; a < m && pos_a == -1; ++a)
                for (int b = a + 1; b < m && pos_a == -1; ++b)
                    if (arr[a] > arr[b]) {
                        pos_a = a;
                        pos_b = b;
                    }
            if (pos_a == -1) throw ModelError("order violation without inversion");
            std::vector<Rat> ps = ratio_generic_probabilities(4);
            // link t joins wbar of arr[t] with w of arr[t+1]
            std::map<int, Rat> block_p;
            for (int t = 0; t < m; ++t) {
                int block = f2.block_index_of(loop.pairs[arr[t]].second);
                Rat p = t < pos_a ? ps[0] : (t < pos_b ? ps[1] : ps[2]);
                block_p[block] = p;
            }
            SignalingStrategy t;
            t.signals = {"s1", "s2"};
            t.rows.assign(inst.state_count(), {});
            for (int w = 0; w < inst.state_count(); ++w) {
                auto it = block_p.find(f2.block_index_of(w));
                Rat p = it != block_p.end() ? it->second : ps[3];
                t.rows[w] = {p, Rat(1) - p};
            }
            t.validate(inst.state_count());
            return t;
        }
    }
    throw ModelError("unreachable");
}

}  // namespace oracle_order
