#pragma once

#include "oracle_order/loops.hpp"
#include "oracle_order/mimic.hpp"
#include "oracle_order/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oracle_order {

// ---------------------------------------------------------------------------
// Verdict routing. Oracle 1 dominates oracle 2 when for every strategy of
// oracle 2 some F1-measurable strategy induces the identical posterior
// distribution. The decision runs structural tests on F1-loops in a fixed
// priority order; negative verdicts carry an explicit counter-strategy.
// ---------------------------------------------------------------------------

enum class Outcome { Dominates, NotDominates, Unknown };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Dominates: return "dominates";
        case Outcome::NotDominates: return "not_dominates";
        case Outcome::Unknown: return "unknown";
    }
    return "unknown";
}

struct RefinementCheck {
    bool holds = true;
    int ckc = -1;      // witness: CKC block index
    int state_a = -1;  // same f1 block inside the CKC
    int state_b = -1;  // but different f2 blocks
};

// f1 refines f2 within every CKC: merging under f1 never crosses an f2
// boundary inside a component.
inline RefinementCheck refines_in_every_ckc(const Partition& f1, const Partition& f2,
                                            const Partition& ckcs) {
    RefinementCheck r;
    for (int b = 0; b < ckcs.block_count(); ++b) {
        const auto& block = ckcs.block(b);
        for (std::size_t i = 0; i < block.size(); ++i)
            for (std::size_t j = i + 1; j < block.size(); ++j)
                if (f1.same_block(block[i], block[j]) && !f2.same_block(block[i], block[j])) {
                    r.holds = false;
                    r.ckc = b;
                    r.state_a = block[i];
                    r.state_b = block[j];
                    return r;
                }
    }
    return r;
}

// Searches for a rearrangement of the loop's pairs that forms a valid
// irreducible f2-loop in a different cyclic order. Position 0 is fixed, so
// rotations of the original order normalize to the identity and anything
// else found is a genuine order violation.
inline std::optional<std::vector<int>> find_order_violation(const Loop& loop,
                                                            const Partition& f2,
                                                            const Partition& ckcs) {
    const int m = loop.pair_count();
    if (m < 3) return std::nullopt;
    std::vector<int> arr{0};
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    used[0] = 1;
    std::optional<std::vector<int>> found;

    auto linked = [&](int a, int b) {
        return f2.same_block(loop.pairs[a].second, loop.pairs[b].first) &&
               !ckcs.same_block(loop.pairs[a].first, loop.pairs[b].first);
    };
    auto dfs = [&](auto&& self) -> void {
        if (found) return;
        if (static_cast<int>(arr.size()) == m) {
            if (!linked(arr.back(), arr[0])) return;
            bool identity = true;
            for (int i = 0; i < m; ++i) identity = identity && arr[i] == i;
            if (identity) return;
            Loop l2;
            for (int i : arr) l2.pairs.push_back(loop.pairs[i]);
            if (is_valid_loop(l2, f2, ckcs) && is_irreducible(l2, f2, ckcs)) found = arr;
            return;
        }
        for (int q = 1; q < m; ++q) {
            if (used[q] || !linked(arr.back(), q)) continue;
            used[q] = 1;
            arr.push_back(q);
            self(self);
            arr.pop_back();
            used[q] = 0;
        }
    };
    dfs(dfs);
    return found;
}

struct DominanceVerdict {
    Outcome outcome = Outcome::Unknown;
    std::string rule = "none";
    RefinementCheck refinement;
    std::optional<Violation> violation;
    std::optional<SignalingStrategy> witness;
    std::optional<bool> witness_infeasible;  // mimic cross-check outcome, when run
    std::size_t loop_count = 0;
};

namespace detail {

// Attaches the counter-strategy and, on small instances, confirms through the
// full mimic search that oracle 1 indeed cannot reproduce it.
inline void attach_witness(DominanceVerdict& v, const Violation& violation,
                           const Instance& inst, int cross_check_states) {
    v.violation = violation;
    v.witness = build_witness_strategy(violation, inst);
    if (inst.state_count() <= cross_check_states) {
        try {
            MimicResult check = mimic_search(inst, inst.oracle1, *v.witness);
            v.witness_infeasible = check.outcome == MimicOutcome::Infeasible;
        } catch (const SizeGuardError&) {
            v.witness_infeasible = std::nullopt;
        }
    }
}

}  // namespace detail

// Decides whether oracle 1 dominates oracle 2. Rules fire in a fixed priority
// order; the first applicable one names the verdict.
inline DominanceVerdict decide_dominance(const Instance& inst, LoopBudget budget = {},
                                         int cross_check_states = 10) {
    const Partition ckcs = inst.ckcs();
    const Partition& f1 = inst.oracle1;
    const Partition& f2 = inst.oracle2;

    DominanceVerdict v;
    v.refinement = refines_in_every_ckc(f1, f2, ckcs);
    if (!v.refinement.holds) {
        v.outcome = Outcome::NotDominates;
        v.rule = "refinement_failed";
        Violation violation;
        violation.kind = ViolationKind::Refinement;
        violation.state_a = v.refinement.state_a;
        violation.state_b = v.refinement.state_b;
        detail::attach_witness(v, violation, inst, cross_check_states);
        return v;
    }

    std::vector<Loop> loops = enumerate_loops(f1, ckcs, budget);
    v.loop_count = loops.size();
    if (loops.empty()) {
        v.outcome = Outcome::Dominates;
        v.rule = "no_loops";
        return v;
    }

    auto first_unbalanced = [&]() -> std::optional<Loop> {
        for (const Loop& l : loops)
            if (!is_balanced(l, f2)) return l;
        return std::nullopt;
    };

    if (ckcs.block_count() == 2) {
        auto bad = first_unbalanced();
        if (!bad) {
            v.outcome = Outcome::Dominates;
            v.rule = "two_ckc_balance";
            return v;
        }
        v.outcome = Outcome::NotDominates;
        v.rule = "two_ckc_unbalanced";
        Violation violation;
        violation.kind = ViolationKind::UnbalancedLoop;
        violation.loop = *bad;
        detail::attach_witness(v, violation, inst, cross_check_states);
        return v;
    }

    if (auto bad = first_unbalanced()) {
        v.outcome = Outcome::NotDominates;
        v.rule = "uncovered_loop";
        Violation violation;
        violation.kind = ViolationKind::UnbalancedLoop;
        violation.loop = *bad;
        detail::attach_witness(v, violation, inst, cross_check_states);
        return v;
    }

    for (const Loop& l : loops) {
        if (!is_irreducible(l, f1, ckcs)) continue;
        if (classify_informativeness(l, f2).kind != Informativeness::FullyInformative)
            continue;
        if (auto arr = find_order_violation(l, f2, ckcs)) {
            v.outcome = Outcome::NotDominates;
            v.rule = "order_violation";
            Violation violation;
            violation.kind = ViolationKind::OrderViolation;
            violation.loop = l;
            violation.arrangement = *arr;
            detail::attach_witness(v, violation, inst, cross_check_states);
            return v;
        }
    }

    bool all_noninformative = true;
    for (const Loop& l : loops)
        all_noninformative = all_noninformative &&
                             classify_informativeness(l, f2).kind == Informativeness::NonInformative;
    if (all_noninformative) {
        v.outcome = Outcome::Dominates;
        v.rule = "all_loops_noninformative";
        return v;
    }

    // Global refinement makes every f2-measurable strategy f1-measurable, so
    // oracle 1 mimics it verbatim. Checked last so the structural rules keep
    // naming the verdict whenever they apply.
    if (f1.refines(f2)) {
        v.outcome = Outcome::Dominates;
        v.rule = "global_refinement";
        return v;
    }

    v.outcome = Outcome::Unknown;
    v.rule = "none";
    return v;
}

struct EquivalenceVerdict {
    bool equivalent = true;
    std::string rule = "";    // empty when equivalent
    int direction = 0;        // 1: oracle1's loops vs oracle2; 2: the reverse
    RefinementCheck refinement;
    std::optional<Loop> loop;
};

// Equivalence needs, in both directions: per-CKC refinement, every loop
// balanced against the other oracle, and every irreducible loop with at
// least three pairs valid and irreducible for the other oracle verbatim.
inline EquivalenceVerdict decide_equivalence(const Instance& inst, LoopBudget budget = {}) {
    const Partition ckcs = inst.ckcs();
    EquivalenceVerdict v;
    for (int dir = 1; dir <= 2; ++dir) {
        const Partition& fa = dir == 1 ? inst.oracle1 : inst.oracle2;
        const Partition& fb = dir == 1 ? inst.oracle2 : inst.oracle1;
        RefinementCheck r = refines_in_every_ckc(fa, fb, ckcs);
        if (!r.holds) {
            v.equivalent = false;
            v.rule = "refinement_failed";
            v.direction = dir;
            v.refinement = r;
            return v;
        }
        for (const Loop& l : enumerate_loops(fa, ckcs, budget)) {
            if (!is_balanced(l, fb)) {
                v.equivalent = false;
                v.rule = "uncovered_loop";
                v.direction = dir;
                v.loop = l;
                return v;
            }
            if (l.pair_count() >= 3 && is_irreducible(l, fa, ckcs) &&
                !(is_valid_loop(l, fb, ckcs) && is_irreducible(l, fb, ckcs))) {
                v.equivalent = false;
                v.rule = "loop_not_shared";
                v.direction = dir;
                v.loop = l;
                return v;
            }
        }
    }
    return v;
}

// Diagnostic reports exposing each condition separately, no verdict.

struct NecessaryReport {
    RefinementCheck refinement;
    bool all_covered = true;
    std::optional<Loop> uncovered_loop;
    bool order_preserving = true;
    std::optional<Loop> order_loop;
    std::vector<int> arrangement;
    std::size_t loop_count = 0;

    bool all_pass() const { return refinement.holds && all_covered && order_preserving; }
};

inline NecessaryReport check_necessary(const Instance& inst, LoopBudget budget = {}) {
    const Partition ckcs = inst.ckcs();
    NecessaryReport rep;
    rep.refinement = refines_in_every_ckc(inst.oracle1, inst.oracle2, ckcs);
    std::vector<Loop> loops = enumerate_loops(inst.oracle1, ckcs, budget);
    rep.loop_count = loops.size();
    for (const Loop& l : loops) {
        if (rep.all_covered && !is_balanced(l, inst.oracle2)) {
            rep.all_covered = false;
            rep.uncovered_loop = l;
        }
        if (rep.order_preserving && is_irreducible(l, inst.oracle1, ckcs) &&
            classify_informativeness(l, inst.oracle2).kind ==
                Informativeness::FullyInformative) {
            if (auto arr = find_order_violation(l, inst.oracle2, ckcs)) {
                rep.order_preserving = false;
                rep.order_loop = l;
                rep.arrangement = *arr;
            }
        }
    }
    return rep;
}

struct SufficiencyReport {
    RefinementCheck refinement;
    bool all_noninformative = true;
    std::optional<Loop> informative_loop;
    std::size_t loop_count = 0;

    bool sufficient() const { return refinement.holds && all_noninformative; }
};

inline SufficiencyReport check_sufficient_noninformative(const Instance& inst,
                                                         LoopBudget budget = {}) {
    const Partition ckcs = inst.ckcs();
    SufficiencyReport rep;
    rep.refinement = refines_in_every_ckc(inst.oracle1, inst.oracle2, ckcs);
    std::vector<Loop> loops = enumerate_loops(inst.oracle1, ckcs, budget);
    rep.loop_count = loops.size();
    for (const Loop& l : loops)
        if (classify_informativeness(l, inst.oracle2).kind != Informativeness::NonInformative) {
            rep.all_noninformative = false;
            rep.informative_loop = l;
            break;
        }
    return rep;
}

}  // namespace oracle_order
