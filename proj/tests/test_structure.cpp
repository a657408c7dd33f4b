#include "oracle_order/generator.hpp"
#include "oracle_order/loops.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <set>

using namespace oracle_order;
using oracle_order::test::load_instance;

namespace {

std::set<int> state_set(const Loop& loop) {
    auto seq = loop.state_seq();
    return {seq.begin(), seq.end()};
}

// Definitional irreducibility: no strict subset of the loop's states carries
// a loop of its own.
bool brute_irreducible(const Loop& loop, const Partition& f, const Partition& ckcs) {
    std::vector<int> universe = loop.state_seq();
    for (const Loop& cand : enumerate_loops(f, ckcs, {}, &universe))
        if (state_set(cand).size() < universe.size()) return false;
    return true;
}

bool brute_has_fi_subloop(const Loop& loop, const Partition& f, const Partition& ckcs) {
    std::vector<int> universe = loop.state_seq();
    for (const Loop& cand : enumerate_loops(f, ckcs, {}, &universe))
        if (classify_informativeness(cand, f).kind == Informativeness::FullyInformative)
            return true;
    return false;
}

// Recursive witness that a loop decomposes into irreducible ones: split at a
// repeated component (re-pairing across the cut) or across two links sharing
// a block (pairs kept verbatim), then recurse on both halves.
bool brute_decomposable(const Loop& loop, const Partition& f, const Partition& ckcs) {
    if (!is_valid_loop(loop, f, ckcs)) return false;
    if (is_irreducible(loop, f, ckcs)) return true;
    const int m = loop.pair_count();
    for (int l1 = 0; l1 < m; ++l1)
        for (int l2 = l1 + 1; l2 < m; ++l2) {
            if (!ckcs.same_block(loop.pairs[l1].first, loop.pairs[l2].first)) continue;
            auto [a, b] = detail::split_at_revisit(loop, l1, l2);
            if (a.pair_count() < 2 || b.pair_count() < 2) continue;
            if (!is_valid_loop(a, f, ckcs) || !is_valid_loop(b, f, ckcs)) continue;
            if (brute_decomposable(a, f, ckcs) && brute_decomposable(b, f, ckcs)) return true;
        }
    auto take = [&](int from, int to) {
        Loop part;
        for (int k = from;; k = (k + 1) % m) {
            part.pairs.push_back(loop.pairs[k]);
            if (k == to) break;
        }
        return part;
    };
    for (int j = 0; j < m; ++j)
        for (int l = j + 1; l < m; ++l) {
            if (!f.same_block(loop.pairs[j].second, loop.pairs[l].second)) continue;
            Loop side1 = take((j + 1) % m, l);
            Loop side2 = take((l + 1) % m, j);
            if (side1.pair_count() < 2 || side2.pair_count() < 2) continue;
            if (!is_valid_loop(side1, f, ckcs) || !is_valid_loop(side2, f, ckcs)) continue;
            if (brute_decomposable(side1, f, ckcs) && brute_decomposable(side2, f, ckcs))
                return true;
        }
    return false;
}

int informative_pairs(const Loop& loop, const Partition& f) {
    auto rep = classify_informativeness(loop, f);
    return static_cast<int>(
        std::count(rep.informative_pair.begin(), rep.informative_pair.end(), true));
}

}  // namespace

TEST_CASE("two-pair loops are always irreducible") {
    auto inst = load_instance("four_state_loop.json");
    auto ckcs = inst.ckcs();
    auto loops = enumerate_loops(inst.oracle1, ckcs);
    REQUIRE(loops.size() == 1);
    CHECK(is_irreducible(loops[0], inst.oracle1, ckcs));
    CHECK(brute_irreducible(loops[0], inst.oracle1, ckcs));
    CHECK(is_type2_irreducible(loops[0], inst.oracle1));
}

TEST_CASE("structure predicates agree with brute-force oracles on fuzzed loops") {
    int loops_checked = 0;
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        GeneratorParams params;
        params.n_states = 6 + static_cast<int>(seed % 5);
        params.n_players = 1 + static_cast<int>(seed % 3);
        params.n_ckcs_target = 2 + static_cast<int>(seed % 3);
        params.block_bias = 75;
        auto inst = generate_instance(seed, params);
        auto ckcs = inst.ckcs();
        LoopBudget budget;
        budget.max_loops = 300;
        std::vector<Loop> loops;
        try {
            loops = enumerate_loops(inst.oracle1, ckcs, budget);
        } catch (const SizeGuardError&) {
            continue;
        }
        for (const Loop& loop : loops) {
            const Partition& f = inst.oracle1;
            ++loops_checked;

            bool irr = is_irreducible(loop, f, ckcs);
            CHECK(irr == brute_irreducible(loop, f, ckcs));
            if (!irr)
                CHECK((ckc_revisited(loop, ckcs) || max_states_per_block(loop, f) >= 4));
            if (ckc_revisited(loop, ckcs)) CHECK_FALSE(irr);

            auto kind = classify_informativeness(loop, f).kind;
            if (irr && loop.pair_count() >= 3)
                CHECK(kind == Informativeness::FullyInformative);
            if (is_type2_irreducible(loop, f))
                CHECK(kind == Informativeness::FullyInformative);

            // no loop has exactly one pair its own partition separates
            CHECK(informative_pairs(loop, f) != 1);

            auto sub = fully_informative_subloop(loop, f, ckcs);
            CHECK(sub.has_value() == brute_has_fi_subloop(loop, f, ckcs));
            if (sub) {
                CHECK_NOTHROW(validate_loop(*sub, f, ckcs));
                CHECK(classify_informativeness(*sub, f).kind ==
                      Informativeness::FullyInformative);
                auto inner = state_set(*sub);
                auto outer = state_set(loop);
                for (int s : inner) CHECK(outer.count(s) == 1);
            }
            // without component revisits the extraction always succeeds
            if (kind != Informativeness::NonInformative && !ckc_revisited(loop, ckcs))
                CHECK(sub.has_value());

            if (kind == Informativeness::FullyInformative)
                CHECK(brute_decomposable(loop, f, ckcs));

            auto parts = decompose_type2(loop, f, ckcs);
            if (is_type2_irreducible(loop, f)) {
                REQUIRE(parts.has_value());
                REQUIRE(parts->size() == 1);
                CHECK((*parts)[0] == loop);
            }
            if (parts) {
                std::vector<std::pair<int, int>> all_pairs;
                for (const Loop& part : *parts) {
                    CHECK_NOTHROW(validate_loop(part, f, ckcs));
                    CHECK(is_type2_irreducible(part, f));
                    all_pairs.insert(all_pairs.end(), part.pairs.begin(), part.pairs.end());
                }
                auto expected = loop.pairs;
                std::sort(all_pairs.begin(), all_pairs.end());
                std::sort(expected.begin(), expected.end());
                CHECK(all_pairs == expected);
            } else {
                CHECK_FALSE(is_type2_irreducible(loop, f));
            }
        }
    }
    INFO("loops checked: " << loops_checked);
    CHECK(loops_checked >= 50);
}

TEST_CASE("a mixed loop can have no fully informative subloop at all") {
    // All separating pairs sit inside one component, and consecutive loop
    // pairs must lie in distinct components, so no two separating pairs can
    // ever chain into a loop. The splitting procedure dead-ends and the
    // exhaustive fallback correctly reports that nothing exists.
    auto ckcs = Partition::from_blocks(8, {{0, 2, 3, 5}, {1, 6}, {4, 7}});
    auto f = Partition::from_blocks(8, {{0, 4, 5, 7}, {1, 2, 3, 6}});
    Loop loop{{{0, 2}, {1, 6}, {3, 5}, {4, 7}}};

    REQUIRE_NOTHROW(validate_loop(loop, f, ckcs));
    REQUIRE(ckc_revisited(loop, ckcs));
    auto rep = classify_informativeness(loop, f);
    REQUIRE(rep.kind == Informativeness::Mixed);
    CHECK(rep.informative_pair == std::vector<bool>{true, false, true, false});

    CHECK_FALSE(fully_informative_subloop(loop, f, ckcs).has_value());
    CHECK_FALSE(brute_has_fi_subloop(loop, f, ckcs));
}

TEST_CASE("two-pair loops crowding one block cannot be split further") {
    // Both pairs land in a single f block: not type-2 irreducible, yet no
    // strictly smaller loop exists, so the decomposition honestly fails.
    auto ckcs = Partition::from_blocks(4, {{0, 1}, {2, 3}});
    auto f = Partition::trivial(4);
    Loop loop{{{0, 1}, {2, 3}}};
    REQUIRE_NOTHROW(validate_loop(loop, f, ckcs));
    CHECK_FALSE(is_type2_irreducible(loop, f));
    CHECK(is_irreducible(loop, f, ckcs));
    CHECK_FALSE(decompose_type2(loop, f, ckcs).has_value());
    CHECK(classify_informativeness(loop, f).kind == Informativeness::NonInformative);
}

TEST_CASE("clusters connect components through shared loops") {
    auto chained = load_instance("f1_loop.json");
    auto report = compute_clusters(chained.oracle1, chained.ckcs());
    REQUIRE(report.clusters.size() == 1);
    CHECK(report.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(report.unclustered_ckcs.empty());

    auto quiet = load_instance("example1.json");
    auto quiet_report = compute_clusters(quiet.oracle1, quiet.ckcs());
    CHECK(quiet_report.clusters.empty());
    CHECK(quiet_report.unclustered_ckcs == std::vector<int>{0, 1});

    auto pairlink = load_instance("four_state_loop.json");
    auto pair_report = compute_clusters(pairlink.oracle1, pairlink.ckcs());
    REQUIRE(pair_report.clusters.size() == 1);
    CHECK(pair_report.clusters[0] == std::vector<int>{0, 1});
    CHECK(pair_report.unclustered_ckcs.empty());
}
