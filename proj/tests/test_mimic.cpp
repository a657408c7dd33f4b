#include "oracle_order/generator.hpp"
#include "oracle_order/mimic.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <set>

using namespace oracle_order;
using oracle_order::test::load_instance;

namespace {

Rat rat_pow(const Rat& base, int e) {
    Rat out = 1;
    for (int i = 0; i < std::abs(e); ++i) out *= base;
    return e < 0 ? Rat(1) / out : out;
}

}  // namespace

TEST_CASE("verification compares induced distributions exactly") {
    auto ex1 = load_instance("example1.json");
    CHECK(verify_mimic(ex1, ex1.strategies.at("tau1_four_signals"), ex1.strategies.at("tau2")));
    // tau2 itself is not measurable for oracle 1, so it cannot serve as tau1
    CHECK_FALSE(verify_mimic(ex1, ex1.strategies.at("tau2"), ex1.strategies.at("tau2")));

    auto ex2 = load_instance("example2.json");
    CHECK(verify_mimic(ex2, ex2.strategies.at("tau1"), ex2.strategies.at("tau2")));
    CHECK_FALSE(verify_mimic(ex2, ex2.strategies.at("tau2"), ex2.strategies.at("tau1")));
}

TEST_CASE("the pattern search reproduces the four-signal reconstruction") {
    auto inst = load_instance("example1.json");
    const auto& tau2 = inst.strategies.at("tau2");

    MimicProblem problem(inst, inst.oracle1, tau2);
    CHECK(problem.profiles().size() == 8);
    CHECK(problem.bundles().size() == 6);
    CHECK(problem.types().size() == 6);

    auto capped3 = mimic_search(inst, inst.oracle1, tau2, 3);
    CHECK(capped3.outcome == MimicOutcome::Infeasible);
    CHECK_FALSE(capped3.tau1.has_value());
    CHECK(capped3.stats.profiles == 8);
    CHECK(capped3.stats.bundles == 6);
    CHECK(capped3.stats.types == 6);
    CHECK(capped3.stats.maximal_cliques == 5);

    auto capped4 = mimic_search(inst, inst.oracle1, tau2, 4);
    REQUIRE(capped4.outcome == MimicOutcome::Feasible);
    REQUIRE(capped4.tau1.has_value());
    CHECK(capped4.tau1->signal_count() == 4);
    CHECK(capped4.tau1->is_measurable(inst.oracle1));
    CHECK(verify_mimic(inst, *capped4.tau1, tau2));

    auto open = mimic_search(inst, inst.oracle1, tau2);
    REQUIRE(open.outcome == MimicOutcome::Feasible);
    CHECK(verify_mimic(inst, *open.tau1, tau2));

    // growing the cap never destroys feasibility
    for (int cap = 4; cap <= 7; ++cap) {
        auto r = mimic_search(inst, inst.oracle1, tau2, cap);
        CHECK(r.outcome == MimicOutcome::Feasible);
        CHECK(verify_mimic(inst, *r.tau1, tau2));
    }
}

TEST_CASE("types are measurable pieces that conserve probability mass") {
    auto inst = load_instance("example1.json");
    MimicProblem problem(inst, inst.oracle1, inst.strategies.at("tau2"));
    const auto& f1 = inst.oracle1;
    for (const auto& type : problem.types()) {
        std::set<int> support(type.support.begin(), type.support.end());
        for (int w : type.support) {
            // support closes over whole oracle-1 blocks at one emission value
            for (int v : f1.block_containing(w)) {
                CHECK(support.count(v) == 1);
                CHECK(type.rate.at(v) == type.rate.at(w));
            }
            CHECK(type.rate.at(w) > 0);
        }
        Rat mass_in = 0;
        for (int w : type.support) mass_in += inst.space.prior[w] * type.rate.at(w);
        Rat mass_out = 0;
        for (const auto& [pid, coef] : type.profile_coef) {
            CHECK(coef > 0);
            mass_out += coef;
        }
        CHECK(mass_in == mass_out);
    }
}

TEST_CASE("strategies that are not measurable for oracle two are rejected") {
    auto inst = load_instance("example1.json");
    CHECK_THROWS_AS(MimicProblem(inst, inst.oracle1, inst.strategies.at("tau1_four_signals")),
                    ModelError);
}

TEST_CASE("no-loop configurations mimic every strategy") {
    auto inst = load_instance("example2.json");
    auto r = mimic_search(inst, inst.oracle1, inst.strategies.at("tau2"));
    REQUIRE(r.outcome == MimicOutcome::Feasible);
    CHECK(verify_mimic(inst, *r.tau1, inst.strategies.at("tau2")));

    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto t2 = random_measurable_strategy(rng, inst, inst.oracle2, 2 + trial % 3);
        auto res = mimic_search(inst, inst.oracle1, t2);
        REQUIRE(res.outcome == MimicOutcome::Feasible);
        CHECK(verify_mimic(inst, *res.tau1, t2));
    }
}

TEST_CASE("generic two-signal probabilities have globally distinct ratios") {
    for (int m = 1; m <= 6; ++m) {
        auto ps = ratio_generic_probabilities(m);
        REQUIRE(static_cast<int>(ps.size()) == m);
        std::vector<Rat> pool;
        for (const Rat& p : ps) {
            CHECK(p > 0);
            CHECK(p < 1);
            pool.push_back(p);
            pool.push_back(Rat(1) - p);
        }
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j) CHECK(pool[i] != pool[j]);
        std::set<Rat> ratios;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = 0; j < pool.size(); ++j)
                if (i != j) CHECK(ratios.insert(pool[i] / pool[j]).second);
    }
}

TEST_CASE("proportionality detects strategies rebuilt from other columns") {
    auto inst = load_instance("example1.json");
    auto t2 = ratio_generic_strategy(inst, inst.oracle2);
    CHECK(t2.is_measurable(inst.oracle2));
    CHECK(t2.signal_count() == 2);

    std::vector<int> ckc_states{0, 1};  // first component
    CHECK(check_proportionality(t2, t2, ckc_states));

    SignalingStrategy swapped = t2;
    for (auto& row : swapped.rows) std::swap(row[0], row[1]);
    CHECK(check_proportionality(swapped, t2, ckc_states));

    SignalingStrategy flat;
    flat.signals = {"a", "b"};
    flat.rows.assign(inst.state_count(), {Rat(1, 2), Rat(1, 2)});
    // oracle 2 splits this component, so a constant column cannot be
    // proportional to either generic column
    CHECK_FALSE(check_proportionality(flat, t2, ckc_states));
}

TEST_CASE("mimicking a generic strategy forces columnwise proportionality") {
    for (std::uint64_t seed = 300; seed < 312; ++seed) {
        GeneratorParams params;
        params.n_states = 4 + static_cast<int>(seed % 3);
        params.n_players = 2;
        params.n_ckcs_target = 1;
        auto inst = generate_instance(seed, params);
        auto t2 = ratio_generic_strategy(inst, inst.oracle2);
        auto r = mimic_search(inst, inst.oracle1, t2);
        if (r.outcome != MimicOutcome::Feasible) continue;
        REQUIRE(verify_mimic(inst, *r.tau1, t2));
        Partition ckcs = inst.ckcs();
        for (const auto& block : ckcs.blocks())
            CHECK(check_proportionality(*r.tau1, t2, block));
    }
}

TEST_CASE("with one component, universal mimicry is exactly refinement") {
    int refined = 0, unrefined = 0;
    for (std::uint64_t seed = 400; seed < 430; ++seed) {
        GeneratorParams params;
        params.n_states = 3 + static_cast<int>(seed % 4);
        params.n_players = 1 + static_cast<int>(seed % 2);
        params.n_ckcs_target = 1;
        auto inst = generate_instance(seed, params);
        bool refines = true;
        for (const auto& b : inst.oracle1.blocks())
            for (std::size_t i = 1; i < b.size(); ++i)
                if (!inst.oracle2.same_block(b[0], b[i])) refines = false;
        if (refines) {
            ++refined;
            Rng rng(seed * 31 + 1);
            for (int trial = 0; trial < 10; ++trial) {
                auto t2 = random_measurable_strategy(rng, inst, inst.oracle2, 2 + trial % 2);
                auto r = mimic_search(inst, inst.oracle1, t2);
                REQUIRE(r.outcome == MimicOutcome::Feasible);
                CHECK(verify_mimic(inst, *r.tau1, t2));
            }
        } else {
            ++unrefined;
            auto r = mimic_search(inst, inst.oracle1, ratio_generic_strategy(inst, inst.oracle2));
            CHECK(r.outcome == MimicOutcome::Infeasible);
        }
    }
    INFO("refined=" << refined << " unrefined=" << unrefined);
    CHECK(refined >= 3);
    CHECK(unrefined >= 3);
}

TEST_CASE("witness strategies certify each violation kind") {
    SECTION("refinement failure") {
        Instance inst;
        inst.space.names = {"w1", "w2"};
        inst.space.prior = {Rat(1, 2), Rat(1, 2)};
        inst.players = {Partition::trivial(2)};
        inst.oracle1 = Partition::trivial(2);
        inst.oracle2 = Partition::discrete(2);
        inst.validate();
        Violation v;
        v.kind = ViolationKind::Refinement;
        v.state_a = 0;
        v.state_b = 1;
        auto witness = build_witness_strategy(v, inst);
        CHECK(witness.is_measurable(inst.oracle2));
        CHECK(mimic_search(inst, inst.oracle1, witness).outcome == MimicOutcome::Infeasible);
    }

    SECTION("unbalanced loop") {
        auto inst = load_instance("f1_loop.json");
        auto loops = enumerate_loops(inst.oracle1, inst.ckcs());
        REQUIRE(loops.size() == 1);
        Violation v;
        v.kind = ViolationKind::UnbalancedLoop;
        v.loop = loops[0];
        auto witness = build_witness_strategy(v, inst);
        CHECK(witness.is_measurable(inst.oracle2));
        // blocks short on w entries emit the skewed probability
        CHECK(witness.rows[1] == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});
        CHECK(witness.rows[3] == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});
        CHECK(witness.rows[5] == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});
        CHECK(witness.rows[0] == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
        CHECK(mimic_search(inst, inst.oracle1, witness).outcome == MimicOutcome::Infeasible);
    }

    SECTION("balanced loops admit no witness and say so") {
        Instance inst;
        for (int i = 0; i < 6; ++i) {
            inst.space.names.push_back("w" + std::to_string(i + 1));
            inst.space.prior.emplace_back(1, 6);
        }
        inst.players = {Partition::from_blocks(6, {{0, 1}, {2, 3}, {4, 5}})};
        inst.oracle1 = Partition::from_blocks(6, {{1, 2}, {3, 4}, {5, 0}});
        inst.oracle2 = Partition::from_blocks(6, {{1, 4}, {5, 2}, {3, 0}});
        inst.validate();
        auto loops = enumerate_loops(inst.oracle1, inst.ckcs());
        REQUIRE(loops.size() == 1);
        REQUIRE(is_balanced(loops[0], inst.oracle2));
        Violation v;
        v.kind = ViolationKind::UnbalancedLoop;
        v.loop = loops[0];
        CHECK_THROWS_AS(build_witness_strategy(v, inst), ModelError);
    }

    SECTION("order violation") {
        Instance inst;
        for (int i = 0; i < 6; ++i) {
            inst.space.names.push_back("w" + std::to_string(i + 1));
            inst.space.prior.emplace_back(1, 6);
        }
        inst.players = {Partition::from_blocks(6, {{0, 1}, {2, 3}, {4, 5}})};
        inst.oracle1 = Partition::from_blocks(6, {{1, 2}, {3, 4}, {5, 0}});
        inst.oracle2 = Partition::from_blocks(6, {{1, 4}, {5, 2}, {3, 0}});
        inst.validate();
        auto loops = enumerate_loops(inst.oracle1, inst.ckcs());
        REQUIRE(loops.size() == 1);
        Violation v;
        v.kind = ViolationKind::OrderViolation;
        v.loop = loops[0];
        v.arrangement = {0, 2, 1};
        auto witness = build_witness_strategy(v, inst);
        CHECK(witness.is_measurable(inst.oracle2));
        CHECK(mimic_search(inst, inst.oracle1, witness).outcome == MimicOutcome::Infeasible);
    }
}

TEST_CASE("the two skew bases generate no common power") {
    // the imbalance argument reduces to this equation having only the
    // trivial solution
    for (int l = -64; l <= 64; ++l)
        for (int k = -64; k <= 64; ++k) {
            bool equal = rat_pow(Rat(3, 2), l) == rat_pow(Rat(3, 4), k);
            CHECK(equal == (l == 0 && k == 0));
        }
}
