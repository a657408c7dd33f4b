// Batch front end: parse instances, run the analyses, report as text or json.
// Exit codes: 0 affirmative, 1 negative, 2 undecided, 64 usage, 65 bad input,
// 66 size guard.

#include <CLI11.hpp>

#include <oracle_order/dominance.hpp>
#include <oracle_order/generator.hpp>
#include <oracle_order/serialization.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace oracle_order;
using nlohmann::json;

constexpr int kAffirmative = 0;
constexpr int kNegative = 1;
constexpr int kUndecided = 2;
constexpr int kUsage = 64;
constexpr int kBadInput = 65;
constexpr int kGuard = 66;

int resolve_max_states(std::optional<int> flag_value) {
    if (flag_value) return *flag_value;
    if (const char* env = std::getenv("ORACLE_ORDER_MAX_STATES")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
        }
        throw ParseError("ORACLE_ORDER_MAX_STATES must be a positive integer");
    }
    return 24;
}

Instance load_instance_file(const std::string& path, int max_states) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    json doc = json::parse(in);
    Instance inst = instance_from_json(doc);
    if (inst.state_count() > max_states)
        throw SizeGuardError("instance has " + std::to_string(inst.state_count()) +
                             " states; the guard allows " + std::to_string(max_states) +
                             " (raise with --max-states or ORACLE_ORDER_MAX_STATES)");
    return inst;
}

void write_report(const std::string& text, const json& doc, const std::string& format,
                  const std::string& out_path) {
    std::string payload = format == "json" ? doc.dump(2) + "\n" : text;
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError("cannot open output file: " + out_path);
        out << payload;
    }
}

const char* informativeness_name(Informativeness kind) {
    switch (kind) {
        case Informativeness::NonInformative: return "non_informative";
        case Informativeness::FullyInformative: return "fully_informative";
        case Informativeness::Mixed: return "mixed";
    }
    return "mixed";
}

json loop_report_json(const Loop& loop, const Instance& inst, const Partition& ckcs,
                      const Partition& own, const Partition& other) {
    json pairs = json::array();
    json ckc_indices = json::array();
    for (auto [w, wb] : loop.pairs) {
        pairs.push_back({inst.space.names[w], inst.space.names[wb]});
        ckc_indices.push_back(ckcs.block_index_of(w));
    }
    return {{"pairs", pairs},
            {"ckcs", ckc_indices},
            {"flags",
             {{"irreducible", is_irreducible(loop, own, ckcs)},
              {"type2", is_type2_irreducible(loop, own)},
              {"informativeness_vs_other_oracle",
               informativeness_name(classify_informativeness(loop, other).kind)},
              {"balanced_vs_other_oracle", is_balanced(loop, other)}}}};
}

std::string loop_text(const Loop& loop, const Instance& inst) {
    std::ostringstream out;
    for (std::size_t i = 0; i < loop.pairs.size(); ++i) {
        if (i) out << " ";
        out << "(" << inst.space.names[loop.pairs[i].first] << ","
            << inst.space.names[loop.pairs[i].second] << ")";
    }
    return out.str();
}

json dominance_certificate(const DominanceVerdict& v, const Instance& inst,
                           const Partition& ckcs, const Partition& f1, const Partition& f2) {
    if (v.outcome != Outcome::NotDominates) return nullptr;
    json cert;
    if (!v.refinement.holds) {
        cert["kind"] = "refinement";
        cert["ckc"] = v.refinement.ckc;
        cert["states"] = {inst.space.names[v.refinement.state_a],
                          inst.space.names[v.refinement.state_b]};
    } else if (v.violation) {
        cert["kind"] = v.violation->kind == ViolationKind::OrderViolation ? "order_violation"
                                                                          : "unbalanced_loop";
        if (v.violation->loop) {
            cert["loop"] = loop_report_json(*v.violation->loop, inst, ckcs, f1, f2);
            json counts = json::array();
            for (const auto& [block, wc] : balance_counts(*v.violation->loop, f2))
                counts.push_back(
                    {{"block", block}, {"w_entries", wc.first}, {"wbar_entries", wc.second}});
            cert["block_counts"] = counts;
        }
        if (!v.violation->arrangement.empty()) cert["arrangement"] = v.violation->arrangement;
    }
    if (v.witness) cert["witness"] = strategy_to_json(*v.witness, inst.space);
    if (v.witness_infeasible) cert["witness_infeasible"] = *v.witness_infeasible;
    return cert;
}

json dominance_verdict_json(const DominanceVerdict& v, const Instance& inst,
                            const Partition& ckcs, const Partition& f1, const Partition& f2) {
    return {{"outcome", outcome_name(v.outcome)},
            {"rule", v.rule},
            {"loop_count", v.loop_count},
            {"certificate", dominance_certificate(v, inst, ckcs, f1, f2)}};
}

void dominance_verdict_text(std::ostringstream& out, const std::string& heading,
                            const DominanceVerdict& v, const Instance& inst,
                            const Partition& ckcs, const Partition& f2) {
    out << heading << ": " << outcome_name(v.outcome) << " [rule " << v.rule << ", "
        << v.loop_count << " loop(s)]\n";
    if (v.outcome != Outcome::NotDominates) return;
    if (!v.refinement.holds) {
        out << "  certificate: refinement breaks in component " << v.refinement.ckc
            << " between " << inst.space.names[v.refinement.state_a] << " and "
            << inst.space.names[v.refinement.state_b] << "\n";
    } else if (v.violation) {
        if (v.violation->kind == ViolationKind::OrderViolation) {
            out << "  certificate: order violation, arrangement";
            for (int idx : v.violation->arrangement) out << " " << idx;
            out << "\n";
        } else {
            out << "  certificate: unbalanced loop\n";
        }
        if (v.violation->loop) {
            out << "  loop: " << loop_text(*v.violation->loop, inst) << "\n";
            for (const auto& [block, wc] : balance_counts(*v.violation->loop, f2))
                out << "  block " << block << ": " << wc.first << " vs " << wc.second
                    << " entries\n";
        }
    }
    if (v.witness) {
        out << "  witness strategy:\n";
        for (int w = 0; w < inst.state_count(); ++w) {
            out << "    " << inst.space.names[w] << ":";
            for (int s = 0; s < v.witness->signal_count(); ++s)
                out << " " << v.witness->signals[s] << "="
                    << format_rational(v.witness->rows[w][s]);
            out << "\n";
        }
    }
    if (v.witness_infeasible)
        out << "  witness mimicry: " << (*v.witness_infeasible ? "infeasible" : "FEASIBLE")
        << "\n";
}

// --- subcommands -------------------------------------------------------------

int run_ckc(const Instance& inst, const std::string& format, const std::string& out_path) {
    Partition ckcs = inst.ckcs();
    json blocks = json::array();
    std::ostringstream text;
    text << ckcs.block_count() << " common knowledge component(s)\n";
    for (int b = 0; b < ckcs.block_count(); ++b) {
        json names = json::array();
        text << "  component " << b << ":";
        for (int s : ckcs.blocks()[b]) {
            names.push_back(inst.space.names[s]);
            text << " " << inst.space.names[s];
        }
        text << "\n";
        blocks.push_back(names);
    }
    write_report(text.str(), {{"ckcs", blocks}}, format, out_path);
    return kAffirmative;
}

int run_loops(const Instance& inst, const std::string& format, const std::string& out_path) {
    Partition ckcs = inst.ckcs();
    json report;
    std::ostringstream text;
    struct Side {
        const char* key;
        const Partition& own;
        const Partition& other;
    };
    for (const Side& side : {Side{"oracle1", inst.oracle1, inst.oracle2},
                             Side{"oracle2", inst.oracle2, inst.oracle1}}) {
        auto loops = enumerate_loops(side.own, ckcs);
        json arr = json::array();
        text << side.key << ": " << loops.size() << " loop(s)\n";
        for (const Loop& loop : loops) {
            json entry = loop_report_json(loop, inst, ckcs, side.own, side.other);
            text << "  " << loop_text(loop, inst) << " | irreducible="
                 << (entry["flags"]["irreducible"].get<bool>() ? "yes" : "no")
                 << " type2=" << (entry["flags"]["type2"].get<bool>() ? "yes" : "no")
                 << " informativeness="
                 << entry["flags"]["informativeness_vs_other_oracle"].get<std::string>()
                 << " balanced="
                 << (entry["flags"]["balanced_vs_other_oracle"].get<bool>() ? "yes" : "no")
                 << "\n";
            arr.push_back(std::move(entry));
        }
        report[side.key] = std::move(arr);
    }
    write_report(text.str(), report, format, out_path);
    return kAffirmative;
}

int run_dominance(const Instance& inst, const std::string& format,
                  const std::string& out_path) {
    Instance swapped = inst;
    std::swap(swapped.oracle1, swapped.oracle2);
    Partition ckcs = inst.ckcs();

    DominanceVerdict v1 = decide_dominance(inst);
    DominanceVerdict v2 = decide_dominance(swapped);

    json report = {
        {"direction1", dominance_verdict_json(v1, inst, ckcs, inst.oracle1, inst.oracle2)},
        {"direction2", dominance_verdict_json(v2, inst, ckcs, inst.oracle2, inst.oracle1)}};
    std::ostringstream text;
    dominance_verdict_text(text, "oracle1 vs oracle2", v1, inst, ckcs, inst.oracle2);
    dominance_verdict_text(text, "oracle2 vs oracle1", v2, inst, ckcs, inst.oracle1);
    write_report(text.str(), report, format, out_path);

    switch (v1.outcome) {
        case Outcome::Dominates: return kAffirmative;
        case Outcome::NotDominates: return kNegative;
        case Outcome::Unknown: return kUndecided;
    }
    return kUndecided;
}

int run_equivalence(const Instance& inst, const std::string& format,
                    const std::string& out_path) {
    Partition ckcs = inst.ckcs();
    EquivalenceVerdict e = decide_equivalence(inst);
    json cert = nullptr;
    std::ostringstream text;
    if (e.equivalent) {
        text << "equivalent\n";
    } else {
        text << "not_equivalent [rule " << e.rule << ", direction " << e.direction << "]\n";
        if (!e.refinement.holds)
            text << "  refinement breaks in component " << e.refinement.ckc << " between "
                 << inst.space.names[e.refinement.state_a] << " and "
                 << inst.space.names[e.refinement.state_b] << "\n";
        const Partition& own = e.direction == 2 ? inst.oracle2 : inst.oracle1;
        const Partition& other = e.direction == 2 ? inst.oracle1 : inst.oracle2;
        cert = json::object();
        if (!e.refinement.holds) {
            cert["kind"] = "refinement";
            cert["ckc"] = e.refinement.ckc;
            cert["states"] = {inst.space.names[e.refinement.state_a],
                              inst.space.names[e.refinement.state_b]};
        }
        if (e.loop) {
            cert["kind"] = e.rule;
            cert["loop"] = loop_report_json(*e.loop, inst, ckcs, own, other);
            text << "  loop: " << loop_text(*e.loop, inst) << "\n";
        }
    }
    json report = {{"outcome", e.equivalent ? "equivalent" : "not_equivalent"},
                   {"rule", e.rule},
                   {"direction", e.direction},
                   {"certificate", cert}};
    write_report(text.str(), report, format, out_path);
    return e.equivalent ? kAffirmative : kNegative;
}

int run_mimic(const Instance& inst, const std::string& strategy_name,
              std::optional<int> max_signals, const std::string& format,
              const std::string& out_path) {
    auto it = inst.strategies.find(strategy_name);
    if (it == inst.strategies.end())
        throw ParseError("instance has no strategy named '" + strategy_name + "'");
    MimicResult r = mimic_search(inst, inst.oracle1, it->second, max_signals);

    json report = {{"outcome", r.outcome == MimicOutcome::Feasible ? "feasible" : "infeasible"},
                   {"stats",
                    {{"profiles", r.stats.profiles},
                     {"bundles", r.stats.bundles},
                     {"types", r.stats.types},
                     {"maximal_cliques", r.stats.maximal_cliques},
                     {"lp_pivots", r.stats.lp_pivots}}}};
    std::ostringstream text;
    text << (r.outcome == MimicOutcome::Feasible ? "feasible" : "infeasible");
    if (max_signals) text << " (cap " << *max_signals << " signals)";
    text << "\n";
    if (r.tau1) {
        report["tau1"] = strategy_to_json(*r.tau1, inst.space);
        text << "mimicking strategy with " << r.tau1->signal_count() << " signal(s):\n";
        for (int w = 0; w < inst.state_count(); ++w) {
            text << "  " << inst.space.names[w] << ":";
            for (int s = 0; s < r.tau1->signal_count(); ++s)
                text << " " << r.tau1->signals[s] << "=" << format_rational(r.tau1->rows[w][s]);
            text << "\n";
        }
    }
    text << "profiles=" << r.stats.profiles << " bundles=" << r.stats.bundles
         << " types=" << r.stats.types << " cliques=" << r.stats.maximal_cliques
         << " pivots=" << r.stats.lp_pivots << "\n";
    write_report(text.str(), report, format, out_path);
    return r.outcome == MimicOutcome::Feasible ? kAffirmative : kNegative;
}

int run_verify(const Instance& inst, const std::string& t1_name, const std::string& t2_name,
               const std::string& format, const std::string& out_path) {
    auto find = [&](const std::string& name) -> const SignalingStrategy& {
        auto it = inst.strategies.find(name);
        if (it == inst.strategies.end())
            throw ParseError("instance has no strategy named '" + name + "'");
        return it->second;
    };
    bool ok = verify_mimic(inst, find(t1_name), find(t2_name));
    json report = {{"outcome", ok ? "verified" : "failed"}, {"t1", t1_name}, {"t2", t2_name}};
    write_report(std::string(ok ? "verified" : "failed") + "\n", report, format, out_path);
    return ok ? kAffirmative : kNegative;
}

int run_generate(std::uint64_t seed, GeneratorParams params, int max_states,
                 const std::string& format, const std::string& out_path) {
    if (params.n_states > max_states)
        throw SizeGuardError("requested " + std::to_string(params.n_states) +
                             " states; the guard allows " + std::to_string(max_states));
    Instance inst = generate_instance(seed, params);
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    inst.strategies["tau2"] = random_measurable_strategy(rng, inst, inst.oracle2, 2);
    json doc = instance_to_json(inst);
    // the instance file is the report in either format
    write_report(doc.dump(2) + "\n", doc, format, out_path);
    return kAffirmative;
}

// --- fuzzing -----------------------------------------------------------------

struct FuzzOutcome {
    int checked = 0;
    int discrepancies = 0;
    std::vector<std::string> artifacts;
};

void persist_counterexample(FuzzOutcome& fuzz, const std::string& mode, std::uint64_t seed,
                            const Instance& inst, const std::string& detail) {
    ++fuzz.discrepancies;
    std::filesystem::create_directories("artifacts/counterexamples");
    std::string path = "artifacts/counterexamples/" + mode + "-" + std::to_string(seed) + "-" +
                       std::to_string(fuzz.discrepancies) + ".json";
    std::ofstream out(path);
    json doc = {{"mode", mode},
                {"seed", seed},
                {"detail", detail},
                {"instance", instance_to_json(inst)}};
    out << doc.dump(2) << "\n";
    fuzz.artifacts.push_back(path);
    std::cerr << "counterexample: " << detail << " -> " << path << "\n";
}

GeneratorParams fuzz_params(std::uint64_t seed, int max_states, int ckcs_override) {
    GeneratorParams params;
    params.n_states = 4 + static_cast<int>(seed % std::max(1, max_states - 3));
    params.n_players = 1 + static_cast<int>(seed % 3);
    params.n_ckcs_target =
        ckcs_override ? ckcs_override : 2 + static_cast<int>(seed % 2);
    params.block_bias = 30 + static_cast<int>(seed * 7 % 60);
    if (params.n_ckcs_target > params.n_states) params.n_ckcs_target = params.n_states;
    return params;
}

bool loops_under_budget(const Partition& f, const Partition& ckcs, std::vector<Loop>& out) {
    LoopBudget budget;
    budget.max_loops = 100;
    try {
        out = enumerate_loops(f, ckcs, budget);
        return true;
    } catch (const SizeGuardError&) {
        return false;
    }
}

bool brute_balanced_bipartitions(const Loop& loop, const Partition& g) {
    std::set<int> touched_set;
    for (int s : loop.state_seq()) touched_set.insert(g.block_index_of(s));
    std::vector<int> touched(touched_set.begin(), touched_set.end());
    const int k = static_cast<int>(touched.size());
    if (k > 20) return is_balanced(loop, g);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        auto side = [&](int s) {
            int b = g.block_index_of(s);
            auto pos = std::lower_bound(touched.begin(), touched.end(), b) - touched.begin();
            return (mask >> pos) & 1;
        };
        int forward = 0, backward = 0;
        for (auto [w, wb] : loop.pairs) {
            if (side(w) == 0 && side(wb) == 1) ++forward;
            if (side(w) == 1 && side(wb) == 0) ++backward;
        }
        if (forward != backward) return false;
    }
    return true;
}

void fuzz_balance(FuzzOutcome& fuzz, std::uint64_t seed, int max_states, Rng& rng) {
    Instance inst = generate_instance(seed, fuzz_params(seed, max_states, 0));
    Partition ckcs = inst.ckcs();
    std::vector<Loop> loops;
    if (!loops_under_budget(inst.oracle1, ckcs, loops)) return;
    for (const Loop& loop : loops) {
        for (const Partition& g :
             {inst.oracle2, random_partition(rng, inst.state_count(), inst.state_count())}) {
            bool counting = is_balanced(loop, g);
            bool cover = find_cover(loop, g, ckcs).has_value();
            bool brute = brute_balanced_bipartitions(loop, g);
            ++fuzz.checked;
            if (counting != cover || counting != brute) {
                std::ostringstream msg;
                msg << "balance disagreement: counting=" << counting << " cover=" << cover
                    << " bipartitions=" << brute << " loop " << loop_text(loop, inst);
                persist_counterexample(fuzz, "balance", seed, inst, msg.str());
            }
        }
    }
}

void fuzz_structure(FuzzOutcome& fuzz, std::uint64_t seed, int max_states, Rng&) {
    GeneratorParams params = fuzz_params(seed, max_states, 0);
    params.n_ckcs_target = 2 + static_cast<int>(seed % 3);
    if (params.n_ckcs_target > params.n_states) params.n_ckcs_target = params.n_states;
    params.block_bias = 75;
    Instance inst = generate_instance(seed, params);
    Partition ckcs = inst.ckcs();
    std::vector<Loop> loops;
    if (!loops_under_budget(inst.oracle1, ckcs, loops)) return;
    const Partition& f = inst.oracle1;
    for (const Loop& loop : loops) {
        ++fuzz.checked;
        bool irreducible = is_irreducible(loop, f, ckcs);
        auto kind = classify_informativeness(loop, f).kind;
        bool revisit = ckc_revisited(loop, ckcs);

        if (revisit && irreducible)
            persist_counterexample(fuzz, "structure", seed, inst,
                                   "revisited component in an irreducible loop");
        if (irreducible && loop.pair_count() >= 3 && kind != Informativeness::FullyInformative)
            persist_counterexample(fuzz, "structure", seed, inst,
                                   "irreducible loop with uninformative pair");
        bool has_sub = [&] {
            std::vector<int> universe = loop.state_seq();
            for (const Loop& cand : enumerate_loops(f, ckcs, {}, &universe))
                if (classify_informativeness(cand, f).kind ==
                    Informativeness::FullyInformative)
                    return true;
            return false;
        }();
        if (fully_informative_subloop(loop, f, ckcs).has_value() != has_sub)
            persist_counterexample(fuzz, "structure", seed, inst,
                                   "subloop extraction disagrees with brute search");
        if (!irreducible && !revisit && max_states_per_block(loop, f) < 4)
            persist_counterexample(fuzz, "structure", seed, inst,
                                   "reducible loop without a structural witness");
    }
}

void check_verdict_soundness(FuzzOutcome& fuzz, const std::string& mode, std::uint64_t seed,
                             const Instance& inst, const DominanceVerdict& v, Rng& rng,
                             int samples) {
    if (v.outcome == Outcome::Unknown) {
        persist_counterexample(fuzz, mode, seed, inst, "undecided in a decidable regime");
        return;
    }
    if (v.outcome == Outcome::Dominates) {
        for (int trial = 0; trial < samples; ++trial) {
            auto t2 = random_measurable_strategy(rng, inst, inst.oracle2, 2 + trial % 2);
            auto r = mimic_search(inst, inst.oracle1, t2);
            if (r.outcome != MimicOutcome::Feasible || !verify_mimic(inst, *r.tau1, t2)) {
                persist_counterexample(fuzz, mode, seed, inst,
                                       "positive verdict but a strategy resists mimicry");
                return;
            }
        }
    } else {
        if (!v.witness || !v.witness->is_measurable(inst.oracle2)) {
            persist_counterexample(fuzz, mode, seed, inst, "negative verdict without witness");
            return;
        }
        if (mimic_search(inst, inst.oracle1, *v.witness).outcome != MimicOutcome::Infeasible)
            persist_counterexample(fuzz, mode, seed, inst, "witness unexpectedly mimickable");
    }
}

void fuzz_noloop(FuzzOutcome& fuzz, std::uint64_t seed, int max_states, Rng& rng) {
    int capped = std::min(max_states, 8);
    Instance inst = generate_instance(seed, fuzz_params(seed, capped, 0));
    auto v = decide_dominance(inst);
    if (v.loop_count != 0) return;
    ++fuzz.checked;
    check_verdict_soundness(fuzz, "noloop", seed, inst, v, rng, 5);
}

void fuzz_twockc(FuzzOutcome& fuzz, std::uint64_t seed, int max_states, Rng& rng) {
    int capped = std::min(max_states, 8);
    Instance inst = generate_instance(seed, fuzz_params(seed, capped, 2));
    auto v = decide_dominance(inst);
    ++fuzz.checked;
    check_verdict_soundness(fuzz, "twockc", seed, inst, v, rng, 5);
}

void fuzz_equiv(FuzzOutcome& fuzz, std::uint64_t seed, int max_states, Rng& rng) {
    int capped = std::min(max_states, 8);
    Instance inst = generate_instance(seed, fuzz_params(seed, capped, 0));
    Instance swapped = inst;
    std::swap(swapped.oracle1, swapped.oracle2);
    auto v12 = decide_dominance(inst);
    auto v21 = decide_dominance(swapped);
    auto eq = decide_equivalence(inst);
    if (v12.outcome == Outcome::Unknown || v21.outcome == Outcome::Unknown) return;
    ++fuzz.checked;
    bool both = v12.outcome == Outcome::Dominates && v21.outcome == Outcome::Dominates;
    if (eq.equivalent != both) {
        persist_counterexample(fuzz, "equiv", seed, inst,
                               "equivalence disagrees with bidirectional dominance");
        return;
    }
    if (!eq.equivalent) return;
    for (int trial = 0; trial < 3; ++trial) {
        auto t2 = random_measurable_strategy(rng, inst, inst.oracle2, 2);
        if (mimic_search(inst, inst.oracle1, t2).outcome != MimicOutcome::Feasible) {
            persist_counterexample(fuzz, "equiv", seed, inst, "forward mimicry failed");
            return;
        }
        auto t1 = random_measurable_strategy(rng, inst, inst.oracle1, 2);
        if (mimic_search(swapped, swapped.oracle1, t1).outcome != MimicOutcome::Feasible) {
            persist_counterexample(fuzz, "equiv", seed, inst, "backward mimicry failed");
            return;
        }
    }
}

int run_fuzz(const std::string& mode, int trials, std::uint64_t base_seed, int max_states,
             const std::string& format, const std::string& out_path) {
    FuzzOutcome fuzz;
    Rng rng(base_seed ^ 0xa5a5a5a5a5a5a5a5ULL);
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t seed = base_seed + static_cast<std::uint64_t>(trial);
        if (mode == "balance") fuzz_balance(fuzz, seed, max_states, rng);
        else if (mode == "structure") fuzz_structure(fuzz, seed, max_states, rng);
        else if (mode == "noloop") fuzz_noloop(fuzz, seed, max_states, rng);
        else if (mode == "twockc") fuzz_twockc(fuzz, seed, max_states, rng);
        else fuzz_equiv(fuzz, seed, max_states, rng);
    }
    json report = {{"mode", mode},
                   {"trials", trials},
                   {"checked", fuzz.checked},
                   {"discrepancies", fuzz.discrepancies},
                   {"artifacts", fuzz.artifacts}};
    std::ostringstream text;
    text << "mode=" << mode << " trials=" << trials << " checked=" << fuzz.checked
         << " discrepancies=" << fuzz.discrepancies << "\n";
    for (const std::string& path : fuzz.artifacts) text << "  " << path << "\n";
    write_report(text.str(), report, format, out_path);
    return fuzz.discrepancies == 0 ? kAffirmative : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact comparison of information oracles over finite state spaces"};
    app.require_subcommand(1);

    std::string input_path;
    std::string format = "text";
    std::string out_path;
    std::optional<int> max_states_flag;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", input_path, "instance file (json)");
        if (needs_input) in->required();
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--out", out_path, "write the report to a file instead of stdout");
        cmd->add_option("--max-states", max_states_flag,
                        "state-count guard for this run (default 24, or "
                        "ORACLE_ORDER_MAX_STATES)")
            ->check(CLI::PositiveNumber);
    };

    auto* ckc_cmd = app.add_subcommand("ckc", "list common knowledge components");
    add_common(ckc_cmd, true);
    auto* loops_cmd = app.add_subcommand("loops", "enumerate and classify both oracles' loops");
    add_common(loops_cmd, true);
    auto* dom_cmd = app.add_subcommand("dominance", "decide dominance in both directions");
    add_common(dom_cmd, true);
    auto* eq_cmd = app.add_subcommand("equivalence", "decide oracle equivalence");
    add_common(eq_cmd, true);

    auto* mimic_cmd = app.add_subcommand("mimic", "search for a mimicking strategy");
    add_common(mimic_cmd, true);
    std::string strategy_name;
    std::optional<int> max_signals;
    mimic_cmd->add_option("--strategy", strategy_name, "name of the strategy to mimic")
        ->required();
    mimic_cmd->add_option("--max-signals", max_signals, "signal-count cap for the search")
        ->check(CLI::PositiveNumber);

    auto* verify_cmd = app.add_subcommand("verify", "compare two strategies' posterior output");
    add_common(verify_cmd, true);
    std::string t1_name, t2_name;
    verify_cmd->add_option("--t1", t1_name, "candidate strategy for oracle 1")->required();
    verify_cmd->add_option("--t2", t2_name, "target strategy")->required();

    auto* gen_cmd = app.add_subcommand("generate", "emit a reproducible random instance");
    add_common(gen_cmd, false);
    GeneratorParams gen_params;
    gen_cmd->add_option("--seed", seed, "generator seed");
    gen_cmd->add_option("--states", gen_params.n_states, "number of states");
    gen_cmd->add_option("--players", gen_params.n_players, "number of players");
    gen_cmd->add_option("--ckcs", gen_params.n_ckcs_target, "number of components");
    gen_cmd->add_option("--bias", gen_params.block_bias,
                        "percent chance an oracle block spans components");

    auto* fuzz_cmd = app.add_subcommand("fuzz", "property fuzzing with persisted failures");
    add_common(fuzz_cmd, false);
    std::string fuzz_mode;
    int trials = 100;
    fuzz_cmd->add_option("--mode", fuzz_mode, "property to fuzz")
        ->required()
        ->check(CLI::IsMember({"balance", "structure", "noloop", "twockc", "equiv"}));
    fuzz_cmd->add_option("--trials", trials, "number of seeds to try")
        ->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--seed", seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        int max_states = resolve_max_states(max_states_flag);
        if (ckc_cmd->parsed())
            return run_ckc(load_instance_file(input_path, max_states), format, out_path);
        if (loops_cmd->parsed())
            return run_loops(load_instance_file(input_path, max_states), format, out_path);
        if (dom_cmd->parsed())
            return run_dominance(load_instance_file(input_path, max_states), format, out_path);
        if (eq_cmd->parsed())
            return run_equivalence(load_instance_file(input_path, max_states), format,
                                   out_path);
        if (mimic_cmd->parsed())
            return run_mimic(load_instance_file(input_path, max_states), strategy_name,
                             max_signals, format, out_path);
        if (verify_cmd->parsed())
            return run_verify(load_instance_file(input_path, max_states), t1_name, t2_name,
                              format, out_path);
        if (gen_cmd->parsed()) return run_generate(seed, gen_params, max_states, format, out_path);
        if (fuzz_cmd->parsed())
            return run_fuzz(fuzz_mode, trials, seed, max_states, format, out_path);
    } catch (const SizeGuardError& ex) {
        std::cerr << "size guard: " << ex.what() << "\n";
        return kGuard;
    } catch (const ParseError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kBadInput;
    } catch (const nlohmann::json::exception& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kBadInput;
    } catch (const ModelError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kBadInput;
    }
    return kUsage;
}
