#pragma once

#include "oracle_order/model.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace oracle_order {

using nlohmann::json;

inline json partition_to_json(const Partition& p, const StateSpace& space) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) {
        json names = json::array();
        for (int s : b) names.push_back(space.names[s]);
        blocks.push_back(names);
    }
    return blocks;
}

inline Partition partition_from_json(const json& j, const StateSpace& space) {
    std::vector<std::vector<int>> blocks;
    for (const auto& jb : j) {
        std::vector<int> b;
        for (const auto& name : jb) b.push_back(space.index_of(name.get<std::string>()));
        blocks.push_back(std::move(b));
    }
    return Partition::from_blocks(space.state_count(), std::move(blocks));
}

inline json strategy_to_json(const SignalingStrategy& t, const StateSpace& space) {
    json rows = json::object();
    for (int w = 0; w < t.state_count(); ++w) {
        json row = json::array();
        for (const Rat& x : t.rows[w]) row.push_back(format_rational(x));
        rows[space.names[w]] = row;
    }
    return json{{"signals", t.signals}, {"rows", rows}};
}

inline SignalingStrategy strategy_from_json(const json& j, const StateSpace& space) {
    SignalingStrategy t;
    t.signals = j.at("signals").get<std::vector<std::string>>();
    t.rows.assign(space.state_count(), {});
    const json& rows = j.at("rows");
    for (int w = 0; w < space.state_count(); ++w) {
        const json& row = rows.at(space.names[w]);
        for (const auto& cell : row) t.rows[w].push_back(parse_rational(cell.get<std::string>()));
    }
    t.validate(space.state_count());
    return t;
}

inline json instance_to_json(const Instance& inst) {
    json prior = json::object();
    for (int w = 0; w < inst.state_count(); ++w)
        prior[inst.space.names[w]] = format_rational(inst.space.prior[w]);
    json players = json::array();
    for (const auto& pl : inst.players) players.push_back(partition_to_json(pl, inst.space));
    json doc{{"states", inst.space.names},
             {"prior", prior},
             {"players", players},
             {"oracle1", partition_to_json(inst.oracle1, inst.space)},
             {"oracle2", partition_to_json(inst.oracle2, inst.space)}};
    if (!inst.strategies.empty()) {
        json strategies = json::object();
        for (const auto& [name, t] : inst.strategies)
            strategies[name] = strategy_to_json(t, inst.space);
        doc["strategies"] = strategies;
    }
    return doc;
}

inline Instance instance_from_json(const json& doc) {
    Instance inst;
    inst.space.names = doc.at("states").get<std::vector<std::string>>();
    const json& prior = doc.at("prior");
    for (const auto& name : inst.space.names)
        inst.space.prior.push_back(parse_rational(prior.at(name).get<std::string>()));
    for (const auto& jp : doc.at("players"))
        inst.players.push_back(partition_from_json(jp, inst.space));
    inst.oracle1 = partition_from_json(doc.at("oracle1"), inst.space);
    inst.oracle2 = partition_from_json(doc.at("oracle2"), inst.space);
    if (doc.contains("strategies"))
        for (const auto& [name, jt] : doc.at("strategies").items())
            inst.strategies[name] = strategy_from_json(jt, inst.space);
    inst.validate();
    return inst;
}

inline json profile_to_json(const PosteriorProfile& p, const StateSpace& space) {
    json players = json::array();
    for (const auto& belief : p.beliefs) {
        json entries = json::object();
        for (const auto& [w, prob] : belief) entries[space.names[w]] = format_rational(prob);
        players.push_back(entries);
    }
    return players;
}

inline json distribution_to_json(const PosteriorDistribution& dist, const StateSpace& space) {
    json out = json::array();
    for (const auto& [profile, prob] : dist)
        out.push_back(json{{"profile", profile_to_json(profile, space)},
                           {"probability", format_rational(prob)}});
    return out;
}

}  // namespace oracle_order
