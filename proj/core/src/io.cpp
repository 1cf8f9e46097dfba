#include "ubgspan/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ubgspan {
namespace io {

using ordered_json = nlohmann::ordered_json;

std::string instance_to_json(const UbgInstance& inst) {
    ordered_json j;
    j["d"] = inst.d;
    j["alpha"] = inst.alpha;
    j["seed"] = inst.seed;
    j["policy"] = inst.policy.str();
    j["points"] = ordered_json::array();
    for (const Point& p : inst.points) j["points"].push_back(p);
    j["edges"] = ordered_json::array();
    for (const Edge& e : inst.edges)
        j["edges"].push_back(ordered_json::array({e.u, e.v}));
    return j.dump();
}

UbgInstance instance_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    UbgInstance inst;
    inst.d = j.at("d").get<int>();
    inst.alpha = j.at("alpha").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.policy = GenPolicy::parse(j.at("policy").get<std::string>());
    for (const auto& p : j.at("points"))
        inst.points.push_back(p.get<Point>());
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw UsageError("instance json: bad edge entry");
        inst.edges.push_back(Edge{e[0].get<int>(), e[1].get<int>()});
    }
    return inst;
}

void write_instance(const UbgInstance& inst, const std::string& path) {
    write_text(instance_to_json(inst), path);
}

UbgInstance read_instance(const std::string& path) {
    return instance_from_json(read_text(path));
}

std::string spanner_to_json(const RelaxedResult& result) {
    ordered_json j;
    j["t"] = result.params.t;
    ordered_json p;
    p["t1"] = result.params.t1;
    p["delta"] = result.params.delta;
    p["t_delta"] = result.params.t_delta;
    p["r"] = result.params.r;
    p["theta"] = result.params.theta;
    p["beta"] = result.params.beta;
    p["m"] = result.params.m;
    j["params"] = p;
    j["edges"] = ordered_json::array();
    for (const Edge& e : result.spanner)
        j["edges"].push_back(ordered_json::array({e.u, e.v}));
    j["phases"] = ordered_json::array();
    for (const PhaseMetrics& m : result.phases) {
        ordered_json ph;
        ph["i"] = m.index;
        ph["bin_size"] = m.bin_size;
        ph["queries"] = m.queries;
        ph["added"] = m.added;
        ph["removed"] = m.removed;
        j["phases"].push_back(ph);
    }
    return j.dump();
}

void write_spanner(const RelaxedResult& result, const std::string& path) {
    write_text(spanner_to_json(result), path);
}

std::string transcript_to_json(const SimTranscript& tr) {
    ordered_json j;
    j["rounds_total"] = tr.rounds_total;
    j["rounds_by_step"] = ordered_json::object();
    for (const auto& [step, rounds] : tr.rounds_by_step)
        j["rounds_by_step"][step] = rounds;
    j["max_payload_words"] = tr.max_payload_words;
    j["edges"] = ordered_json::array();
    for (const Edge& e : tr.spanner)
        j["edges"].push_back(ordered_json::array({e.u, e.v}));
    j["rounds_nonempty_phases"] = tr.rounds_nonempty_phases;
    j["phases_total"] = tr.phases_total;
    j["phases_nonempty"] = tr.phases_nonempty;
    j["messages_total"] = tr.messages_total;
    j["payload_flagged"] = tr.payload_flagged;
    j["locality_violations"] = tr.locality_violations;
    return j.dump();
}

void write_transcript(const SimTranscript& tr, const std::string& path) {
    write_text(transcript_to_json(tr), path);
}

std::string report_to_json(const verify::Report& report) {
    ordered_json j = ordered_json::object();
    for (const auto& [name, check] : report) {
        ordered_json c;
        c["pass"] = check.pass;
        c["value"] = check.value;
        c["witness"] = check.witness;
        j[name] = c;
    }
    return j.dump();
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open for writing: " + path);
    out << text << '\n';
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace io
}  // namespace ubgspan
