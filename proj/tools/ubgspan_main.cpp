// Command-line front end: instance generation, the three spanner engines
// with verification-on-write, and the benchmark sweep.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ubgspan/distsim.hpp"
#include "ubgspan/greedy.hpp"
#include "ubgspan/io.hpp"
#include "ubgspan/relaxed.hpp"
#include "ubgspan/verify.hpp"

namespace {

using namespace ubgspan;

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitUsage = 2;

struct RunOutput {
    std::vector<Edge> spanner;
    RelaxedResult as_relaxed;  // what the spanner file is written from
    SimTranscript transcript;  // dist only
    bool has_transcript = false;
};

RunOutput run_engine(const std::string& algo, const UbgInstance& inst,
                     double t, std::uint64_t seed) {
    RunOutput out;
    if (algo == "seq-greedy") {
        WeightedGraph g = instance_graph(inst);
        out.spanner = seq_greedy(g, t);
        out.as_relaxed.params.t = t;
        PhaseMetrics m;
        m.bin_size = g.edge_count();
        m.queries = g.edge_count();
        m.added = out.spanner.size();
        out.as_relaxed.phases.push_back(m);
        out.as_relaxed.spanner = out.spanner;
    } else if (algo == "relaxed") {
        out.as_relaxed = run_relaxed_greedy(inst, t);
        out.spanner = out.as_relaxed.spanner;
    } else if (algo == "dist") {
        SimConfig cfg;
        cfg.inst = inst;
        cfg.t = t;
        cfg.params = derive_params(t, inst.alpha, inst.n());
        cfg.seed = seed;
        out.transcript = run_distributed(cfg);
        out.has_transcript = true;
        out.spanner = out.transcript.spanner;
        out.as_relaxed.params = cfg.params;
        out.as_relaxed.phases = out.transcript.phase_metrics;
        out.as_relaxed.spanner = out.spanner;
    } else {
        throw UsageError("unknown algo '" + algo + "'");
    }
    return out;
}

int cmd_gen(int n, int d, double alpha, const std::string& policy,
            std::uint64_t seed, const std::string& out_path) {
    UbgInstance inst =
        generate_instance(n, d, alpha, GenPolicy::parse(policy), seed);
    auto violations = validate_instance(inst);
    if (!violations.empty()) {
        std::cerr << "generated instance failed validation ("
                  << violations[0].kind << ")\n";
        return kExitCertificate;
    }
    io::write_instance(inst, out_path);
    return kExitOk;
}

int cmd_run(const std::string& algo, double t, const std::string& input,
            const std::string& out_path, std::uint64_t seed,
            std::string transcript_path, const std::string& report_path) {
    UbgInstance inst = io::read_instance(input);
    auto violations = validate_instance(inst);
    if (!violations.empty())
        throw UsageError("input instance invalid: " + violations[0].kind);

    RunOutput out = run_engine(algo, inst, t, seed);

    // A spanner file is never emitted without its certificate.
    verify::Report report;
    report["spanner"] = verify::check_spanner(inst, out.spanner, t);
    if (!report["spanner"].pass) {
        std::cerr << io::report_to_json(report) << '\n';
        return kExitCertificate;
    }
    report["degree"].value = verify::check_degree(out.spanner);
    report["weight_ratio"] = verify::weight_ratio(inst, out.spanner);
    report["power_cost"].value = verify::power_cost(inst, out.spanner);
    io::write_spanner(out.as_relaxed, out_path);
    if (out.has_transcript) {
        if (transcript_path.empty())
            transcript_path = out_path + ".transcript.json";
        io::write_transcript(out.transcript, transcript_path);
    }
    if (!report_path.empty())
        io::write_text(io::report_to_json(report), report_path);
    return kExitOk;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

int cmd_bench(const std::vector<int>& sizes, int seeds, double t, int d,
              double alpha, const std::string& policy, const std::string& algo,
              const std::string& out_path) {
    std::ostringstream csv;
    csv << "size,seed,algo,t,max_degree,weight_ratio,rounds_total,"
           "rounds_nonempty_phases,phases,ms_elapsed\n";
    GenPolicy pol = GenPolicy::parse(policy);
    for (int n : sizes) {
        std::vector<double> degs, ratios, rounds, phases, times;
        for (int seed = 1; seed <= seeds; ++seed) {
            UbgInstance inst = generate_instance(n, d, alpha, pol, seed);
            auto t0 = std::chrono::steady_clock::now();
            RunOutput out = run_engine(algo, inst, t, seed);
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            auto cert = verify::check_spanner(inst, out.spanner, t);
            if (!cert.pass) {
                std::cerr << "certificate failed at n=" << n
                          << " seed=" << seed << "\n";
                return kExitCertificate;
            }
            int deg = verify::check_degree(out.spanner);
            double ratio = verify::weight_ratio(inst, out.spanner).value;
            long rt = out.has_transcript ? out.transcript.rounds_total : 0;
            long rn =
                out.has_transcript ? out.transcript.rounds_nonempty_phases : 0;
            long ph = out.has_transcript
                          ? out.transcript.phases_total
                          : (algo == "relaxed" ? out.as_relaxed.params.m + 1
                                               : 1);
            csv << n << ',' << seed << ',' << algo << ',' << t << ',' << deg
                << ',' << ratio << ',' << rt << ',' << rn << ',' << ph << ','
                << ms << '\n';
            degs.push_back(deg);
            ratios.push_back(ratio);
            rounds.push_back(static_cast<double>(rt));
            phases.push_back(static_cast<double>(ph));
            times.push_back(static_cast<double>(ms));
        }
        std::cerr << "median n=" << n << " algo=" << algo
                  << " max_degree=" << median(degs)
                  << " weight_ratio=" << median(ratios)
                  << " rounds_total=" << median(rounds)
                  << " phases=" << median(phases) << " ms=" << median(times)
                  << '\n';
    }
    if (out_path.empty())
        std::cout << csv.str();
    else
        io::write_text(csv.str(), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-degree lightweight spanners of quasi unit ball "
                 "graphs: generator, engines, verification, benchmarks"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate an instance file");
    int gen_n = 0, gen_d = 2;
    double gen_alpha = 1.0;
    std::string gen_policy = "all", gen_out;
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--d", gen_d, "dimension (>= 2)");
    gen->add_option("--alpha", gen_alpha, "alpha in (0, 1]");
    gen->add_option("--policy", gen_policy, "all | none | bernoulli:p");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output instance file")->required();

    auto* run = app.add_subcommand("run", "run an engine on an instance");
    std::string run_algo, run_input, run_out, run_transcript;
    double run_t = 0.0;
    std::uint64_t run_seed = 0;
    run->add_option("--algo", run_algo, "seq-greedy | relaxed | dist")
        ->required();
    run->add_option("--t", run_t, "target stretch")->required();
    run->add_option("--input", run_input, "instance file")->required();
    run->add_option("--out", run_out, "output spanner file")->required();
    run->add_option("--seed", run_seed, "simulator seed (dist)");
    run->add_option("--transcript", run_transcript,
                    "transcript file (dist; default <out>.transcript.json)");
    std::string run_report;
    run->add_option("--report", run_report,
                    "also write the verification report JSON here");

    auto* bench = app.add_subcommand("bench", "benchmark sweep, CSV output");
    std::string bench_sizes = "50,100,200,400", bench_policy = "bernoulli:0.5";
    std::string bench_algo = "dist", bench_out;
    int bench_seeds = 10, bench_d = 2;
    double bench_t = 1.5, bench_alpha = 0.7;
    bench->add_option("--sizes", bench_sizes, "comma-separated node counts");
    bench->add_option("--seeds", bench_seeds, "seeds 1..k per size");
    bench->add_option("--t", bench_t, "target stretch");
    bench->add_option("--d", bench_d, "dimension");
    bench->add_option("--alpha", bench_alpha, "alpha in (0, 1]");
    bench->add_option("--policy", bench_policy, "band policy");
    bench->add_option("--algo", bench_algo, "engine to benchmark");
    bench->add_option("--out", bench_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_n, gen_d, gen_alpha, gen_policy, gen_seed,
                           gen_out);
        if (run->parsed())
            return cmd_run(run_algo, run_t, run_input, run_out, run_seed,
                           run_transcript, run_report);
        if (bench->parsed()) {
            std::vector<int> sizes;
            std::stringstream ss(bench_sizes);
            std::string item;
            while (std::getline(ss, item, ','))
                sizes.push_back(std::stoi(item));
            if (sizes.empty()) throw UsageError("empty --sizes");
            return cmd_bench(sizes, bench_seeds, bench_t, bench_d, bench_alpha,
                             bench_policy, bench_algo, bench_out);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCertificate;
    }
    return kExitUsage;
}
