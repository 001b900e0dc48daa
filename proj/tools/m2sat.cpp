// Command-line front end: solve, verify, reduce, enumerate, gen, oracle.

#include "m2sat/gallery.hpp"
#include "m2sat/gen.hpp"
#include "m2sat/io.hpp"
#include "m2sat/oracle.hpp"
#include "m2sat/solver.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

using namespace m2sat;

namespace {

constexpr int kSat = 0, kUnsat = 1, kInputError = 2, kInternalError = 3;

std::mutex log_mutex;

void log_line(const std::string& s) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << s << '\n';
}

void emit(const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << j.dump(2) << '\n';
    } else {
        write_json_file(path, j);
    }
}

// Errors name the file, then the position inside it.
Instance load_instance(const std::string& path) {
    json j = read_json_file(path);
    try {
        return instance_from_json(j);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

// Runs work(i) for i < count on up to `jobs` threads; results are indexed, so output
// does not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F work) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) work(i);
        });
    for (auto& t : pool) t.join();
}

std::string output_for(const std::string& input, const std::string& out, const std::string& out_dir,
                       const std::string& suffix) {
    if (!out_dir.empty()) {
        auto stem = std::filesystem::path(input).stem().string();
        return (std::filesystem::path(out_dir) / (stem + suffix)).string();
    }
    return out;
}

int solve_one(const std::string& input, const std::string& output) {
    Instance inst;
    try {
        inst = load_instance(input);
    } catch (const IoError& e) {
        log_line(e.what());
        return kInputError;
    } catch (const std::exception& e) {
        log_line(input + ": " + e.what());
        return kInputError;
    }
    auto start = std::chrono::steady_clock::now();
    Verdict v = solve(inst);
    CheckResult check = v.sat ? verify_sat(inst, v.witness) : verify_unsat(inst, v.certificate);
    if (!check) {
        log_line(input + ": self-check failed: " + check.reason);
        return kInternalError;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(output, verdict_to_json(inst, v));
    log_line(input + ": " + (v.sat ? "SAT" : "UNSAT") + " in " + std::to_string(secs) + " s");
    return v.sat ? kSat : kUnsat;
}

int run_solve(const std::vector<std::string>& inputs, const std::string& out, const std::string& out_dir,
              std::size_t jobs) {
    if (inputs.size() > 1 && out_dir.empty()) {
        log_line("several inputs need --out-dir");
        return kInputError;
    }
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    std::vector<int> codes(inputs.size());
    parallel_for(inputs.size(), jobs,
                 [&](std::size_t i) { codes[i] = solve_one(inputs[i], output_for(inputs[i], out, out_dir, ".verdict.json")); });
    return *std::max_element(codes.begin(), codes.end());
}

int run_verify(const std::string& instance_path, const std::string& verdict_path) {
    Instance inst;
    Verdict v;
    try {
        inst = load_instance(instance_path);
        v = verdict_from_json(inst, read_json_file(verdict_path));
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
    }
    CheckResult r = v.sat ? verify_sat(inst, v.witness) : verify_unsat(inst, v.certificate);
    if (!r) {
        std::cout << "REJECT: " << r.reason << '\n';
        return 1;
    }
    std::cout << "ACCEPT " << (v.sat ? "SAT" : "UNSAT") << '\n';
    return 0;
}

int run_reduce(const std::string& input, const std::string& out, const std::string& meta_out) {
    try {
        json j = read_json_file(input);
        if (!j.is_object() || !j.contains("polygon") || !j.contains("plan"))
            throw IoError("/", "expected an object with 'polygon' and 'plan'");
        Polygon poly = polygon_from_json(j["polygon"]);
        GuardPlan plan = plan_from_json(j["plan"]);
        Reduction r = reduce(poly, plan);
        emit(out, instance_to_json(r.instance));
        if (!meta_out.empty()) emit(meta_out, r.metadata);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
    }
}

int run_enumerate(const std::string& input, std::size_t guards, std::size_t caps, const std::string& out) {
    try {
        json j = read_json_file(input);
        Polygon poly = polygon_from_json(j.is_object() ? j.at("polygon") : j);
        auto start = std::chrono::steady_clock::now();
        EnumerationResult r = enumerate_plans(poly, guards, caps);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json res = {{"status", r.sat ? "SAT" : "UNSAT"},
                    {"guards", guards},
                    {"caps", caps},
                    {"plans_tried", r.plans_tried},
                    {"plans_unsupported", r.plans_unsupported}};
        if (r.sat) {
            res["plan"] = plan_to_json(*r.plan);
            json w = json::array();
            for (const auto& s : r.witness) w.push_back(surd_to_json(s));
            res["witness"] = w;
        }
        emit(out, res);
        std::cerr << (r.sat ? "SAT" : "UNSAT within caps") << " after " << r.plans_tried << " plans in " << secs
                  << " s\n";
        return r.sat ? kSat : kUnsat;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
    }
}

int run_gen(std::uint64_t seed, const GenOptions& opts, std::size_t count, const std::string& out,
            const std::string& out_dir, std::size_t jobs) {
    if (count > 1 && out_dir.empty()) {
        std::cerr << "--count above 1 needs --out-dir\n";
        return kInputError;
    }
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    parallel_for(count, jobs, [&](std::size_t i) {
        Instance inst = generate_instance(seed + i, opts);
        std::string path = out_dir.empty()
                               ? out
                               : (std::filesystem::path(out_dir) / ("inst_" + std::to_string(seed + i) + ".json")).string();
        emit(path, instance_to_json(inst));
    });
    return 0;
}

int run_oracle(const std::string& input, double tolerance, const std::string& out) {
    Instance inst;
    try {
        inst = load_instance(input);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
    }
    OracleOptions opts;
    opts.tolerance = tolerance;
    OracleResult r = numeric_oracle(inst, opts);
    json res = {{"status", oracle_verdict_name(r.verdict)}};
    if (!r.note.empty()) res["note"] = r.note;
    if (r.verdict == OracleVerdict::Sat) {
        json a = json::object();
        for (std::size_t i = 0; i < r.assignment.size(); ++i) a[inst.names[i]] = r.assignment[i];
        res["assignment"] = a;
    }
    emit(out, res);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for two-variable monotone fractional-linear constraints"};
    app.require_subcommand(1);

    std::vector<std::string> inputs;
    std::string input, verdict_path, out = "-", out_dir, meta_out;
    std::size_t jobs = 1, guards = 1, caps = 1, count = 1;
    std::uint64_t seed = 0;
    double tolerance = 1e-6;
    GenOptions gen;

    auto* solve_cmd = app.add_subcommand("solve", "Decide an instance and write a verdict");
    solve_cmd->add_option("inputs", inputs, "Instance files")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("-o,--out", out, "Verdict file for a single input ('-' for stdout)");
    solve_cmd->add_option("--out-dir", out_dir, "Directory for verdicts of several inputs");
    solve_cmd->add_option("--jobs", jobs, "Instances solved in parallel");

    auto* verify_cmd = app.add_subcommand("verify", "Check a verdict against an instance");
    verify_cmd->add_option("instance", input, "Instance file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("verdict", verdict_path, "Verdict file")->required()->check(CLI::ExistingFile);

    auto* reduce_cmd = app.add_subcommand("reduce", "Turn a polygon and guarding plan into an instance");
    reduce_cmd->add_option("input", input, "File with 'polygon' and 'plan'")->required()->check(CLI::ExistingFile);
    reduce_cmd->add_option("-o,--out", out, "Instance file");
    reduce_cmd->add_option("--meta", meta_out, "Per-constraint provenance file");

    auto* enum_cmd = app.add_subcommand("enumerate", "Try every guarding plan within the caps");
    enum_cmd->add_option("input", input, "Polygon file")->required()->check(CLI::ExistingFile);
    enum_cmd->add_option("--guards", guards, "Number of guards")->check(CLI::PositiveNumber);
    enum_cmd->add_option("--caps", caps, "Intervals per edge")->check(CLI::PositiveNumber);
    enum_cmd->add_option("-o,--out", out, "Result file");

    auto* gen_cmd = app.add_subcommand("gen", "Write seeded random instances");
    gen_cmd->add_option("--seed", seed, "Seed of the first instance");
    gen_cmd->add_option("--n", gen.n, "Variables")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--pieces", gen.max_pieces, "Maximum pieces per constraint")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--constraints", gen.max_constraints, "Maximum constraints (0 means 2n)");
    gen_cmd->add_option("--magnitude", gen.magnitude, "Bound on ranges and breakpoints")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--count", count, "Instances, with seeds seed, seed+1, ...")->check(CLI::PositiveNumber);
    gen_cmd->add_option("-o,--out", out, "Instance file for a single instance");
    gen_cmd->add_option("--out-dir", out_dir, "Directory for several instances");
    gen_cmd->add_option("--jobs", jobs, "Instances generated in parallel");

    auto* oracle_cmd = app.add_subcommand("oracle", "Floating-point cross-check (advisory)");
    oracle_cmd->add_option("input", input, "Instance file")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--tolerance", tolerance, "Margin below which the verdict is MARGINAL");
    oracle_cmd->add_option("-o,--out", out, "Result file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (*solve_cmd) return run_solve(inputs, out, out_dir, jobs);
    if (*verify_cmd) return run_verify(input, verdict_path);
    if (*reduce_cmd) return run_reduce(input, out, meta_out);
    if (*enum_cmd) return run_enumerate(input, guards, caps, out);
    if (*gen_cmd) return run_gen(seed, gen, count, out, out_dir, jobs);
    if (*oracle_cmd) return run_oracle(input, tolerance, out);
    return kInputError;
}
