// Copyright 2026 The dshadow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dshadow: derandomize / simulate / estimate / benchmark front-end.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dshadow/derandomizer.hpp"
#include "dshadow/estimator.hpp"
#include "dshadow/io.hpp"
#include "dshadow/models.hpp"
#include "dshadow/pauli_io.hpp"

using namespace dshadow;

namespace {

constexpr const char *kVersion = "0.1.0";

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::domain:
        case ErrorKind::unsupported:
            return 2;
        case ErrorKind::parse:
            return 3;
        case ErrorKind::dimension:
        case ErrorKind::state:
            return 4;
        case ErrorKind::resource:
        case ErrorKind::internal:
            return 5;
    }
    return 5;
}

std::string sha256_file(const std::string &path) {
    std::string data = read_text_file(path);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; i++) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

/// Command, flags, seed, input digests, version and wall-clock of one run.
class Manifest {
   public:
    Manifest(std::string command, const CLI::App &app) : command_(std::move(command)) {
        start_ = std::chrono::steady_clock::now();
        for (const CLI::Option *opt : app.get_options()) {
            if (opt->get_name() == "--help" || opt->count() == 0) {
                continue;
            }
            auto res = opt->results();
            std::string name = opt->get_name();
            while (!name.empty() && name[0] == '-') {
                name.erase(0, 1);
            }
            flags_[name] = res.empty() ? json(true) : (res.size() == 1 ? json(res[0]) : json(res));
        }
    }

    void input(const std::string &path) { inputs_[path] = sha256_file(path); }
    void seed(uint64_t s) { seed_ = s; }

    json to_json() const {
        json j;
        j["tool"] = "dshadow";
        j["version"] = kVersion;
        j["command"] = command_;
        j["flags"] = flags_;
        j["seed"] = seed_ ? json(*seed_) : json(nullptr);
        j["inputs"] = inputs_;
        j["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return j;
    }

    /// Single-line form for text artifacts.
    std::string comment_line() const { return "# manifest " + to_json().dump() + "\n"; }

   private:
    std::string command_;
    json flags_ = json::object();
    json inputs_ = json::object();
    std::optional<uint64_t> seed_;
    std::chrono::steady_clock::time_point start_;
};

/// Writes to a file, or stdout for "" / "-".
class Output {
   public:
    explicit Output(const std::string &path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            require(bool(*file_), ErrorKind::parse, "cannot write '" + path + "'");
        }
    }
    std::ostream &operator*() { return file_ ? *file_ : std::cout; }

   private:
    std::unique_ptr<std::ofstream> file_;
};

WeightedPauliSet load_paulis(const std::string &path, Manifest &m) {
    m.input(path);
    return read_pauli_list_file(path);
}

std::string data_file(const std::string &name) { return std::string(DSHADOW_DATA_DIR) + "/" + name; }

WeightSource parse_weights(const std::string &w) {
    if (w == "abs-coeff") {
        return WeightSource::abs_coefficient;
    }
    return WeightSource::uniform;
}

std::vector<Circuit> realize_all(const std::vector<EnsembleSpec> &specs) {
    std::vector<Circuit> out;
    out.reserve(specs.size());
    for (const auto &s : specs) {
        out.push_back(realize_fixed_circuit(s));
    }
    return out;
}

// ---- derandomize ------------------------------------------------------------

struct DerandomizeFlags {
    std::string paulis, out, log, order, weights = "uniform";
    uint32_t depth = 0;
    double epsilon = 0;
    uint64_t shots = 0, per_observable = 0, seed = 0;
    bool relaxed = false;
    unsigned threads = 0;
};

void add_derandomize(CLI::App &app, DerandomizeFlags &f, std::function<void()> run) {
    auto *sub = app.add_subcommand("derandomize", "Greedy derandomization into fixed measurement circuits");
    sub->add_option("--paulis", f.paulis, "Pauli-list file")->required();
    sub->add_option("--depth", f.depth, "Two-qubit layers per circuit")->required();
    sub->add_option("--epsilon", f.epsilon, "Target precision in the cost function")->required();
    auto *shots = sub->add_option("--shots", f.shots, "Fixed measurement budget N");
    auto *per = sub->add_option("--per-observable", f.per_observable, "Measure every Pauli at least K times");
    shots->excludes(per);
    sub->add_option("--weights", f.weights, "Cost weights")->check(CLI::IsMember({"uniform", "abs-coeff"}));
    sub->add_flag("--relaxed", f.relaxed, "Allow keeping a gate twirled (fixed budget only)");
    sub->add_option("--order", f.order, "Slot-order file")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Recorded in the manifest; the algorithm is deterministic");
    sub->add_option("--out", f.out, "Circuit JSON output (default stdout)");
    sub->add_option("--log", f.log, "Cost-trajectory TSV output");
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    sub->callback([sub, &f, run] {
        if (sub->count("--shots") + sub->count("--per-observable") != 1) {
            throw CLI::ValidationError("exactly one of --shots / --per-observable is required");
        }
        if (sub->count("--shots") && f.shots == 0) {
            throw CLI::ValidationError("--shots must be at least 1");
        }
        if (sub->count("--per-observable") && f.per_observable == 0) {
            throw CLI::ValidationError("--per-observable must be at least 1");
        }
        if (!(f.epsilon > 0)) {
            throw CLI::ValidationError("--epsilon must be positive");
        }
        if (f.relaxed && sub->count("--per-observable")) {
            throw CLI::ValidationError("--relaxed needs --shots");
        }
        run();
    });
}

void run_derandomize(const DerandomizeFlags &f, const CLI::App &sub) {
    Manifest m("derandomize", sub);
    m.seed(f.seed);
    auto paulis = load_paulis(f.paulis, m);
    RunConfig cfg;
    cfg.d = f.depth;
    cfg.relaxed = f.relaxed;
    cfg.weights = parse_weights(f.weights);
    cfg.threads = f.threads;
    cfg.record_log = !f.log.empty();
    if (!f.order.empty()) {
        m.input(f.order);
        cfg.slot_order = read_slot_order(f.order);
    }
    CostParams params;
    params.epsilon = f.epsilon;
    DerandomizationResult r;
    if (f.per_observable > 0) {
        r = derandomize_until_covered(paulis, f.per_observable, cfg, params);
    } else {
        cfg.shots = f.shots;
        r = derandomize(paulis, cfg, params);
    }
    json doc;
    doc["manifest"] = m.to_json();
    doc["n"] = paulis.num_qubits();
    doc["d"] = f.depth;
    doc["epsilon"] = f.epsilon;
    doc["shots"] = r.specs.size();
    doc["log_cost"] = r.log_cost;
    doc["cost"] = r.cost;
    json hits = json::array();
    for (size_t i = 0; i < paulis.size(); i++) {
        hits.push_back({{"pauli", paulis[i].pauli.str()}, {"h", r.hits.h[i]}});
    }
    doc["hits"] = std::move(hits);
    json circuits = json::array();
    for (const auto &s : r.specs) {
        circuits.push_back(spec_to_json(s));
    }
    doc["circuits"] = std::move(circuits);
    Output out(f.out);
    *out << doc.dump(1) << '\n';
    if (!f.log.empty()) {
        Output log(f.log);
        *log << m.comment_line();
        write_run_log(*log, r.log);
    }
}

// ---- simulate ---------------------------------------------------------------

struct SimulateFlags {
    std::string circuits, state, out;
    uint64_t seed = 0;
};

StateVector load_state(const std::string &spec, Manifest &m) {
    auto colon = spec.find(':');
    require(colon != std::string::npos, ErrorKind::domain, "--state must be ground:FILE or file:FILE");
    std::string kind = spec.substr(0, colon), path = spec.substr(colon + 1);
    m.input(path);
    if (kind == "ground") {
        return ground_state(read_pauli_list_file(path)).state;
    }
    require(kind == "file", ErrorKind::domain, "--state must be ground:FILE or file:FILE");
    return read_state_file(path);
}

void run_simulate(const SimulateFlags &f, const CLI::App &sub) {
    Manifest m("simulate", sub);
    m.seed(f.seed);
    m.input(f.circuits);
    auto specs = read_circuit_file(f.circuits);
    auto psi = load_state(f.state, m);
    require(psi.n == specs.front().n, ErrorKind::dimension,
            "state has " + std::to_string(psi.n) + " qubits, circuits have " + std::to_string(specs.front().n));
    auto records = RepeatedSimulator(realize_all(specs), psi).run(f.seed);
    Output out(f.out);
    *out << m.comment_line();
    write_outcomes(*out, records);
}

// ---- estimate ---------------------------------------------------------------

struct EstimateFlags {
    std::string circuits, outcomes, paulis, truth, out, format = "json";
    double epsilon = 0;
};

void run_estimate(const EstimateFlags &f, const CLI::App &sub) {
    Manifest m("estimate", sub);
    m.input(f.circuits);
    m.input(f.outcomes);
    auto specs = read_circuit_file(f.circuits);
    auto paulis = load_paulis(f.paulis, m);
    std::istringstream in(read_text_file(f.outcomes));
    auto records = read_outcomes(in, f.outcomes);
    auto rep = build_report(realize_all(specs), records, paulis, f.epsilon);
    if (!f.truth.empty()) {
        m.input(f.truth);
        auto tv = read_true_values(f.truth);
        std::vector<double> values;
        for (const auto &row : rep.rows) {
            auto it = std::find_if(tv.begin(), tv.end(), [&](const auto &e) { return e.first.same_masks(row.pauli); });
            require(it != tv.end(), ErrorKind::domain, "no true value for " + row.pauli.str());
            values.push_back(it->second);
        }
        attach_truth(rep, values);
    }
    if (rep.flagged() > 0) {
        std::cerr << "warning: " << rep.flagged() << " Pauli(s) never measured; their estimates are 0\n";
    }
    Output out(f.out);
    if (f.format == "csv") {
        *out << m.comment_line();
        write_report_csv(*out, rep);
    } else {
        json doc;
        doc["manifest"] = m.to_json();
        doc["report"] = report_to_json(rep);
        *out << doc.dump(1) << '\n';
    }
}

// ---- benchmark --------------------------------------------------------------

struct BenchmarkFlags {
    std::string target, paulis, out, log;
    double epsilon = 0;
    uint64_t sims = 500, seed = 1, shots = 0, per_observable = 25;
    std::optional<uint32_t> depth;
    uint32_t qubits = 12, shallow_max_depth = 4;
    bool skip_shallow = false;
    unsigned threads = 0;
};

/// CSV table with a manifest comment line.
class Table {
   public:
    explicit Table(std::vector<std::string> cols) : cols_(std::move(cols)) {}
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    void write(std::ostream &out, const Manifest &m) const {
        out << m.comment_line();
        for (size_t i = 0; i < cols_.size(); i++) {
            out << (i ? "," : "") << cols_[i];
        }
        out << '\n';
        for (const auto &r : rows_) {
            for (size_t i = 0; i < r.size(); i++) {
                out << (i ? "," : "") << r[i];
            }
            out << '\n';
        }
    }

   private:
    std::vector<std::string> cols_;
    std::vector<std::vector<std::string>> rows_;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void bench_h2(const BenchmarkFlags &f, Manifest &m, Table &t) {
    auto h = load_paulis(f.paulis.empty() ? data_file("h2_4q.paulis") : f.paulis, m);
    auto g = ground_state(h);
    uint64_t shots = f.shots ? f.shots : 1000;
    uint32_t depth = f.depth.value_or(1);
    CostParams params;
    params.epsilon = f.epsilon;
    std::vector<uint32_t> depths = {depth};
    if (depth != 0) {
        depths.push_back(0);
    }
    for (uint32_t d : depths) {
        RunConfig cfg;
        cfg.d = d;
        cfg.shots = shots;
        cfg.weights = WeightSource::abs_coefficient;
        cfg.threads = f.threads;
        cfg.record_log = false;
        auto r = derandomize(h, cfg, params);
        auto circuits = realize_all(r.specs);
        CircuitBank bank(circuits);
        RepeatedSimulator sim(circuits, g.state);
        std::vector<double> estimates;
        double abs_err = 0;
        for (uint64_t s = 0; s < f.sims; s++) {
            auto recs = sim.run(f.seed + s);
            double e = 0;
            for (const auto &term : h) {
                e += term.coefficient * tally(bank, recs, term.pauli).estimate();
            }
            estimates.push_back(e);
            abs_err += std::abs(e - g.energy);
        }
        t.row({"dss", std::to_string(d), std::to_string(shots), std::to_string(f.sims), num(abs_err / f.sims),
               num(mse(g.energy, estimates)), d == 1 && shots == 1000 ? "0.0096" : ""});
    }
}

void bench_bell(const BenchmarkFlags &f, Manifest &m, Table &t) {
    auto set = load_paulis(f.paulis.empty() ? data_file("bell.paulis") : f.paulis, m);
    uint64_t shots = f.shots ? f.shots : 100;
    RunConfig cfg;
    cfg.d = f.depth.value_or(3);
    cfg.shots = shots;
    cfg.threads = f.threads;
    cfg.record_log = !f.log.empty();
    CostParams params;
    params.epsilon = f.epsilon;
    auto r = derandomize(set, cfg, params);
    std::vector<std::string> seen;
    for (const auto &s : r.specs) {
        std::string key = spec_to_json(s).dump();
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
            seen.push_back(key);
        }
    }
    double ideal = std::log(2.0 * set.size()) - params.exponent_scale() * double(shots);
    t.row({"dss", std::to_string(cfg.d), std::to_string(shots), std::to_string(seen.size()), num(r.hits.min()),
           num(r.log_cost), num(ideal)});
    if (!f.log.empty()) {
        Output log(f.log);
        *log << m.comment_line();
        write_run_log(*log, r.log);
    }
}

void bench_hubbard(const BenchmarkFlags &f, Manifest &m, Table &t) {
    require(f.qubits >= 4 && f.qubits % 2 == 0, ErrorKind::domain, "--qubits must be even and at least 4");
    HubbardParams hp;
    hp.L = f.qubits / 2;
    auto h2 = hubbard_square_targets(hp);
    const uint64_t no = f.per_observable;
    uint32_t depth = f.depth.value_or(0);
    RunConfig cfg;
    cfg.d = depth;
    cfg.threads = f.threads;
    cfg.record_log = false;
    CostParams params;
    params.epsilon = f.epsilon;
    auto r = derandomize_until_covered(h2, no, cfg, params);
    std::string ref = f.qubits == 12 && no == 25 && depth == 0 ? "1236" : "";
    t.row({"dss", std::to_string(depth), std::to_string(f.qubits), std::to_string(h2.size()),
           std::to_string(r.specs.size()), ref});
    t.row({"naive_grouping", "0", std::to_string(f.qubits), std::to_string(h2.size()),
           std::to_string(naive_grouping_bases(f.qubits).size() * no), ""});
    t.row({"direct", "0", std::to_string(f.qubits), std::to_string(h2.size()),
           std::to_string(direct_measurement_plan(h2, no).size()), ""});
    if (!f.skip_shallow) {
        auto scan = scan_shallow_depth(h2, f.shallow_max_depth, no, f.seed);
        t.row({"shallow_shadows", std::to_string(scan.best_depth), std::to_string(f.qubits),
               std::to_string(h2.size()), std::to_string(scan.shots[scan.best_depth]), ""});
    }
}

void bench_random30(const BenchmarkFlags &f, Manifest &m, Table &t) {
    auto set = load_paulis(f.paulis.empty() ? data_file("random30.paulis") : f.paulis, m);
    uint64_t shots = f.shots ? f.shots : 100;
    CostParams params;
    params.epsilon = f.epsilon;
    RunConfig cfg;
    cfg.d = f.depth.value_or(3);
    cfg.shots = shots;
    cfg.threads = f.threads;
    cfg.record_log = !f.log.empty();
    auto strict = derandomize(set, cfg, params);
    cfg.relaxed = true;
    auto chk = relaxed_dominates_shallow_check(set, cfg, params);
    auto mean = [](const std::vector<double> &v) {
        double s = 0;
        for (double x : v) {
            s += x;
        }
        return s / double(v.size());
    };
    t.row({"shallow_shadows", std::to_string(cfg.d), std::to_string(shots), num(chk.log_cost_shallow), "", ""});
    t.row({"dss", std::to_string(cfg.d), std::to_string(shots), num(strict.log_cost), num(strict.hits.min()),
           num(mean(strict.hits.h))});
    t.row({"dss_relaxed", std::to_string(cfg.d), std::to_string(shots), num(chk.log_cost_dss),
           num(chk.result.hits.min()), num(mean(chk.result.hits.h))});
    if (!f.log.empty()) {
        Output log(f.log);
        *log << m.comment_line();
        write_run_log(*log, strict.log);
    }
}

void run_benchmark(const BenchmarkFlags &f, const CLI::App &sub) {
    Manifest m("benchmark " + f.target, sub);
    m.seed(f.seed);
    std::unique_ptr<Table> t;
    if (f.target == "h2") {
        t = std::make_unique<Table>(std::vector<std::string>{"strategy", "depth", "shots", "sims", "mean_abs_error",
                                                             "mse", "reference_mean_abs_error"});
        bench_h2(f, m, *t);
    } else if (f.target == "bell") {
        t = std::make_unique<Table>(std::vector<std::string>{"strategy", "depth", "shots", "distinct_circuits",
                                                             "min_hits", "log_cost", "log_cost_all_hit"});
        bench_bell(f, m, *t);
    } else if (f.target == "hubbard") {
        t = std::make_unique<Table>(
            std::vector<std::string>{"strategy", "depth", "qubits", "paulis", "shots", "reference_shots"});
        bench_hubbard(f, m, *t);
    } else {
        t = std::make_unique<Table>(
            std::vector<std::string>{"strategy", "depth", "shots", "log_cost", "min_hits", "mean_hits"});
        bench_random30(f, m, *t);
    }
    Output out(f.out);
    t->write(*out, m);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Derandomized shallow-shadow measurement design"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    DerandomizeFlags df;
    add_derandomize(app, df, [&] { run_derandomize(df, *app.get_subcommand("derandomize")); });

    SimulateFlags sf;
    auto *sim = app.add_subcommand("simulate", "Sample one outcome per circuit from a state");
    sim->add_option("--circuits", sf.circuits, "Circuit JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--state", sf.state, "ground:PAULI_FILE or file:AMPLITUDE_FILE")->required();
    sim->add_option("--seed", sf.seed, "Sampling seed")->required();
    sim->add_option("--out", sf.out, "Outcome TSV (default stdout)");
    sim->callback([&] { run_simulate(sf, *sim); });

    EstimateFlags ef;
    auto *est = app.add_subcommand("estimate", "Pauli estimates and bounds from outcomes");
    est->add_option("--circuits", ef.circuits, "Circuit JSON")->required()->check(CLI::ExistingFile);
    est->add_option("--outcomes", ef.outcomes, "Outcome TSV")->required()->check(CLI::ExistingFile);
    est->add_option("--paulis", ef.paulis, "Pauli-list file")->required()->check(CLI::ExistingFile);
    est->add_option("--epsilon", ef.epsilon, "Precision for the confidence bounds")
        ->required()
        ->check(CLI::PositiveNumber);
    est->add_option("--true-values", ef.truth, "Lines of '<pauli> <value>' for error columns")
        ->check(CLI::ExistingFile);
    est->add_option("--format", ef.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    est->add_option("--out", ef.out, "Report output (default stdout)");
    est->callback([&] { run_estimate(ef, *est); });

    BenchmarkFlags bf;
    auto *bench = app.add_subcommand("benchmark", "Scripted benchmark pipelines");
    bench->add_option("target", bf.target, "h2 | bell | hubbard | random30")
        ->required()
        ->check(CLI::IsMember({"h2", "bell", "hubbard", "random30"}));
    bench->add_option("--epsilon", bf.epsilon, "Cost-function precision")->required()->check(CLI::PositiveNumber);
    bench->add_option("--paulis", bf.paulis, "Override the bundled Pauli set")->check(CLI::ExistingFile);
    bench->add_option("--shots", bf.shots, "Measurement budget")->check(CLI::PositiveNumber);
    bench->add_option("--depth", bf.depth, "Circuit depth");
    bench->add_option("--sims", bf.sims, "Simulations (h2)")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bf.seed, "Sampling seed");
    bench->add_option("--qubits", bf.qubits, "Hubbard qubit count");
    bench->add_option("--per-observable", bf.per_observable, "Hubbard coverage target")->check(CLI::PositiveNumber);
    bench->add_option("--shallow-max-depth", bf.shallow_max_depth, "Hubbard shallow-shadow depth scan limit");
    bench->add_flag("--skip-shallow", bf.skip_shallow, "Hubbard: skip the shallow-shadow column");
    bench->add_option("--log", bf.log, "Cost-trajectory TSV (bell, random30)");
    bench->add_option("--out", bf.out, "CSV output (default stdout)");
    bench->add_option("--threads", bf.threads, "Worker threads (0 = all cores)");
    bench->callback([&] { run_benchmark(bf, *bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 5;
    }
    return 0;
}
