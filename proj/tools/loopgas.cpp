// Copyright 2026 The loopgas Authors
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

// loopgas <experiment> [options]   run one experiment
// loopgas batch --config FILE      run every experiment listed in FILE
// loopgas list                     print experiment names
//
// Exit status: 0 all assertions passed, 1 an assertion failed,
// 2 invalid parameters or a refused/failed run.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loopgas/experiments.hpp"

using namespace loopgas;

namespace {

std::vector<int> parse_sector(const std::string &s) {
    std::vector<int> w;
    for (char c : s) {
        if (c == ',' || c == ' ') continue;
        if (c != '0' && c != '1') throw std::invalid_argument("sector labels must be 0 or 1: " + s);
        w.push_back(c - '0');
    }
    return w;
}

struct Options {
    std::string topology = "torus";
    int lx = 2;
    int ly = 2;
    std::string sector_a;
    std::string sector_b;
    std::string json_path;
    std::string csv_path;
    int threads = 0;
    double tol = 1e-9;
    double residual_tol = 1e-8;
    std::string assignment = "both";
    std::uint64_t seed = 20260101;
    std::string basis = "sector";
    std::uint64_t max_dim = kDefaultMaxDim;
    double j = 1.0;
    int k = 16;
};

void add_options(CLI::App *app, Options &o) {
    app->add_option("--topology", o.topology, "sphere | annulus | torus")->check(CLI::IsMember({"sphere", "annulus", "torus"}));
    app->add_option("--lx", o.lx, "extent in x");
    app->add_option("--ly", o.ly, "extent in y");
    app->add_option("--sector-a", o.sector_a, "winding labels of copy A, e.g. 01");
    app->add_option("--sector-b", o.sector_b, "winding labels of copy B");
    app->add_option("--json", o.json_path, "write the report here");
    app->add_option("--csv", o.csv_path, "eigenvalue CSV (default: next to --json)");
    app->add_option("--threads", o.threads, "worker cap (0 = all cores)");
    app->add_option("--tol", o.tol, "kernel tolerance in units of J");
    app->add_option("--residual-tol", o.residual_tol, "eigenpair residual bound relative to ||H||");
    app->add_option("--assignment", o.assignment, "same | different | both")->check(CLI::IsMember({"same", "different", "both"}));
    app->add_option("--seed", o.seed, "solver seed");
    app->add_option("--basis", o.basis, "sector | full")->check(CLI::IsMember({"sector", "full"}));
    app->add_option("--max-dim", o.max_dim, "basis dimension cap");
    app->add_option("--J", o.j, "coupling");
    app->add_option("--k", o.k, "eigenvalues requested");
}

ExperimentSpec to_spec(const std::string &name, const Options &o) {
    ExperimentSpec s;
    s.name = name;
    s.topology = Topology{parse_topology_kind(o.topology), o.lx, o.ly};
    if (!o.sector_a.empty()) s.sector_a = parse_sector(o.sector_a);
    if (!o.sector_b.empty()) s.sector_b = parse_sector(o.sector_b);
    s.j = o.j;
    s.kernel_tol = o.tol;
    s.residual_tol = o.residual_tol;
    s.assignment = o.assignment;
    s.seed = o.seed;
    s.basis = parse_basis_kind(o.basis);
    s.max_dim = o.max_dim;
    s.k = o.k;
    return s;
}

void print_report(const ExperimentReport &r) {
    const auto &t = r.parameters["topology"];
    std::cout << r.experiment << " " << t["kind"].get<std::string>() << " " << t["lx"] << "x" << t["ly"] << "\n";
    for (const auto &a : r.assertions) {
        std::cout << "  " << (a.passed ? "PASS " : "FAIL ") << a.name;
        if (!a.detail.is_null()) std::cout << "  " << a.detail.dump();
        std::cout << "\n";
    }
    for (const auto &w : r.warnings) std::cout << "  warning: " << w << "\n";
    std::cout << "  results " << r.results.dump() << "\n";
    std::cout << "  " << (r.passed() ? "passed" : "FAILED") << " in " << r.seconds << " s\n";
}

void write_outputs(const ExperimentReport &r, const std::string &json_path, std::string csv_path) {
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw std::runtime_error("cannot write " + json_path);
        f << r.to_json().dump(2) << "\n";
        if (csv_path.empty() && r.spectrum) {
            auto dot = json_path.rfind(".json");
            csv_path = (dot == std::string::npos ? json_path : json_path.substr(0, dot)) + ".csv";
        }
    }
    if (!csv_path.empty() && r.spectrum) {
        std::ofstream f(csv_path);
        if (!f) throw std::runtime_error("cannot write " + csv_path);
        write_eigenvalue_csv(f, *r.spectrum);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"loopgas: exact and spectral checks of the merged spin-1 loop gas"};
    app.require_subcommand(1);
    Options opts;
    std::vector<std::pair<std::string, CLI::App *>> subs;
    for (const auto &name : experiment_names()) {
        auto *sub = app.add_subcommand(name, "run the " + name + " experiment");
        add_options(sub, opts);
        subs.emplace_back(name, sub);
    }
    std::string config;
    std::string out_dir;
    auto *batch = app.add_subcommand("batch", "run experiments listed in a JSON config file");
    batch->add_option("--config", config, "JSON file: {\"experiments\": [...]}")->required();
    batch->add_option("--out-dir", out_dir, "write <index>-<name>.json reports here");
    batch->add_option("--threads", opts.threads, "worker cap (0 = all cores)");
    auto *list = app.add_subcommand("list", "print experiment names");

    CLI11_PARSE(app, argc, argv);
    thread_limit() = opts.threads;

    try {
        if (list->parsed()) {
            for (const auto &n : experiment_names()) std::cout << n << "\n";
            return 0;
        }
        if (batch->parsed()) {
            std::ifstream f(config);
            if (!f) throw std::invalid_argument("cannot read " + config);
            auto specs = specs_from_json(Json::parse(f));
            for (const auto &s : specs) validate(s);
            bool ok = true;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                auto r = run_experiment(specs[i]);
                print_report(r);
                if (!out_dir.empty())
                    write_outputs(r, out_dir + "/" + std::to_string(i) + "-" + specs[i].name + ".json", "");
                ok = ok && r.passed();
            }
            return ok ? 0 : 1;
        }
        for (const auto &[name, sub] : subs) {
            if (!sub->parsed()) continue;
            auto r = run_experiment(to_spec(name, opts));
            print_report(r);
            write_outputs(r, opts.json_path, opts.csv_path);
            return r.passed() ? 0 : 1;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
