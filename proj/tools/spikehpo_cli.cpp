// Copyright 2026-present the spikehpo project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "spikehpo/config.hpp"
#include "spikehpo/report.hpp"
#include "spikehpo/scheduler.hpp"
#include "spikehpo/simd/kernels.hpp"
#include "spikehpo/snn/evaluator.hpp"

namespace fs = std::filesystem;
using namespace spikehpo;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> max_trials;
    std::optional<double> max_seconds;
    std::optional<std::string> out;
};

int run_command(const RunOptions& opt) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(opt.config);
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.workers) cfg.budget.workers = *opt.workers;
        if (opt.max_trials) cfg.budget.max_trials = *opt.max_trials;
        if (opt.max_seconds) cfg.budget.max_wall_seconds = *opt.max_seconds;
        if (opt.out) cfg.output_dir = *opt.out;
        cfg.budget.validate();
    } catch (const ConfigError& e) {
        std::cerr << opt.config << ": invalid configuration\n";
        for (const auto& line : e.errors()) std::cerr << "  " << line << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << opt.config << ": " << e.what() << '\n';
        return 2;
    }

    std::shared_ptr<const snn::DatasetSplits> data;
    try {
        data = std::make_shared<const snn::DatasetSplits>(load_dataset(cfg.simulator.dataset));
    } catch (const std::exception& e) {
        std::cerr << "dataset: " << e.what() << '\n';
        return 2;
    }
    const snn::SimulatorProfile profile = make_profile(cfg, data);
    const std::vector<StopCriterion> criteria = cfg.early_stopping;

    const fs::path out_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory " << out_dir << ": " << ec.message() << '\n';
        return 1;
    }

    try {
        write_file(out_dir / "config.resolved.json", dump_config(cfg));
        JsonlSink sink((out_dir / "trials.jsonl").string());
        Scbo optimizer(cfg.space, criteria.size(), cfg.scbo, cfg.seed);
        const Evaluator evaluate = [&](const Configuration& c, std::uint64_t seed) {
            return snn::evaluate_configuration(c, profile, criteria, seed);
        };
        std::cerr << "spikehpo: " << cfg.name << ", " << cfg.space.dimension()
                  << " parameters, " << criteria.size() << " constraints, "
                  << cfg.budget.workers << " workers, kernels "
                  << simd::isa_name(simd::active_isa()) << '\n';
        const RunResult result = run_experiment(optimizer, evaluate, cfg.budget, cfg.seed, &sink);

        // Summarize what the log holds, so `report` reproduces it exactly.
        std::vector<TrialRecord> logged;
        logged.reserve(result.trials.size());
        for (const auto& t : result.trials) logged.push_back(parse_trial(serialize_trial(t)));
        if (!logged.empty()) {
            const RunSummary summary = summarize(logged);
            write_file(out_dir / "summary.json", summary_json(summary));
            std::cout << summary_json(summary);
        }
        if (result.aborted) {
            std::cerr << "run aborted: " << *result.aborted << '\n';
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int report_command(const std::string& log, const std::optional<std::string>& out) {
    LogReadResult read;
    try {
        read = read_trial_log(log);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    for (const auto& w : read.warnings) std::cerr << "warning: skipped " << w << '\n';
    if (read.trials.empty()) {
        std::cerr << log << ": no trials in log, no summary written\n";
        return 1;
    }
    const fs::path dir = out ? fs::path(*out) : fs::path(log).parent_path();
    try {
        if (!dir.empty()) fs::create_directories(dir);
        const RunSummary summary = summarize(read.trials);
        write_file(dir / "summary.json", summary_json(summary));
        write_file(dir / "best_so_far.csv", best_so_far_csv(read.trials));
        write_file(dir / "intervals.csv", intervals_csv(read.trials));
        std::cout << summary_json(summary);
        if (read.skipped > 0) {
            std::cerr << read.skipped << " corrupt line(s) skipped\n";
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained Bayesian hyperparameter search for spiking networks"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a configuration file");
    run_cmd->add_option("--config", run.config, "Experiment configuration (JSON)")
        ->required()
        ->envname("SPIKEHPO_CONFIG");
    run_cmd->add_option("--seed", run.seed, "Master seed")->envname("SPIKEHPO_SEED");
    run_cmd->add_option("--workers", run.workers, "Worker threads")
        ->envname("SPIKEHPO_WORKERS")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--max-trials", run.max_trials, "Trial budget")
        ->envname("SPIKEHPO_MAX_TRIALS");
    run_cmd->add_option("--max-seconds", run.max_seconds, "Wall-clock budget")
        ->envname("SPIKEHPO_MAX_SECONDS")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", run.out, "Output directory")->envname("SPIKEHPO_OUT");

    std::string log;
    std::optional<std::string> report_out;
    auto* report_cmd = app.add_subcommand("report", "Summarize a trial log");
    report_cmd->add_option("--log", log, "trials.jsonl to read")->required();
    report_cmd->add_option("--out", report_out, "Directory for summary and CSV exports");

    CLI11_PARSE(app, argc, argv);
    if (*run_cmd) return run_command(run);
    return report_command(log, report_out);
}
