#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arqsec/channel.hpp"
#include "arqsec/harness/experiments.hpp"
#include "arqsec/harness/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;

std::filesystem::path default_out(const std::string& experiment)
{
    const char* dir = std::getenv("ARQSEC_OUT_DIR");
    if (dir == nullptr || *dir == '\0') {
        return {};
    }
    return std::filesystem::path(dir) / (experiment + ".csv");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ARQ-based secrecy simulator for Wi-Fi and RFID"};
    app.require_subcommand(1);

    std::string experiment;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 1;
    std::uint64_t trials = 0;
    unsigned workers = 1;

    auto* run = app.add_subcommand("run", "run one experiment and write its result table");
    run->add_option("--experiment,-e", experiment, "experiment name")
        ->check(CLI::IsMember(arqsec::harness::experiment_names()));
    run->add_option("--config,-c", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    auto* run_seed = run->add_option("--seed", seed, "master seed");
    auto* run_trials = run->add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    run->add_option("--out,-o", out_path, "output CSV (default: $ARQSEC_OUT_DIR/<experiment>.csv, else stdout)");
    auto* run_workers = run->add_option("--workers,-j", workers, "worker threads (0 = all cores)");

    std::string mutation;
    std::uint64_t v_trials = 200000;
    auto* val = app.add_subcommand("validate", "run the oracle-agreement and property suites");
    val->add_option("--seed", seed, "master seed");
    val->add_option("--trials", v_trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    val->add_option("--workers,-j", workers, "worker threads (0 = all cores)");
    val->add_option("--mutation", mutation, "inject a known defect")->check(CLI::IsMember({"bounded_sum_limit"}));
    val->add_option("--out,-o", out_path, "write the JSON report here as well");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (run->parsed()) {
            arqsec::harness::ExperimentConfig cfg;
            if (!config_path.empty()) {
                std::ifstream f(config_path);
                cfg = arqsec::harness::experiment_config_from_json(nlohmann::json::parse(f));
            }
            if (!experiment.empty()) cfg.name = experiment;
            if (run_seed->count()) cfg.seed = seed;
            if (run_trials->count()) cfg.trials = trials;
            if (run_workers->count()) cfg.workers = workers;
            if (cfg.name.empty()) {
                std::cerr << "error: no experiment given (--experiment or \"experiment\" in --config)\n";
                return kUsage;
            }
            const auto table = arqsec::harness::run_experiment(cfg);
            const std::filesystem::path out = out_path.empty() ? default_out(cfg.name) : std::filesystem::path(out_path);
            if (out.empty()) {
                table.write_csv(std::cout);
            } else {
                table.write(out);
                std::cerr << "wrote " << out.string() << '\n';
            }
            return kOk;
        }

        arqsec::harness::ValidationConfig vc;
        vc.seed = seed;
        vc.trials = v_trials;
        vc.workers = workers;
        vc.mutation = mutation;
        const auto report = arqsec::harness::validate(vc);
        const std::string text = report.to_json().dump(2);
        std::cout << text << '\n';
        if (!out_path.empty()) {
            std::ofstream(out_path) << text << '\n';
        }
        return report.passed() ? kOk : kValidationFailed;
    } catch (const arqsec::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
