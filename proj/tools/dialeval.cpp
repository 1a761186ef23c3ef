// Command-line surface: dialeval <command> --config <file> [--seed N]
// [--out DIR] [--set key=value ...]

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dialeval/cli/commands.hpp"

namespace {

struct SubcommandState {
    CLI::App* app = nullptr;
    std::string config_path;
    std::string out_dir;
    std::string seed;
    std::vector<std::string> overrides;
};

int run(const std::string& command, const SubcommandState& state) {
    using namespace dialeval;
    try {
        cli::Config config = state.config_path.empty() ? cli::Config::defaults()
                                                       : cli::Config::load(state.config_path);
        for (const auto& kv : state.overrides) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got: " + kv);
            config.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
        if (!state.seed.empty()) config.set("seed", state.seed);
        if (!state.out_dir.empty()) config.set("out_dir", state.out_dir);

        cli::CommandOutcome outcome = cli::run_command(command, config);
        if (outcome.exit_code == 0) {
            std::printf("ok: %s -> %s\n", command.c_str(), outcome.run_dir.c_str());
        } else {
            std::fprintf(stderr, "error: %s: %s\n", command.c_str(), outcome.error.c_str());
            if (!outcome.run_dir.empty())
                std::fprintf(stderr, "error record: %s/error.json\n", outcome.run_dir.c_str());
        }
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMR-graph-enhanced dialogue evaluation toolkit"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"preprocess-amr", "parse, simplify and validate AMR graphs for a dataset"},
        {"train-slm", "train the dual-encoder classifier"},
        {"score", "batch classifier scores over context-response pairs"},
        {"judge", "run the criterion prompts through an LLM client"},
        {"evaluate", "correlation report against human annotations"},
        {"export-attention", "dump attention heatmap matrices for one pair"},
    };

    std::map<std::string, SubcommandState> states;
    for (const auto& [name, description] : commands) {
        SubcommandState& state = states[name];
        state.app = app.add_subcommand(name, description);
        state.app->add_option("--config", state.config_path, "key = value config file");
        state.app->add_option("--seed", state.seed, "override the seed");
        state.app->add_option("--out", state.out_dir, "override the output directory");
        state.app->add_option("--set", state.overrides, "override any config key (key=value)");
    }

    std::string verify_dir;
    CLI::App* verify = app.add_subcommand("verify-run", "check a run directory's manifest");
    verify->add_option("--run", verify_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) {
        auto problems = dialeval::cli::verify_manifest(verify_dir);
        for (const auto& p : problems) std::fprintf(stderr, "%s\n", p.c_str());
        if (problems.empty()) std::printf("ok: %s\n", verify_dir.c_str());
        return problems.empty() ? 0 : 1;
    }
    for (const auto& [name, state] : states)
        if (state.app->parsed()) return run(name, state);
    return 1;
}
