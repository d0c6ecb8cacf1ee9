#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "civicpulse/errors.hpp"
#include "civicpulse/pipeline.hpp"
#include "civicpulse/version.hpp"

namespace {

constexpr const char* kStageDescriptions[][2] = {
    {"ingest", "load, filter, clean, and tokenize the input exports"},
    {"score", "run the sentiment rule engine over ingested posts"},
    {"topics", "fit and select the topic model"},
    {"spatiotemporal", "bin sentiment by zone, hour, and weekday"},
    {"stats", "distribution table and one-sample t-test"},
    {"report", "write the report bundle from upstream artifacts"},
    {"all", "run the six stages in order"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"civic-pulse: traffic sentiment analytics over social-media exports"};
    app.set_version_flag("--version", civicpulse::kToolVersion);
    app.fallthrough();

    std::string config_path;
    std::string out_override;
    int threads = 1;
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--threads", threads, "worker threads for topic-model selection")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_override, "output directory (overrides the config's out_dir)");

    for (const auto& [name, description] : kStageDescriptions) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->fallthrough();
    }
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error and a usage hint
        return 1;
    }

    try {
        civicpulse::PipelineConfig config = civicpulse::load_config(config_path);
        if (!out_override.empty()) {
            config.out_dir = out_override;
            config.snapshot["out_dir"] = out_override;
        }
        const std::string chosen = app.get_subcommands().front()->get_name();
        if (chosen == "all") {
            civicpulse::run_all(config, threads);
        } else {
            civicpulse::run_stage(config, *civicpulse::stage_from_string(chosen), threads);
        }
    } catch (const civicpulse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const civicpulse::PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
