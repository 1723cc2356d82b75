#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffsplit/runner.hpp"

namespace {

int threads_from_env() {
    const char* env = std::getenv("FFSPLIT_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

void emit_error(const std::string& type, const std::string& message, int code) {
    nlohmann::json j = {{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
    std::cerr << j.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast-forward matter-wave splitting designer and fidelity lab"};
    app.require_subcommand(1);

    std::string config_path;
    ffsplit::RunnerOptions opts;
    opts.threads = threads_from_env();

    const char* commands[] = {"design",         "evolve",         "sweep",         "twomode",
                              "reproduce-fig2", "reproduce-fig4", "reproduce-fig5"};
    for (const char* cmd : commands) {
        auto* sub = app.add_subcommand(cmd);
        sub->add_option("--config", config_path, "JSON scenario configuration")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--threads", opts.threads, "parallel sweep workers");
        sub->add_option("--resolution-scale", opts.resolution_scale,
                        "multiply grid/step counts by this factor");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        const ffsplit::ScenarioConfig cfg = ffsplit::load_config(config_path);
        return ffsplit::run_command(cmd, cfg, opts);
    } catch (const ffsplit::ConfigError& e) {
        emit_error("config", e.what(), 2);
        return 2;
    } catch (const std::exception& e) {
        emit_error("numerical", e.what(), 3);
        return 3;
    }
}
