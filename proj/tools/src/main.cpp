#include "bcinv/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string method;
    std::string response;
    std::string control;
    int stride = 0;
    int steps = 0;
    double threshold = 0.0;
    double time = 0.0;
    bool full = false;
};

bcinv::cli::RunConfig resolve(const Flags& flags, const CLI::App& sub) {
    using namespace bcinv::cli;
    RunConfig c = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    if (!flags.out.empty()) c.out = flags.out;
    if (!flags.method.empty()) c.method = bcinv::parse_method(flags.method);
    if (!flags.response.empty()) c.response_path = flags.response;
    if (!flags.control.empty()) c.control_path = flags.control;
    if (sub.count("--stride")) c.stride = flags.stride;
    if (sub.count("--threshold")) c.threshold = flags.threshold;
    if (sub.count("--time")) c.time = flags.time;
    if (sub.count("--M")) {
        c.steps = flags.steps;
        c.grid_explicit = true;
    }
    if (flags.full) c.full = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace bcinv::cli;
    CLI::App app{"Forward and inverse solver for the vector wave equation with a matrix potential"};
    app.require_subcommand(1);

    Flags flags;
    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&, std::ostream&);
    };
    const Entry entries[] = {
        {"forward", "Compute the response function of the configured potential", cmd_forward},
        {"invert", "Recover the potential from a response file", cmd_invert},
        {"characterize", "Sweep the connecting operators of a response file", cmd_characterize},
        {"simulate", "Evaluate the wavefield of a control at a grid time", cmd_simulate},
        {"roundtrip", "Convergence table of forward + invert at M, 2M, 4M", cmd_roundtrip},
        {"scan", "Search the family a cos(3t) for a failing shortened operator", cmd_scan},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", flags.config, "JSON config file");
        sub->add_option("--out", flags.out, "Output path");
        sub->add_option("--method", flags.method, "amplitude | resolvent");
        sub->add_option("--stride", flags.stride, "Sweep every K-th xi")->check(CLI::PositiveNumber);
        sub->add_option("--threshold", flags.threshold, "Relative sigma_min threshold")->check(CLI::PositiveNumber);
        sub->add_flag("--full", flags.full, "Add operator identity residuals to the report");
        sub->add_option("--response", flags.response, "Response JSON file");
        sub->add_option("--control", flags.control, "Control JSON file");
        sub->add_option("--time", flags.time, "Snapshot time (grid node)");
        sub->add_option("--M", flags.steps, "Number of grid steps")->check(CLI::PositiveNumber);
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    for (const auto& [sub, entry] : subs) {
        if (!sub->parsed()) continue;
        return run_guarded([&] { return entry->run(resolve(flags, *sub), std::cout); }, std::cerr);
    }
    return exit_input_error;
}
