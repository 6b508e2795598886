#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "experiments.hpp"

namespace metastab::cli {

namespace {

// Accepts either a flat parameter object or a manifest-like
// {"experiment": ..., "parameters": {...}} so that a manifest can be re-run.
nlohmann::json load_config(const std::string& path, Experiment e) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ValidationError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    if (j.contains("parameters")) {
        if (j.contains("experiment") && j.at("experiment") != std::string(experiment_name(e))) {
            throw ValidationError("config is for experiment '" + j.at("experiment").dump() + "'");
        }
        return j.at("parameters");
    }
    return j;
}

}  // namespace

int main_entry(int argc, char** argv) {
    CLI::App app{"Metastability experiments: hitting times, rate predictions and checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    struct Sub {
        Experiment experiment;
        CLI::App* app;
        std::string config;
        std::string out = "out";
        std::map<std::string, std::string> flags;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    for (Experiment e : all_experiments()) {
        auto sub = std::make_unique<Sub>();
        sub->experiment = e;
        sub->app = app.add_subcommand(std::string(experiment_name(e)));
        sub->app->add_option("--config", sub->config, "JSON parameter file (flags override it)");
        sub->app->add_option("--out", sub->out, "output directory")->capture_default_str();
        for (const auto& spec : parameter_specs(e)) {
            std::string help = spec.help;
            if (spec.required) {
                help += " [required]";
            } else if (!spec.default_value.is_null()) {
                help += " [default " + spec.default_value.dump() + "]";
            }
            sub->app->add_option("--" + spec.key, sub->flags[spec.key], help);
        }
        subs.push_back(std::move(sub));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    for (auto& sub : subs) {
        if (!sub->app->parsed()) continue;
        ExperimentConfig config;
        config.experiment = sub->experiment;
        try {
            if (!sub->config.empty()) config.parameters = load_config(sub->config, sub->experiment);
            if (!config.parameters.is_object()) throw ValidationError("parameters must be a JSON object");
            for (const auto& spec : parameter_specs(sub->experiment)) {
                if (sub->app->count("--" + spec.key) > 0) {
                    config.parameters[spec.key] = parse_flag_value(spec, sub->flags[spec.key]);
                }
            }
        } catch (const ValidationError& e) {
            nlohmann::json j{{"error", "ValidationError"}, {"message", e.what()}, {"exit_code", kExitValidation}};
            std::cerr << j.dump() << '\n';
            return kExitValidation;
        }
        return run(config, sub->out, std::cerr);
    }
    return kExitValidation;
}

}  // namespace metastab::cli
