#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace metastab::cli {

enum class Experiment {
    sde_hitting,
    spde_hitting,
    ou_check,
    potential_theory,
    determinant,
    kramers_predict,
    rate_functional,
    randomwalk,
    arrhenius_sweep,
};

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<Experiment>& all_experiments();

enum class ParamType { number, integer, boolean, string, number_list };

struct ParamSpec {
    std::string key;
    ParamType type;
    bool required;
    nlohmann::json default_value;  ///< null when required or when absent means "unset"
    std::string help;
};

const std::vector<ParamSpec>& parameter_specs(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::determinant;
    nlohmann::json parameters = nlohmann::json::object();
};

/// Raised for missing keys, wrong types and out-of-range values (exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fills defaults and checks types of every declared key. Unknown keys are
/// rejected.
nlohmann::json resolve_parameters(Experiment e, const nlohmann::json& given);

/// Converts a command-line string to the JSON value of the declared type.
nlohmann::json parse_flag_value(const ParamSpec& spec, const std::string& text);

/// Hash of the canonical manifest content (experiment + parameters without
/// `threads`), as 16 hex digits.
std::string manifest_hash(Experiment e, const nlohmann::json& resolved);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAllCensored = 3;

/// Runs one experiment and writes results.csv, manifest.json and any extra
/// artifacts into `out_dir`. Errors are reported as one JSON object on `err`.
int run(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& err);

/// Full command-line entry point (subcommand, --config, --out, per-key flags).
int main_entry(int argc, char** argv);

}  // namespace metastab::cli
