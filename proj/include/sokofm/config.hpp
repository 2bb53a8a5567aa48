#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sokofm/agent.hpp"
#include "sokofm/models.hpp"
#include "sokofm/patterns.hpp"
#include "sokofm/tuner.hpp"

namespace sokofm {

struct CollectConfig {
    int playouts = 100;  // per level
    int steps = 100;     // per playout
};

struct ModelGridConfig {
    std::vector<PatternShape> shapes = {PatternShape::Cross, PatternShape::Square};
    std::vector<int> spans = {1, 2, 3};
    std::vector<ModelKind> kinds = {ModelKind::ExactMatch, ModelKind::Tree};
};

struct EvalConfig {
    int repeats = 20;     // episodes per level
    int max_steps = 100;  // episode cap
};

struct TuneConfig {
    int iterations = 200;
    double k = 2.0;
    double epsilon = 0.5;
    int neighbours = 50;
    double mutation_prob = 0.5;
    ParamSpace space;  // defaults to default_param_space()
};

/// Full experiment configuration; every field has a default so the pipeline
/// runs out of the box on the bundled corpus. See README for the JSON schema.
struct ExperimentConfig {
    std::filesystem::path train_levels = "data/levels/train.txt";
    std::filesystem::path easy_levels = "data/levels/easy.txt";
    std::filesystem::path hard_levels = "data/levels/hard.txt";

    CollectConfig collect;
    ModelGridConfig models;
    AgentParams agent;
    bool agent_from_tuner = false;  // "agent": "tune" in JSON
    TuneConfig tune;
    EvalConfig eval;
    std::uint64_t bench_steps = 1'000'000;

    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = all hardware threads
    std::filesystem::path out_dir = "out";
};

/// The tuning space used in the experiments: sequence_length {5,10,20,40,80},
/// evaluations {10,20,40,80}, mutation_rate {0.1,0.2,0.4,0.8},
/// shift_buffer {false,true}.
ParamSpace default_param_space();

/// Interpret a point of `space` (dimension names as in default_param_space)
/// as agent parameters.
AgentParams agent_params_from_point(const ParamSpace& space, const ConfigPoint& point);

ExperimentConfig default_config();

/// Agent-parameter JSON fragments (the tuned_params.json format).
AgentParams parse_agent_params(const std::string& json_text);
void save_agent_params(const std::filesystem::path& path, const AgentParams& params);

/// Parse a JSON document; unknown keys are rejected, missing keys keep their
/// defaults.
ExperimentConfig parse_config(const std::string& json_text);

/// Load a config file; relative paths inside it are resolved against the
/// file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

std::string config_to_json(const ExperimentConfig& config);

}  // namespace sokofm
