#include "sokofm/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sokofm {

using nlohmann::json;

ParamSpace default_param_space() {
    ParamSpace space;
    space.dims = {
        {"sequence_length", {"5", "10", "20", "40", "80"}},
        {"evaluations", {"10", "20", "40", "80"}},
        {"mutation_rate", {"0.1", "0.2", "0.4", "0.8"}},
        {"shift_buffer", {"false", "true"}},
    };
    return space;
}

AgentParams agent_params_from_point(const ParamSpace& space, const ConfigPoint& point) {
    if (point.size() != space.dims.size())
        throw std::invalid_argument("config point does not match the parameter space");
    AgentParams params;
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
        const auto& name = space.dims[d].name;
        const auto& value = space.dims[d].values.at(point[d]);
        if (name == "sequence_length") params.sequence_length = std::stoi(value);
        else if (name == "evaluations") params.evaluations = std::stoi(value);
        else if (name == "mutation_rate") params.mutation_rate = std::stod(value);
        else if (name == "shift_buffer") params.shift_buffer = (value == "true" || value == "1");
        else if (name == "resamples") params.resamples = std::stoi(value);
        else throw std::invalid_argument("unknown tuning dimension: " + name);
    }
    return params;
}

ExperimentConfig default_config() {
    ExperimentConfig config;
    config.tune.space = default_param_space();
    return config;
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw std::runtime_error("config: unknown key '" + key + "' in " + where);
    }
}

AgentParams parse_agent(const json& obj) {
    check_keys(obj, {"sequence_length", "evaluations", "mutation_rate", "shift_buffer",
                     "resamples"}, "agent");
    AgentParams p;
    p.sequence_length = obj.value("sequence_length", p.sequence_length);
    p.evaluations = obj.value("evaluations", p.evaluations);
    p.mutation_rate = obj.value("mutation_rate", p.mutation_rate);
    p.shift_buffer = obj.value("shift_buffer", p.shift_buffer);
    p.resamples = obj.value("resamples", p.resamples);
    if (p.sequence_length < 1 || p.evaluations < 0 || p.resamples < 1 ||
        p.mutation_rate < 0.0 || p.mutation_rate > 1.0)
        throw std::runtime_error("config: agent parameters out of range");
    return p;
}

ParamSpace parse_space(const json& obj) {
    ParamSpace space;
    for (const auto& [name, values] : obj.items()) {
        ParamDimension dim;
        dim.name = name;
        for (const auto& v : values) {
            if (v.is_string()) dim.values.push_back(v.get<std::string>());
            else dim.values.push_back(v.dump());  // numbers and booleans as literals
        }
        if (dim.values.size() < 2)
            throw std::runtime_error("config: tuning dimension '" + name +
                                     "' needs at least two values");
        space.dims.push_back(std::move(dim));
    }
    return space;
}

}  // namespace

AgentParams parse_agent_params(const std::string& json_text) {
    return parse_agent(json::parse(json_text));
}

void save_agent_params(const std::filesystem::path& path, const AgentParams& params) {
    json doc = {{"sequence_length", params.sequence_length},
                {"evaluations", params.evaluations},
                {"mutation_rate", params.mutation_rate},
                {"shift_buffer", params.shift_buffer},
                {"resamples", params.resamples}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write agent parameter file: " + path.string());
    out << doc.dump(2) << "\n";
}

ExperimentConfig parse_config(const std::string& json_text) {
    const json doc = json::parse(json_text);
    ExperimentConfig config = default_config();

    check_keys(doc, {"levels", "collect", "models", "agent", "tune", "eval", "bench", "seed",
                     "jobs", "out"}, "top level");

    if (doc.contains("levels")) {
        const auto& levels = doc["levels"];
        check_keys(levels, {"train", "easy", "hard"}, "levels");
        if (levels.contains("train")) config.train_levels = levels["train"].get<std::string>();
        if (levels.contains("easy")) config.easy_levels = levels["easy"].get<std::string>();
        if (levels.contains("hard")) config.hard_levels = levels["hard"].get<std::string>();
    }
    if (doc.contains("collect")) {
        const auto& c = doc["collect"];
        check_keys(c, {"playouts", "steps"}, "collect");
        config.collect.playouts = c.value("playouts", config.collect.playouts);
        config.collect.steps = c.value("steps", config.collect.steps);
        if (config.collect.playouts < 1 || config.collect.steps < 1)
            throw std::runtime_error("config: collect.playouts and collect.steps must be >= 1");
    }
    if (doc.contains("models")) {
        const auto& m = doc["models"];
        check_keys(m, {"shapes", "spans", "kinds"}, "models");
        if (m.contains("shapes")) {
            config.models.shapes.clear();
            for (const auto& s : m["shapes"])
                config.models.shapes.push_back(shape_from_name(s.get<std::string>()));
        }
        if (m.contains("spans")) {
            config.models.spans.clear();
            for (const auto& s : m["spans"]) {
                const int span = s.get<int>();
                if (span < 1) throw std::runtime_error("config: spans must be >= 1");
                config.models.spans.push_back(span);
            }
        }
        if (m.contains("kinds")) {
            config.models.kinds.clear();
            for (const auto& k : m["kinds"]) {
                const auto name = k.get<std::string>();
                if (name == "exact") config.models.kinds.push_back(ModelKind::ExactMatch);
                else if (name == "tree") config.models.kinds.push_back(ModelKind::Tree);
                else throw std::runtime_error("config: unknown model kind '" + name + "'");
            }
        }
    }
    if (doc.contains("agent")) {
        if (doc["agent"].is_string()) {
            if (doc["agent"].get<std::string>() != "tune")
                throw std::runtime_error("config: agent must be an object or \"tune\"");
            config.agent_from_tuner = true;
        } else {
            config.agent = parse_agent(doc["agent"]);
        }
    }
    if (doc.contains("tune")) {
        const auto& t = doc["tune"];
        check_keys(t, {"iterations", "k", "epsilon", "neighbours", "mutation_prob", "space"},
                   "tune");
        config.tune.iterations = t.value("iterations", config.tune.iterations);
        config.tune.k = t.value("k", config.tune.k);
        config.tune.epsilon = t.value("epsilon", config.tune.epsilon);
        config.tune.neighbours = t.value("neighbours", config.tune.neighbours);
        config.tune.mutation_prob = t.value("mutation_prob", config.tune.mutation_prob);
        if (t.contains("space")) config.tune.space = parse_space(t["space"]);
    }
    if (doc.contains("eval")) {
        const auto& e = doc["eval"];
        check_keys(e, {"repeats", "max_steps"}, "eval");
        config.eval.repeats = e.value("repeats", config.eval.repeats);
        config.eval.max_steps = e.value("max_steps", config.eval.max_steps);
        if (config.eval.repeats < 1 || config.eval.max_steps < 1)
            throw std::runtime_error("config: eval.repeats and eval.max_steps must be >= 1");
    }
    if (doc.contains("bench")) {
        const auto& b = doc["bench"];
        check_keys(b, {"steps"}, "bench");
        config.bench_steps = b.value("steps", config.bench_steps);
        if (config.bench_steps < 1) throw std::runtime_error("config: bench.steps must be >= 1");
    }
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("jobs")) config.jobs = doc["jobs"].get<int>();
    if (doc.contains("out")) config.out_dir = doc["out"].get<std::string>();

    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    ExperimentConfig config;
    try {
        config = parse_config(buf.str());
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    const auto base = path.parent_path();
    auto resolve = [&base](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    resolve(config.train_levels);
    resolve(config.easy_levels);
    resolve(config.hard_levels);
    resolve(config.out_dir);
    return config;
}

std::string config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["levels"] = {{"train", c.train_levels.string()},
                     {"easy", c.easy_levels.string()},
                     {"hard", c.hard_levels.string()}};
    doc["collect"] = {{"playouts", c.collect.playouts}, {"steps", c.collect.steps}};
    json shapes = json::array(), spans = json::array(), kinds = json::array();
    for (auto s : c.models.shapes) shapes.push_back(shape_name(s));
    for (int s : c.models.spans) spans.push_back(s);
    for (auto k : c.models.kinds) kinds.push_back(model_kind_name(k));
    doc["models"] = {{"shapes", shapes}, {"spans", spans}, {"kinds", kinds}};
    if (c.agent_from_tuner) {
        doc["agent"] = "tune";
    } else {
        doc["agent"] = {{"sequence_length", c.agent.sequence_length},
                        {"evaluations", c.agent.evaluations},
                        {"mutation_rate", c.agent.mutation_rate},
                        {"shift_buffer", c.agent.shift_buffer},
                        {"resamples", c.agent.resamples}};
    }
    json space;
    for (const auto& d : c.tune.space.dims) space[d.name] = d.values;
    doc["tune"] = {{"iterations", c.tune.iterations},
                   {"k", c.tune.k},
                   {"epsilon", c.tune.epsilon},
                   {"neighbours", c.tune.neighbours},
                   {"mutation_prob", c.tune.mutation_prob},
                   {"space", space}};
    doc["eval"] = {{"repeats", c.eval.repeats}, {"max_steps", c.eval.max_steps}};
    doc["bench"] = {{"steps", c.bench_steps}};
    doc["seed"] = c.seed;
    doc["jobs"] = c.jobs;
    doc["out"] = c.out_dir.string();
    return doc.dump(2) + "\n";
}

}  // namespace sokofm
