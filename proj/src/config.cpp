#include "dmt/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dmt/report.hpp"

namespace dmt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
    throw ConfigError(pointer + ": " + message);
}

const json& require_field(const json& j, const std::string& pointer, const char* name) {
    if (!j.contains(name)) fail(pointer + "/" + name, "missing required field");
    return j.at(name);
}

double number_at(const json& j, const std::string& pointer) {
    if (!j.is_number()) fail(pointer, "expected a number");
    return j.get<double>();
}

std::uint64_t unsigned_at(const json& j, const std::string& pointer) {
    if (!j.is_number_unsigned()) fail(pointer, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::vector<double> vector_at(const json& j, const std::string& pointer) {
    if (!j.is_array() || j.empty()) fail(pointer, "expected a nonempty array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(number_at(j[i], pointer + "/" + std::to_string(i)));
    }
    return v;
}

std::vector<std::size_t> index_list_at(const json& j, const std::string& pointer,
                                       std::size_t bound) {
    if (!j.is_array()) fail(pointer, "expected an array of dictionary indices");
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::uint64_t idx = unsigned_at(j[i], pointer + "/" + std::to_string(i));
        if (idx >= bound) {
            fail(pointer + "/" + std::to_string(i), "index outside the dictionary");
        }
        v.push_back(static_cast<std::size_t>(idx));
    }
    return v;
}

TestKind test_kind_from(const std::string& name, const std::string& pointer) {
    if (name == "single") return TestKind::single;
    if (name == "bonferroni") return TestKind::bonferroni;
    if (name == "min") return TestKind::min_aggregate;
    if (name == "mixed") return TestKind::mixed;
    if (name == "adaptive") return TestKind::adaptive;
    fail(pointer, "unknown test_kind '" + name + "' (expected single|bonferroni|min|mixed|adaptive)");
}

}  // namespace

std::string test_kind_name(TestKind kind) {
    switch (kind) {
        case TestKind::single: return "single";
        case TestKind::bonferroni: return "bonferroni";
        case TestKind::min_aggregate: return "min";
        case TestKind::mixed: return "mixed";
        case TestKind::adaptive: return "adaptive";
    }
    return "unknown";
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("/: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("/: config must be a JSON object");

    // Dictionary.
    const json& jd = require_field(j, "", "dictionary");
    if (!jd.is_array() || jd.empty()) fail("/dictionary", "expected a nonempty array of arrays");
    std::vector<OperatorSpectrum> members;
    for (std::size_t i = 0; i < jd.size(); ++i) {
        const std::string ptr = "/dictionary/" + std::to_string(i);
        try {
            members.emplace_back(vector_at(jd[i], ptr));
        } catch (const DomainError& e) {
            fail(ptr, e.what());
        }
    }
    std::optional<Dictionary> dict;
    try {
        dict.emplace(std::move(members));
    } catch (const std::exception& e) {
        fail("/dictionary", e.what());
    }

    // Null signal.
    std::optional<SignalSequence> theta0;
    try {
        theta0.emplace(vector_at(require_field(j, "", "theta0"), "/theta0"));
    } catch (const DomainError& e) {
        fail("/theta0", e.what());
    }
    if (theta0->size() != dict->common_length()) {
        fail("/theta0", "length does not match the dictionary members");
    }

    ExperimentConfig cfg{std::move(*dict), std::move(*theta0)};
    cfg.config_hash = fnv1a64(json_text);

    cfg.epsilon = number_at(require_field(j, "", "epsilon"), "/epsilon");
    if (!(cfg.epsilon > 0.0)) fail("/epsilon", "must be > 0");
    cfg.alpha = number_at(require_field(j, "", "alpha"), "/alpha");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail("/alpha", "must lie in (0,1]");
    if (j.contains("beta")) {
        cfg.beta = number_at(j.at("beta"), "/beta");
        if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) fail("/beta", "must lie in (0,1)");
    }

    const json& jk = require_field(j, "", "test_kind");
    if (!jk.is_string()) fail("/test_kind", "expected a string");
    cfg.test_kind = test_kind_from(jk.get<std::string>(), "/test_kind");

    if (j.contains("partition")) {
        const json& jp = j.at("partition");
        if (!jp.is_object()) fail("/partition", "expected an object");
        Partition p;
        p.homogeneous = index_list_at(require_field(jp, "/partition", "homogeneous"),
                                      "/partition/homogeneous", cfg.dict.size());
        p.complement = index_list_at(require_field(jp, "/partition", "complement"),
                                     "/partition/complement", cfg.dict.size());
        try {
            validate_partition(cfg.dict, p);
        } catch (const ConfigError& e) {
            fail("/partition", e.what());
        }
        cfg.partition = std::move(p);
    }
    if (cfg.test_kind == TestKind::mixed && !cfg.partition) {
        fail("/partition", "required when test_kind is 'mixed'");
    }

    if (j.contains("replications")) {
        cfg.replications = unsigned_at(j.at("replications"), "/replications");
    }
    if (j.contains("seed")) cfg.seed = unsigned_at(j.at("seed"), "/seed");
    if (j.contains("coupling")) {
        const json& jc = j.at("coupling");
        if (!jc.is_string()) fail("/coupling", "expected a string");
        const std::string c = jc.get<std::string>();
        if (c == "independent") {
            cfg.coupling = Coupling::independent;
        } else if (c == "common_random_numbers") {
            cfg.coupling = Coupling::common_random_numbers;
        } else {
            fail("/coupling", "expected independent|common_random_numbers");
        }
    }
    if (j.contains("b_true")) {
        cfg.true_indices = index_list_at(j.at("b_true"), "/b_true", cfg.dict.size());
    }
    if (j.contains("scaling_grid")) {
        const json& jg = j.at("scaling_grid");
        if (!jg.is_array()) fail("/scaling_grid", "expected an array of numbers");
        for (std::size_t i = 0; i < jg.size(); ++i) {
            cfg.scaling_grid.push_back(number_at(jg[i], "/scaling_grid/" + std::to_string(i)));
        }
    }

    if (j.contains("alternatives")) {
        const json& ja = j.at("alternatives");
        if (ja.is_array()) {
            cfg.alternatives.kind = AlternativesSpec::Kind::explicit_list;
            for (std::size_t i = 0; i < ja.size(); ++i) {
                const std::string ptr = "/alternatives/" + std::to_string(i);
                try {
                    cfg.alternatives.explicit_list.emplace_back(vector_at(ja[i], ptr));
                } catch (const DomainError& e) {
                    fail(ptr, e.what());
                }
                if (cfg.alternatives.explicit_list.back().size() != cfg.theta0.size()) {
                    fail(ptr, "length does not match theta0");
                }
            }
            if (cfg.alternatives.explicit_list.empty()) {
                fail("/alternatives", "explicit list must be nonempty");
            }
        } else if (ja.is_object() && ja.contains("theta1_boundary")) {
            const json& jb = ja.at("theta1_boundary");
            cfg.alternatives.kind = AlternativesSpec::Kind::boundary;
            if (jb.contains("count")) {
                cfg.alternatives.count = static_cast<std::size_t>(
                    unsigned_at(jb.at("count"), "/alternatives/theta1_boundary/count"));
                if (cfg.alternatives.count == 0) {
                    fail("/alternatives/theta1_boundary/count", "must be >= 1");
                }
            }
            if (jb.contains("constant")) {
                cfg.alternatives.constant =
                    number_at(jb.at("constant"), "/alternatives/theta1_boundary/constant");
            }
        } else if (ja.is_object() && ja.contains("adversary")) {
            const json& jadv = ja.at("adversary");
            cfg.alternatives.kind = AlternativesSpec::Kind::adversary;
            if (jadv.contains("tau")) {
                cfg.alternatives.tau = number_at(jadv.at("tau"), "/alternatives/adversary/tau");
                cfg.alternatives.has_tau = true;
            }
            if (jadv.contains("gamma")) {
                cfg.alternatives.gamma =
                    number_at(jadv.at("gamma"), "/alternatives/adversary/gamma");
                cfg.alternatives.has_gamma = true;
            }
            cfg.alternatives.b_true = static_cast<std::size_t>(unsigned_at(
                require_field(jadv, "/alternatives/adversary", "b_true"),
                "/alternatives/adversary/b_true"));
            cfg.alternatives.b_bar = static_cast<std::size_t>(unsigned_at(
                require_field(jadv, "/alternatives/adversary", "b_bar"),
                "/alternatives/adversary/b_bar"));
            if (cfg.alternatives.b_true >= cfg.dict.size()) {
                fail("/alternatives/adversary/b_true", "index outside the dictionary");
            }
            if (cfg.alternatives.b_bar >= cfg.dict.size()) {
                fail("/alternatives/adversary/b_bar", "index outside the dictionary");
            }
            if (jadv.contains("draws")) {
                cfg.alternatives.draws = static_cast<std::size_t>(
                    unsigned_at(jadv.at("draws"), "/alternatives/adversary/draws"));
                if (cfg.alternatives.draws == 0) {
                    fail("/alternatives/adversary/draws", "must be >= 1");
                }
            }
            if (jadv.contains("scale")) {
                cfg.alternatives.scale =
                    number_at(jadv.at("scale"), "/alternatives/adversary/scale");
                if (!(cfg.alternatives.scale > 0.0)) {
                    fail("/alternatives/adversary/scale", "must be > 0");
                }
            }
        } else {
            fail("/alternatives",
                 "expected an array of signals or an object with theta1_boundary or adversary");
        }
    }

    if (j.contains("gate")) {
        const json& jg = j.at("gate");
        if (!jg.is_object()) fail("/gate", "expected an object");
        if (jg.contains("type1")) {
            cfg.gate.type1_bound = number_at(jg.at("type1"), "/gate/type1");
        }
        if (jg.contains("type2")) {
            cfg.gate.type2_bound = number_at(jg.at("type2"), "/gate/type2");
        }
    }
    if (j.contains("output")) {
        const json& jo = j.at("output");
        if (!jo.is_object()) fail("/output", "expected an object");
        if (jo.contains("csv")) {
            if (!jo.at("csv").is_string()) fail("/output/csv", "expected a string");
            cfg.output.csv = jo.at("csv").get<std::string>();
        }
        if (jo.contains("svg")) {
            if (!jo.at("svg").is_string()) fail("/output/svg", "expected a string");
            cfg.output.svg = jo.at("svg").get<std::string>();
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentPlan plan_from_config(const ExperimentConfig& config) {
    ExperimentPlan plan{config.test_kind, config.dict,        config.theta0, {},
                        config.partition, config.epsilon,     config.alpha,  config.beta,
                        config.replications, config.seed,     config.coupling,
                        config.true_indices};
    return plan;
}

}  // namespace dmt
