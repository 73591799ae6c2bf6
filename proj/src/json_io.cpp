#include "rhls/json_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace rhls {

std::string hash_to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void to_json(nlohmann::json& j, const ProblemParams& p) {
    j = {{"n", p.n},           {"Q", p.Q},       {"alpha", p.alpha}, {"lambda", p.lambda},
         {"p_alpha", p.p_alpha}, {"q_alpha", p.q_alpha}, {"p", p.p},         {"q", p.q}};
}

void to_json(nlohmann::json& j, const RuleDescriptor& d) {
    j = {{"kind", std::string(to_string(d.kind))},
         {"n", d.n},
         {"resolution", d.resolution},
         {"seed", d.seed},
         {"count", d.count},
         {"avoid_south_pole", d.avoid_south_pole}};
}

void from_json(const nlohmann::json& j, RuleDescriptor& d) {
    d.kind = rule_kind_from_string(j.at("kind").get<std::string>());
    d.n = j.at("n").get<int>();
    d.resolution = j.at("resolution").get<int>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.count = j.at("count").get<std::size_t>();
    d.avoid_south_pole = j.at("avoid_south_pole").get<bool>();
}

void to_json(nlohmann::json& j, const BoundsReport& r) {
    j = {{"n", r.n},         {"Q", r.Q},         {"alpha", r.alpha},
         {"p_alpha", r.p_alpha}, {"lower", r.lower}, {"upper", r.upper},
         {"upper_variant", std::string(to_string(r.upper_variant))}};
}

void to_json(nlohmann::json& j, const SolverConfig& c) {
    j = {{"max_iters", c.max_iters},
         {"tol_residual", c.tol_residual},
         {"tol_objective", c.tol_objective},
         {"stall_window", c.stall_window},
         {"damping", c.damping},
         {"init", to_string(c.init)},
         {"seed", c.seed},
         {"noise_sigma", c.noise_sigma},
         {"order", to_string(c.order)},
         {"ladder", c.ladder}};
}

void to_json(nlohmann::json& j, const SolverReport& r) {
    j = {{"p", r.p},
         {"N_est", r.N_est},
         {"label", "best found"},
         {"iterations", r.iterations},
         {"objective_trace", r.objective_trace},
         {"el_residual", r.el_residual},
         {"concentration_ratio", r.concentration_ratio},
         {"converged", r.converged},
         {"stop_reason", r.stop_reason},
         {"clamp_events", r.clamp_events},
         {"max_ascent", r.max_ascent},
         {"seed", r.seed},
         {"rule_hash", hash_to_hex(r.rule_hash)},
         {"config", r.config}};
}

void to_json(nlohmann::json& j, const BlowupDiagnostics& d) {
    j = {{"concentration_ratio", d.concentration_ratio},
         {"argmax_node", d.argmax_node},
         {"profile_emitted", d.profile_emitted}};
    if (d.profile_emitted) {
        j["lambda"] = d.lambda;
        j["phi_origin"] = d.phi_origin;
        j["profile_at_origin"] = d.profile_at_origin;
        j["radii"] = d.radii;
        j["horizontal"] = d.horizontal;
        j["vertical"] = d.vertical;
        j["envelope_c1"] = d.envelope_c1;
        j["envelope_c2"] = d.envelope_c2;
    }
}

nlohmann::json rule_to_json(const QuadratureRule& rule) {
    nlohmann::json j = rule.descriptor();
    j["hash"] = hash_to_hex(rule.hash());
    return j;
}

QuadratureRule rule_from_json(const nlohmann::json& j) {
    QuadratureRule rule = rebuild_rule(j.get<RuleDescriptor>());
    if (j.contains("hash") && j.at("hash").get<std::string>() != hash_to_hex(rule.hash())) {
        throw std::runtime_error("rule_from_json: rebuilt rule hash does not match the recorded hash");
    }
    return rule;
}

}  // namespace rhls
