#include "seleq/config.hpp"

#include <cinttypes>
#include <fstream>
#include <sstream>

namespace seleq {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like section.key=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // bare strings are allowed unquoted
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("override path has an empty segment: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

GridPtr grid_from_config(const json& types) {
    const std::string kind = types.value("kind", "");
    if (kind == "binary") {
        return TypeGrid::binary(types.at("theta_low").get<double>(), types.at("theta_high").get<double>(),
                                types.at("mu").get<double>());
    }
    if (kind == "grid") {
        const double lo = types.at("theta_min").get<double>();
        const double hi = types.at("theta_max").get<double>();
        const auto n = types.value("n_points", std::size_t{201});
        const std::string density = types.value("density", "uniform");
        if (density == "uniform") return TypeGrid::uniform(lo, hi, n);
        if (density == "table") {
            const auto w = types.at("weights").get<std::vector<double>>();
            if (types.contains("theta"))
                return TypeGrid::from_table(types.at("theta").get<std::vector<double>>(), w);
            if (w.size() != n) throw ConfigError("types.weights length must equal n_points");
            std::vector<double> theta(n);
            for (std::size_t i = 0; i < n; ++i)
                theta[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            return TypeGrid::from_table(std::move(theta), w);
        }
        throw ConfigError("types.density must be \"uniform\" or \"table\"");
    }
    throw ConfigError("types.kind must be \"binary\" or \"grid\"");
}

namespace {

Family family_from_name(const std::string& name) {
    if (name == "power_linear") return Family::PowerLinear;
    if (name == "linear_mix") return Family::LinearMix;
    if (name == "threshold_noise_uniform") return Family::ThresholdNoiseUniform;
    throw ConfigError("unknown test family: " + name);
}

std::vector<double> base_curve_from_config(const json& fam, const GridPtr& grid) {
    if (!fam.contains("base")) return {};
    const auto& base = fam.at("base");
    if (base.is_string()) {
        if (base.get<std::string>() == "identity") {
            std::vector<double> curve(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) curve[i] = grid->theta(i);
            return curve;
        }
        throw ConfigError("test_set.family.base must be \"identity\" or an array");
    }
    return base.get<std::vector<double>>();
}

} // namespace

Test test_from_spec(const json& spec, const GridPtr& grid) {
    if (spec.contains("pi")) return Test(grid, spec.at("pi").get<std::vector<double>>());
    if (spec.contains("family")) {
        FamilyParams params;
        params.family = family_from_name(spec.at("family").get<std::string>());
        params.sigma = spec.at("sigma").get<double>();
        params.d = spec.at("d").get<double>();
        params.linear_mix_base = base_curve_from_config(spec, grid);
        return build_family_test(params, grid);
    }
    throw ConfigError("test spec needs either \"pi\" or \"family\"");
}

TestSet test_set_from_config(const json& section, const GridPtr& grid) {
    TestSet set;
    if (section.contains("explicit")) {
        for (const auto& row : section.at("explicit"))
            set.tests.emplace_back(grid, row.get<std::vector<double>>());
        return set;
    }
    if (section.contains("family")) {
        const auto& fam = section.at("family");
        FamilyParams params;
        params.family = family_from_name(fam.at("family").get<std::string>());
        params.linear_mix_base = base_curve_from_config(fam, grid);
        const auto sr = fam.at("sigma_range").get<std::vector<double>>();
        const auto dr = fam.at("d_range").get<std::vector<double>>();
        const int ss = fam.at("sigma_steps").get<int>();
        const int ds = fam.at("d_steps").get<int>();
        if (sr.size() != 2 || dr.size() != 2 || ss < 1 || ds < 1)
            throw ConfigError("family lattice needs sigma_range, d_range and positive step counts");
        // lattice enumeration: sigma-major ascending, then d ascending; the
        // candidate constructor's lowest-index tie break relies on it
        for (int i = 0; i < ss; ++i) {
            params.sigma = ss == 1 ? sr[0] : sr[0] + (sr[1] - sr[0]) * i / static_cast<double>(ss - 1);
            for (int j = 0; j < ds; ++j) {
                params.d = ds == 1 ? dr[0] : dr[0] + (dr[1] - dr[0]) * j / static_cast<double>(ds - 1);
                set.tests.push_back(build_family_test(params, grid));
                set.family_coords.emplace_back(params.sigma, params.d);
            }
        }
        return set;
    }
    throw ConfigError("test_set needs either \"explicit\" or \"family\"");
}

CostSpec cost_spec_from_config(const json& section) {
    CostSpec spec;
    const std::string div = section.value("divergence", "kl");
    if (div == "kl")
        spec.divergence = Divergence::KLToPrior;
    else if (div == "quadratic")
        spec.divergence = Divergence::QuadraticToPrior;
    else
        throw ConfigError("cost.divergence must be \"kl\" or \"quadratic\"");
    spec.kappa = section.value("kappa", 0.0);
    return spec;
}

SelectionProcedure procedure_from_config(const RunConfig& cfg, const json& section) {
    const auto index = section.value("test_index", std::size_t{0});
    if (index >= cfg.tests.tests.size()) throw ConfigError("test_index out of range");
    const Test& test = cfg.tests.tests[index];

    SelectionProcedure proc{test};
    if (section.contains("alpha")) {
        const auto& alpha = section.at("alpha");
        if (alpha.is_string() && alpha.get<std::string>() == "zero_profit") {
            proc = zero_profit_alpha(test).proc;
        } else {
            const auto pair = alpha.get<std::vector<double>>();
            if (pair.size() != 2) throw ConfigError("alpha must be \"zero_profit\" or [alpha_h, alpha_l]");
            proc.alpha_h = pair[0];
            proc.alpha_l = pair[1];
        }
    } else {
        proc = zero_profit_alpha(test).proc;
    }
    if (section.contains("wage_h"))
        proc.wage_h = section.at("wage_h").get<double>();
    else if (cfg.mode == MarketMode::Wage) {
        const SignalStats s = signal_stats(test);
        proc.wage_h = s.pi_bar > 0.0 ? s.int_theta_pi / s.pi_bar : 0.0;
        proc.alpha_h = 1.0;
        proc.alpha_l = section.contains("alpha") ? proc.alpha_l : 0.0;
    }
    proc.wage_l = section.value("wage_l", 0.0);
    validate(proc);
    return proc;
}

RunConfig parse_config(json doc) {
    RunConfig cfg;
    cfg.doc = std::move(doc);
    try {
        cfg.grid = grid_from_config(cfg.doc.at("types"));
        cfg.tests = test_set_from_config(cfg.doc.at("test_set"), cfg.grid);
        cfg.tests.validate();

        const json market = cfg.doc.value("market", json::object());
        const std::string mode = market.value("mode", "baseline");
        if (mode == "baseline")
            cfg.mode = MarketMode::Baseline;
        else if (mode == "capacity")
            cfg.mode = MarketMode::Capacity;
        else if (mode == "wage")
            cfg.mode = MarketMode::Wage;
        else
            throw ConfigError("market.mode must be baseline, capacity or wage");
        cfg.search.alpha_steps = market.value("alpha_grid_steps", 101);
        cfg.search.tie_tol = market.value("tie_tol", 1e-12);

        const json search = cfg.doc.value("search", json::object());
        cfg.search.gain_tol = search.value("gain_tol", 1e-9);
        cfg.search.full_alpha = search.value("full_alpha", false);

        cfg.seed = cfg.doc.value("seed", std::uint64_t{12345});
        cfg.threads = cfg.doc.value("threads", 1);
        cfg.search.threads = cfg.threads;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    cfg.hash_hex = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(cfg.doc.dump()));
        return std::string(buf);
    }();
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(std::move(doc));
}

} // namespace seleq
