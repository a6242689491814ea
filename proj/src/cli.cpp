#include "seleq/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

namespace seleq {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* fmt(bool v) { return v ? "true" : "false"; }

void print_procedure(std::ostream& out, const std::string& prefix, const SelectionProcedure& proc,
                     bool wages = false) {
    out << prefix << ".alpha_h=" << fmt(proc.alpha_h) << "\n";
    out << prefix << ".alpha_l=" << fmt(proc.alpha_l) << "\n";
    if (wages) {
        out << prefix << ".wage_h=" << fmt(proc.wage_h) << "\n";
        out << prefix << ".wage_l=" << fmt(proc.wage_l) << "\n";
    }
}

void print_report(std::ostream& out, const DeviationReport& report) {
    print_procedure(out, "candidate", report.candidate);
    out << "equilibrium_payoff=" << fmt(report.equilibrium_payoff) << "\n";
    out << "best_gain=" << fmt(report.best_gain) << "\n";
    out << "best_deviation.test_index=" << report.best_deviation_test << "\n";
    print_procedure(out, "best_deviation", report.best_deviation);
    out << "alpha_step=" << fmt(report.alpha_step) << "\n";
    out << "structural.in_ti=" << fmt(report.structural.in_ti) << "\n";
    out << "structural.accuracy_maximal=" << fmt(report.structural.accuracy_maximal) << "\n";
    out << "structural.difficulty_minimal_in_ti=" << fmt(report.structural.difficulty_minimal_in_ti)
        << "\n";
    out << "structural.zero_profit_ok=" << fmt(report.structural.zero_profit_ok) << "\n";
    out << "structural.knife_edge_pair=" << fmt(report.structural.knife_edge_pair) << "\n";
    out << "is_equilibrium=" << fmt(report.is_equilibrium) << "\n";
}

int cmd_orders(const RunConfig& cfg, std::ostream& out) {
    const json& sec = cfg.doc.at("orders");
    const Test a = test_from_spec(sec.at("a"), cfg.grid);
    const Test b = test_from_spec(sec.at("b"), cfg.grid);
    const Comparison acc = compare_accuracy(a, b);
    const Comparison dif = compare_difficulty(a, b);
    out << "accuracy=" << to_string(acc) << "\n";
    out << "difficulty=" << to_string(dif) << "\n";
    out << "comparable_in_both=" << fmt(comparable_in_both(a, b)) << "\n";
    if (!sec.value("certify", false)) return 0;

    const bool oracle_ab = lehmann_oracle_at_least_as_accurate(a, b);
    const bool oracle_ba = lehmann_oracle_at_least_as_accurate(b, a);
    bool acc_ok = false;
    switch (acc) {
        case Comparison::MoreThan: acc_ok = oracle_ab && !oracle_ba; break;
        case Comparison::LessThan: acc_ok = !oracle_ab && oracle_ba; break;
        case Comparison::Equal: acc_ok = oracle_ab && oracle_ba; break;
        case Comparison::Incomparable: acc_ok = !oracle_ab && !oracle_ba; break;
    }
    const auto priors = fosd_prior_battery(a, b, 100, cfg.seed);
    const bool dom_ab = check_difficulty_fosd_equiv(a, b, priors).holds;
    const bool dom_ba = check_difficulty_fosd_equiv(b, a, priors).holds;
    bool dif_ok = false;
    switch (dif) {
        case Comparison::MoreThan: dif_ok = dom_ab && !dom_ba; break;
        case Comparison::LessThan: dif_ok = !dom_ab && dom_ba; break;
        case Comparison::Equal: dif_ok = dom_ab && dom_ba; break;
        case Comparison::Incomparable: dif_ok = !dom_ab && !dom_ba; break;
    }
    out << "certify.lehmann_oracle_ok=" << fmt(acc_ok) << "\n";
    out << "certify.fosd_oracle_ok=" << fmt(dif_ok) << "\n";
    out << "certify.priors=" << priors.size() << "\n";
    return acc_ok && dif_ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const json sec = cfg.doc.value("verify", json::object());
    if (cfg.mode == MarketMode::Capacity) {
        const CapacityConfig cap{cfg.doc.at("capacity").at("k").get<double>()};
        SelectionProcedure proc = procedure_from_config(cfg, sec);
        const CapacityReport report = verify_capacity_equilibrium(proc, cfg.tests, cap, cfg.search);
        print_report(out, report.base);
        out << "p_equilibrium=" << fmt(report.p_equilibrium) << "\n";
        out << "severe_capacity=" << fmt(report.severe_capacity) << "\n";
        out << "difficulty_maximal=" << fmt(report.difficulty_maximal) << "\n";
        out << "converged=" << fmt(report.base.converged) << "\n";
        return report.base.is_equilibrium ? 0 : 1;
    }
    if (cfg.mode == MarketMode::Wage) {
        const json wsec = cfg.doc.value("wage", json::object());
        SelectionProcedure proc = procedure_from_config(cfg, sec.empty() ? wsec : sec);
        const WageReport report =
            verify_wage_equilibrium(proc, cfg.tests, cfg.search, wsec.value("wage_steps", 201),
                                    wsec.value("wage_alpha_steps", 8));
        print_procedure(out, "candidate", proc, true);
        out << "alpha_l_zero=" << fmt(report.alpha_l_zero) << "\n";
        out << "difficulty_maximal=" << fmt(report.difficulty_maximal) << "\n";
        out << "zero_profit_wage=" << fmt(report.zero_profit_wage) << "\n";
        out << "wage_matches_zero_profit=" << fmt(report.wage_matches_zero_profit) << "\n";
        out << "equilibrium_payoff=" << fmt(report.equilibrium_payoff) << "\n";
        out << "best_gain=" << fmt(report.best_gain) << "\n";
        print_procedure(out, "best_deviation", report.best_deviation, true);
        out << "cross_subsidy_gain=" << fmt(report.cross_subsidy_gain) << "\n";
        out << "knife_edge_pair=" << fmt(report.knife_edge_pair) << "\n";
        out << "deviation_found=" << fmt(report.deviation_found) << "\n";
        out << "is_equilibrium=" << fmt(report.all_ok()) << "\n";
        return report.all_ok() ? 0 : 1;
    }
    SelectionProcedure proc = procedure_from_config(cfg, sec);
    const DeviationReport report = verify_symmetric(proc, cfg.tests, cfg.search);
    print_report(out, report);
    return report.is_equilibrium ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const CandidateResult cand = candidate_equilibrium(cfg.tests);
    if (!cand.found) {
        out << "candidate_found=false\n";
        return 1;
    }
    out << "candidate_found=true\n";
    out << "candidate.test_index=" << cand.index << "\n";
    if (!cfg.tests.family_coords.empty()) {
        out << "candidate.sigma=" << fmt(cfg.tests.family_coords[cand.index].first) << "\n";
        out << "candidate.d=" << fmt(cfg.tests.family_coords[cand.index].second) << "\n";
    }
    const DeviationReport report = verify_symmetric(*cand.proc, cfg.tests, cfg.search);
    print_report(out, report);
    return report.is_equilibrium ? 0 : 1;
}

int cmd_scan(const RunConfig& cfg, const std::string& out_dir, std::ostream& out) {
    if (cfg.tests.family_coords.empty())
        throw ConfigError("scan requires a family-generated test_set");
    std::filesystem::path path = cfg.doc.value("scan", json::object()).value("out", "scan.csv");
    if (path.is_relative()) path = std::filesystem::path(out_dir) / path;

    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw ConfigError("cannot open output file: " + path.string());
    csv << "# " << kToolVersion << " config=" << cfg.hash_hex << " seed=" << cfg.seed << "\n";
    csv << "sigma,d,in_Ti,int_theta_pi,post_mean_h,is_equilibrium,best_gain\n";
    for (std::size_t i = 0; i < cfg.tests.tests.size(); ++i) {
        const Test& t = cfg.tests.tests[i];
        const SignalStats s = signal_stats(t);
        const SelectionProcedure proc = zero_profit_alpha(t).proc;
        const DeviationReport report = verify_symmetric(proc, cfg.tests, cfg.search);
        csv << fmt(cfg.tests.family_coords[i].first) << ',' << fmt(cfg.tests.family_coords[i].second)
            << ',' << (is_minimally_informative(t) ? 1 : 0) << ',' << fmt(s.int_theta_pi) << ','
            << (s.post_mean_h ? fmt(*s.post_mean_h) : std::string("nan")) << ','
            << (report.is_equilibrium ? 1 : 0) << ',' << fmt(report.best_gain) << "\n";
    }
    out << "rows=" << cfg.tests.tests.size() << "\n";
    out << "out=" << path.string() << "\n";
    return 0;
}

int cmd_cost(const RunConfig& cfg, std::ostream& out) {
    const json sec = cfg.doc.value("cost", json::object());
    const CostSpec spec = cost_spec_from_config(sec);
    const auto index = sec.value("test_index", std::size_t{0});
    if (index >= cfg.tests.tests.size()) throw ConfigError("cost.test_index out of range");
    const Test& test = cfg.tests.tests[index];
    out << "cost=" << fmt(test_cost(test, spec)) << "\n";

    if (sec.contains("mu_mix")) {
        const double mu = sec.at("mu_mix").get<double>();
        const Test easier = isocost_easier(test, spec, mu);
        out << "isocost.cost=" << fmt(test_cost(easier, spec)) << "\n";
        out << "isocost.difficulty=" << to_string(compare_difficulty(test, easier)) << "\n";
        out << "isocost.pi=";
        for (std::size_t i = 0; i < easier.size(); ++i) out << (i ? ";" : "") << fmt(easier.pi(i));
        out << "\n";
    }
    if (sec.value("verify", false)) {
        const SelectionProcedure proc = procedure_from_config(cfg, sec);
        const CostEquilibriumReport report = verify_cost_equilibrium(proc, spec, cfg.search);
        out << "verify.cost=" << fmt(report.cost) << "\n";
        out << "verify.kappa=" << fmt(report.kappa) << "\n";
        out << "verify.int_theta_pi=" << fmt(report.int_theta_pi) << "\n";
        out << "verify.budget_binding=" << fmt(report.budget_binding) << "\n";
        out << "verify.posterior_mean_zero=" << fmt(report.posterior_mean_zero) << "\n";
        out << "verify.deviation_found=" << fmt(report.deviation_found) << "\n";
        if (report.deviation) {
            out << "verify.deviation.kind=" << report.deviation->kind << "\n";
            out << "verify.deviation.cost=" << fmt(report.deviation->cost) << "\n";
            out << "verify.deviation.gain=" << fmt(report.deviation->gain) << "\n";
        }
        return report.all_ok() ? 0 : 1;
    }
    return 0;
}

int cmd_capacity(const RunConfig& cfg, std::ostream& out) {
    const json sec = cfg.doc.at("capacity");
    const CapacityConfig cap{sec.at("k").get<double>()};
    json cand = sec;
    if (!cand.contains("alpha")) cand["alpha"] = json::array({1.0, 0.0});
    const SelectionProcedure proc = procedure_from_config(cfg, cand);
    const CapacityReport report = verify_capacity_equilibrium(proc, cfg.tests, cap, cfg.search);
    out << "k=" << fmt(cap.k) << "\n";
    print_report(out, report.base);
    out << "p_equilibrium=" << fmt(report.p_equilibrium) << "\n";
    out << "severe_capacity=" << fmt(report.severe_capacity) << "\n";
    out << "difficulty_maximal=" << fmt(report.difficulty_maximal) << "\n";
    out << "converged=" << fmt(report.base.converged) << "\n";
    return report.base.is_equilibrium ? 0 : 1;
}

int cmd_two_tier(const RunConfig& cfg, std::ostream& out) {
    const json sec = cfg.doc.at("two_tier");
    const auto make_proc = [&](const char* key) {
        json spec;
        spec["test_index"] = sec.at(key).get<std::size_t>();
        spec["alpha"] = sec.value(std::string(key) + "_alpha", json::array({1.0, 0.0}));
        return procedure_from_config(cfg, spec);
    };
    const SelectionProcedure selective = make_proc("selective_test");
    const SelectionProcedure safe = make_proc("safe_test");
    std::optional<CapacityConfig> cap;
    if (cfg.doc.contains("capacity"))
        cap = CapacityConfig{cfg.doc.at("capacity").at("k").get<double>()};

    const TwoTierCertificate cert = verify_two_tier(selective, safe, cfg.tests, cap, cfg.search);
    out << "capacity_mode=" << fmt(cert.capacity_mode) << "\n";
    out << "applicable=" << fmt(cert.applicable) << "\n";
    if (cert.capacity_mode) {
        out << "conditions.low_type_profitable=" << fmt(cert.conditions.low_type_profitable) << "\n";
        out << "conditions.mixing_feasible=" << fmt(cert.conditions.mixing_feasible) << "\n";
        out << "conditions.selective_capacity_binds=" << fmt(cert.conditions.selective_capacity_binds)
            << "\n";
        out << "conditions.safe_capacity_binds=" << fmt(cert.conditions.safe_capacity_binds) << "\n";
    }
    if (!cert.applicable) return 1;
    out << "profile_consistent=" << fmt(cert.profile_consistent) << "\n";
    out << "phi_low_to_safe=" << fmt(cert.phi_low_to_safe) << "\n";
    out << "payoff_selective=" << fmt(cert.payoff_selective) << "\n";
    out << "payoff_safe=" << fmt(cert.payoff_safe) << "\n";
    out << "deviation_gain_selective=" << fmt(cert.deviation_gain_selective) << "\n";
    out << "deviation_gain_safe=" << fmt(cert.deviation_gain_safe) << "\n";
    print_procedure(out, "best_dev_selective", cert.best_dev_selective);
    print_procedure(out, "best_dev_safe", cert.best_dev_safe);
    out << "is_equilibrium=" << fmt(cert.is_equilibrium) << "\n";
    return cert.is_equilibrium ? 0 : 1;
}

int cmd_wage(const RunConfig& cfg, std::ostream& out) {
    RunConfig wage_cfg = cfg;
    wage_cfg.mode = MarketMode::Wage;
    const json sec = cfg.doc.value("wage", json::object());
    const SelectionProcedure proc = procedure_from_config(wage_cfg, sec);
    const WageReport report = verify_wage_equilibrium(proc, cfg.tests, cfg.search,
                                                      sec.value("wage_steps", 201),
                                                      sec.value("wage_alpha_steps", 8));
    print_procedure(out, "candidate", proc, true);
    out << "alpha_l_zero=" << fmt(report.alpha_l_zero) << "\n";
    out << "difficulty_maximal=" << fmt(report.difficulty_maximal) << "\n";
    out << "zero_profit_wage=" << fmt(report.zero_profit_wage) << "\n";
    out << "wage_matches_zero_profit=" << fmt(report.wage_matches_zero_profit) << "\n";
    out << "equilibrium_payoff=" << fmt(report.equilibrium_payoff) << "\n";
    out << "best_gain=" << fmt(report.best_gain) << "\n";
    print_procedure(out, "best_deviation", report.best_deviation, true);
    out << "cross_subsidy_gain=" << fmt(report.cross_subsidy_gain) << "\n";
    out << "knife_edge_pair=" << fmt(report.knife_edge_pair) << "\n";
    out << "deviation_found=" << fmt(report.deviation_found) << "\n";
    out << "is_equilibrium=" << fmt(report.all_ok()) << "\n";
    return report.all_ok() ? 0 : 1;
}

} // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                   std::ostream& out) {
    if (name == "orders") return cmd_orders(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    if (name == "solve") return cmd_solve(cfg, out);
    if (name == "scan") return cmd_scan(cfg, out_dir, out);
    if (name == "cost") return cmd_cost(cfg, out);
    if (name == "capacity") return cmd_capacity(cfg, out);
    if (name == "two-tier") return cmd_two_tier(cfg, out);
    if (name == "wage") return cmd_wage(cfg, out);
    throw ConfigError("unknown subcommand: " + name);
}

int run_cli(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) + " — selection-procedure market equilibria"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::vector<std::string> sets;
        std::string out_dir = ".";
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
    };

    const std::vector<std::string> names = {"orders", "verify", "solve",    "scan",
                                            "cost",   "capacity", "two-tier", "wage"};
    std::map<std::string, Common> opts;
    bool certify = false;
    std::string isocost_arg, verify_arg;
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        auto& c = opts[name];
        sub->add_option("--config", c.config, "configuration file")->required();
        sub->add_option("--set", c.sets, "dotted-path override key=value");
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--seed", c.seed, "random seed override");
        sub->add_option("--threads", c.threads, "worker threads (or SELEQ_THREADS)");
        if (name == "orders") sub->add_flag("--certify", certify, "run the order oracles");
        if (name == "cost") {
            sub->add_option("--isocost", isocost_arg, "emit the equal-cost easier test, e.g. mu=0.05");
            sub->add_option("--verify", verify_arg, "run budget-equilibrium checks, e.g. kappa=0.2");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Common& c = opts[name];
    try {
        std::vector<std::string> overrides = c.sets;
        if (c.seed) overrides.push_back("seed=" + std::to_string(*c.seed));
        if (!c.threads) {
            if (const char* env = std::getenv("SELEQ_THREADS")) c.threads = std::atoi(env);
        }
        if (c.threads) overrides.push_back("threads=" + std::to_string(*c.threads));
        if (certify) overrides.push_back("orders.certify=true");
        const auto keyed = [](const std::string& prefix, const std::string& kv) {
            return prefix + "." + kv;
        };
        if (!isocost_arg.empty()) overrides.push_back(keyed("cost", "mu_mix=" + isocost_arg.substr(isocost_arg.find('=') + 1)));
        if (!verify_arg.empty()) {
            overrides.push_back(keyed("cost", "kappa=" + verify_arg.substr(verify_arg.find('=') + 1)));
            overrides.push_back("cost.verify=true");
        }
        const RunConfig cfg = load_config(c.config, overrides);
        return run_subcommand(name, cfg, c.out_dir, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace seleq
