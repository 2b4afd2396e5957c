#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "rackrs/experiment.hpp"
#include "rackrs/serialize.hpp"

using namespace rackrs;
using nlohmann::json;

namespace {

// exit codes, distinguishable for CI
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kHypothesis = 2;
constexpr int kSearchExhausted = 3;
constexpr int kRepairFailure = 4;

std::vector<unsigned> parse_uint_list(const std::string& s) {
    std::vector<unsigned> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(unsigned(std::stoul(tok)));
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

struct FamilyFlags {
    std::string family = "additive";
    FamilyParams prm;
    std::string subspace = "auto";
    std::string subspace_basis;  // elements joined by ';'
    std::uint64_t seed = 42;
    std::string config_path;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--family", family, "additive|multiplicative|combined|gw|two-coset");
        cmd->add_option("--p0", prm.p0, "field characteristic");
        cmd->add_option("--base-degree,--s-base", prm.s_base, "s: base field F_p = F_{p0^s}");
        cmd->add_option("--t", prm.t, "extension degree t = [F_q : F_p]");
        cmd->add_option("--k", prm.k, "code dimension");
        cmd->add_option("--ell", prm.ell, "subspace dimension");
        cmd->add_option("--a", prm.a, "subfield degree (multiplicative/combined)");
        cmd->add_option("--v", prm.v, "roots-of-unity count (combined)");
        cmd->add_option("--n", prm.n, "code length (two-coset)");
        cmd->add_option("--host-rack", prm.host_rack, "host rack index (0-based)");
        cmd->add_option("--host-node", prm.host_node, "host node index within the rack");
        cmd->add_option("--subspace", subspace, "auto|subfield|search|explicit");
        cmd->add_option("--subspace-basis", subspace_basis,
                        "explicit V: basis elements joined by ';'");
        cmd->add_option("--seed", seed, "search seed");
        cmd->add_option("--config", config_path, "JSON config mirroring these flags");
    }

    void load_config(const CLI::App* cmd) {
        if (config_path.empty()) return;
        json j = json::parse(read_file(config_path));
        auto take = [&](const char* flag, const char* key, auto& dst) {
            if (j.contains(key) && cmd->count(flag) == 0)
                dst = j.at(key).get<std::decay_t<decltype(dst)>>();
        };
        take("--family", "family", family);
        take("--p0", "p0", prm.p0);
        take("--base-degree", "s_base", prm.s_base);
        take("--t", "t", prm.t);
        take("--k", "k", prm.k);
        take("--ell", "ell", prm.ell);
        take("--a", "a", prm.a);
        take("--v", "v", prm.v);
        take("--n", "n", prm.n);
        take("--host-rack", "host_rack", prm.host_rack);
        take("--host-node", "host_node", prm.host_node);
        take("--subspace", "subspace", subspace);
        take("--subspace-basis", "subspace_basis", subspace_basis);
        take("--seed", "seed", seed);
    }

    RepairScheme build() const {
        FamilyParams p = prm;
        p.family = family_from_name(family);
        SubspaceSearchConfig cfg;
        cfg.seed = seed;
        if (subspace == "auto") {
            cfg.policy = SubspacePolicy::Auto;
        } else if (subspace == "subfield") {
            cfg.policy = SubspacePolicy::SubfieldOnly;
        } else if (subspace == "search") {
            cfg.policy = SubspacePolicy::SearchOnly;
        } else if (subspace == "explicit") {
            std::vector<std::string> basis;
            std::istringstream is(subspace_basis);
            std::string tok;
            while (std::getline(is, tok, ';')) basis.push_back(tok);
            return build_family_scheme(p, cfg, &basis);
        } else {
            throw Error("unknown subspace policy: " + subspace);
        }
        return build_family_scheme(p, cfg);
    }
};

int cmd_ff(unsigned p0, unsigned t, const std::string& modulus) {
    std::optional<std::vector<unsigned>> mod;
    if (!modulus.empty()) mod = parse_uint_list(modulus);
    auto F = make_field(p0, t, mod);
    std::cout << "field: " << F->description() << "\n";
    std::cout << "size: " << F->size() << "\n";
    const auto gen = F->generator();
    std::cout << "generator: " << gen.str() << " (order " << F->order_of(gen) << ")\n";
    std::cout << "primitive: " << F->primitive_element().str() << "\n";
    std::cout << "subfields:";
    for (unsigned s : F->subfield_degrees())
        std::cout << " " << p0 << "^" << s << " (" << F->subfield_elements(F->subfield(s)).size()
                  << " elements)";
    std::cout << "\n";
    return kOk;
}

int cmd_scheme_build(const FamilyFlags& flags, const std::string& out) {
    auto scheme = flags.build();
    emit(scheme_to_json(scheme), out);
    std::cerr << "scheme: family=" << scheme.family << " n=" << scheme.layout.size()
              << " k=" << scheme.k << " d=" << scheme.d
              << " max_deg=" << scheme.validation.max_degree << "/"
              << scheme.validation.degree_bound
              << " valid=" << (scheme.validation.ok() ? "yes" : "no") << "\n";
    return kOk;
}

int cmd_repair_run(const std::string& scheme_path, ExperimentConfig cfg,
                   const std::string& format, const std::string& out) {
    auto scheme = load_scheme(scheme_path);
    auto rep = run_repair_experiment(scheme, cfg);
    if (format == "csv")
        emit(Report::csv_header() + "\n" + rep.csv_row() + "\n", out);
    else
        emit(rep.to_json(), out);
    return rep.failures == 0 ? kOk : kRepairFailure;
}

int cmd_repair_exhaustive(const FamilyFlags& flags, ExperimentConfig cfg,
                          const std::string& format, const std::string& out) {
    FamilyParams base = flags.prm;
    base.family = family_from_name(flags.family);
    auto check = validate_family_params(base);
    if (!check.ok) throw HypothesisError(check.violations);

    unsigned failures = 0;
    std::vector<Report> reports;
    for (unsigned rack = 0; rack < check.derived.r; ++rack) {
        for (unsigned node = 0; node < check.derived.u; ++node) {
            FamilyFlags ff = flags;
            ff.prm.host_rack = rack;
            ff.prm.host_node = node;
            if (base.family == Family::gw || base.family == Family::two_coset)
                ff.prm.host_node = rack;  // u = 1: flat index lives in the rack slot
            auto scheme = ff.build();
            auto rep = run_repair_experiment(scheme, cfg);
            failures += rep.failures;
            reports.push_back(std::move(rep));
        }
    }

    if (format == "csv") {
        std::string text = Report::csv_header() + "\n";
        for (const auto& r : reports) text += r.csv_row() + "\n";
        emit(text, out);
    } else {
        json j;
        j["positions"] = reports.size();
        j["trials_per_position"] = cfg.trials;
        j["failures"] = failures;
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(json::parse(r.to_json()));
        j["reports"] = arr;
        emit(j.dump(2) + "\n", out);
    }
    return failures == 0 ? kOk : kRepairFailure;
}

int cmd_cutset(const CutSetQuery& q) {
    auto b = cutset_bound(q);
    std::cout << "m: " << b.m << "\n";
    std::cout << "symbols: " << to_string(b.symbols) << " over F_" << q.base_size << "\n";
    std::cout << "bits: " << b.bits.bits_exact() << " = " << b.bits.bits() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-based repair of generalized Reed-Solomon codes in the rack-aware model"};
    app.require_subcommand(1);

    // ff
    auto* ff = app.add_subcommand("ff", "finite field summary");
    unsigned ff_p0 = 2, ff_t = 1;
    std::string ff_mod;
    ff->add_option("--p0", ff_p0, "characteristic")->required();
    ff->add_option("--t", ff_t, "extension degree over the prime field")->required();
    ff->add_option("--modulus", ff_mod, "coefficients c0,c1,...,cT (low degree first)");

    // scheme build
    auto* scheme = app.add_subcommand("scheme", "scheme construction");
    scheme->require_subcommand(1);
    auto* build = scheme->add_subcommand("build", "construct and serialize a repair scheme");
    FamilyFlags build_flags;
    build_flags.add_to(build);
    std::string build_out;
    build->add_option("--out", build_out, "output path for the scheme JSON");

    // repair run / exhaustive
    auto* repair = app.add_subcommand("repair", "repair experiments");
    repair->require_subcommand(1);
    auto* run = repair->add_subcommand("run", "randomized trials on a scheme file");
    std::string run_scheme, run_out, run_format = "json", run_helpers = "exhaustive";
    ExperimentConfig run_cfg;
    run->add_option("--scheme", run_scheme, "scheme JSON path")->required();
    run->add_option("--trials", run_cfg.trials, "trial count");
    run->add_option("--seed", run_cfg.seed, "trial seed");
    run->add_option("--helpers", run_helpers, "all|exhaustive|random");
    run->add_option("--helper-sets", run_cfg.random_helper_sets, "random helper-set count");
    run->add_option("--format", run_format, "json|csv");
    run->add_option("--out", run_out, "output path");
    run->add_flag("--timing", run_cfg.timing, "include wall-clock duration in the report");

    auto* exh = repair->add_subcommand("exhaustive",
                                       "rebuild the scheme for every failure position");
    FamilyFlags exh_flags;
    exh_flags.add_to(exh);
    std::string exh_out, exh_format = "json", exh_helpers = "exhaustive";
    ExperimentConfig exh_cfg;
    exh_cfg.trials = 20;
    exh->add_option("--trials", exh_cfg.trials, "trials per failure position");
    exh->add_option("--trial-seed", exh_cfg.seed, "trial seed");
    exh->add_option("--helpers", exh_helpers, "all|exhaustive|random");
    exh->add_option("--format", exh_format, "json|csv");
    exh->add_option("--out", exh_out, "output path");

    // cutset
    auto* cut = app.add_subcommand("cutset", "rack-aware cut-set bound");
    CutSetQuery cq;
    cut->add_option("--n", cq.n)->required();
    cut->add_option("--k", cq.k)->required();
    cut->add_option("--r", cq.r)->required();
    cut->add_option("--d", cq.d)->required();
    cut->add_option("--q", cq.q, "code alphabet size")->required();
    cut->add_option("--base", cq.base_size, "base field size |F_p|")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter grid to CSV");
    std::string sweep_config, sweep_out;
    sweep->add_option("--config", sweep_config, "grid JSON path")->required();
    sweep->add_option("--out", sweep_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ff) return cmd_ff(ff_p0, ff_t, ff_mod);
        if (*build) {
            build_flags.load_config(build);
            return cmd_scheme_build(build_flags, build_out);
        }
        if (*run) {
            run_cfg.helpers = helper_policy_from_name(run_helpers);
            return cmd_repair_run(run_scheme, run_cfg, run_format, run_out);
        }
        if (*exh) {
            exh_flags.load_config(exh);
            exh_cfg.helpers = helper_policy_from_name(exh_helpers);
            return cmd_repair_exhaustive(exh_flags, exh_cfg, exh_format, exh_out);
        }
        if (*cut) return cmd_cutset(cq);
        if (*sweep) {
            emit(run_sweep_csv(read_file(sweep_config)), sweep_out);
            return kOk;
        }
    } catch (const HypothesisError& e) {
        json j;
        j["error"] = "hypothesis_violation";
        j["violations"] = e.violations();
        std::cerr << j.dump(2) << "\n";
        return kHypothesis;
    } catch (const SubspaceSearchError& e) {
        json j;
        j["error"] = "subspace_search_exhausted";
        j["best_degree"] = e.best_degree;
        j["degree_bound"] = e.degree_bound;
        j["candidates"] = e.candidates;
        std::cerr << j.dump(2) << "\n";
        return kSearchExhausted;
    } catch (const RepairError& e) {
        std::cerr << "repair failure: " << e.what() << "\n";
        return kRepairFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
