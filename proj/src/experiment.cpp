#include "rackrs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rackrs/serialize.hpp"

namespace rackrs {

using nlohmann::json;

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::vector<std::vector<unsigned>> choose_helper_sets(const RepairScheme& scheme,
                                                      const ExperimentConfig& cfg) {
    const unsigned r = scheme.layout.racks, s = scheme.host.first, d = scheme.d;
    std::vector<unsigned> others;
    for (unsigned i = 0; i < r; ++i)
        if (i != s) others.push_back(i);

    std::vector<std::vector<unsigned>> sets;
    if (cfg.helpers == ExperimentConfig::HelperPolicy::All) {
        if (d != r - 1) throw Error("helper policy 'all' needs d = r - 1");
        sets.push_back(others);
        return sets;
    }

    // count C(r-1, d), saturating
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) {
        count = count * (others.size() - i) / (i + 1);
        if (count > 10000) break;
    }
    const bool exhaustive =
        cfg.helpers == ExperimentConfig::HelperPolicy::Exhaustive && count <= 64;

    if (exhaustive) {
        std::vector<bool> pick(others.size(), false);
        std::fill(pick.begin(), pick.begin() + d, true);
        do {
            std::vector<unsigned> set;
            for (std::size_t i = 0; i < others.size(); ++i)
                if (pick[i]) set.push_back(others[i]);
            sets.push_back(std::move(set));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        return sets;
    }

    std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x68656c70ull));
    std::set<std::vector<unsigned>> seen;
    const unsigned want = cfg.random_helper_sets;
    while (sets.size() < want && seen.size() < count) {
        std::vector<unsigned> pool = others;
        std::vector<unsigned> set;
        for (unsigned i = 0; i < d; ++i) {
            const std::size_t pick = std::size_t(rng() % pool.size());
            set.push_back(pool[pick]);
            pool.erase(pool.begin() + long(pick));
        }
        std::sort(set.begin(), set.end());
        if (seen.insert(set).second) sets.push_back(std::move(set));
    }
    return sets;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + 0x632be59bd9b4e019ull * (index + 1));
}

ExperimentConfig::HelperPolicy helper_policy_from_name(const std::string& name) {
    if (name == "all") return ExperimentConfig::HelperPolicy::All;
    if (name == "exhaustive") return ExperimentConfig::HelperPolicy::Exhaustive;
    if (name == "random") return ExperimentConfig::HelperPolicy::Random;
    throw Error("unknown helper policy: " + name);
}

std::string helper_policy_name(ExperimentConfig::HelperPolicy policy) {
    switch (policy) {
        case ExperimentConfig::HelperPolicy::All: return "all";
        case ExperimentConfig::HelperPolicy::Exhaustive: return "exhaustive";
        case ExperimentConfig::HelperPolicy::Random: return "random";
    }
    return "?";
}

Report run_repair_experiment(const RepairScheme& scheme, const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.trials < 1) throw Error("trial count must be >= 1");
    const FieldTower& F = *scheme.field;
    const unsigned u = scheme.layout.nodes_per_rack;
    const unsigned t = scheme.t();
    const std::uint64_t base_size = F.subfield_elements(scheme.basis.base).size();

    Report rep;
    rep.family = scheme.family;
    rep.p0 = F.characteristic();
    rep.s_base = scheme.basis.base.degree;
    rep.t = t;
    rep.q = F.size();
    rep.n = unsigned(scheme.layout.size());
    rep.r = scheme.layout.racks;
    rep.u = u;
    rep.k = scheme.k;
    rep.d = scheme.d;
    rep.ell = scheme.ell;
    rep.host = scheme.host;
    rep.seed = cfg.seed;
    rep.helper_policy = helper_policy_name(cfg.helpers);
    rep.trials = cfg.trials;
    for (const auto& h : scheme.h_polys) rep.h_degrees.push_back(h.degree());
    for (const auto& b : scheme.subspace_basis) rep.subspace_basis.push_back(b.str());

    const auto bw = worst_case_bandwidth(scheme);
    rep.bandwidth_symbols = bw.symbols;
    rep.bandwidth_bits = bw.bits;
    rep.per_rack_b = bw.per_rack;
    const auto bound = cutset_bound(
        {rep.n, rep.k, rep.r, rep.d, rep.q, base_size});
    rep.cutset_symbols = bound.symbols;
    rep.cutset_bits = bound.bits;
    rep.optimal = Rational(rep.bandwidth_symbols) == bound.symbols;
    rep.naive_symbols = (long long)(scheme.k) * t;
    rep.intra_rack_symbols = std::size_t(u - 1) * t;

    const auto helper_sets = choose_helper_sets(scheme, cfg);
    rep.helper_sets = unsigned(helper_sets.size());
    std::vector<DownloadPlan> plans;
    plans.reserve(helper_sets.size());
    for (const auto& hs : helper_sets) plans.push_back(build_download_plan(scheme, hs));

    const GrsCode code = scheme.code();
    const std::size_t host_flat =
        std::size_t(scheme.host.first) * u + scheme.host.second;

    for (unsigned trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(trial_seed(cfg.seed, trial));
        std::vector<FieldElement> coeffs;
        coeffs.reserve(scheme.k);
        for (unsigned i = 0; i < scheme.k; ++i)
            coeffs.push_back(F.element(elem_idx(rng() % F.size())));
        if (std::all_of(coeffs.begin(), coeffs.end(),
                        [](const FieldElement& e) { return e.is_zero(); }))
            coeffs[0] = F.one();
        const Poly message = Poly::from_coeffs(coeffs);
        const Codeword word = encode(code, message);
        const FieldElement truth = word.symbols[host_flat];

        Codeword lost = word;
        lost.erased[host_flat] = true;
        lost.symbols[host_flat] = F.zero();  // the repair must not read it

        std::vector<std::size_t> naive_helpers;
        for (std::size_t i = 0; i < word.size() && naive_helpers.size() < scheme.k; ++i)
            if (i != host_flat) naive_helpers.push_back(i);
        const Codeword naive = naive_recover(code, lost, naive_helpers);

        for (const auto& plan : plans) {
            const auto transcript = execute_repair(scheme, plan, lost);
            bool ok = transcript.recovered == truth &&
                      naive.symbols[host_flat] == truth &&
                      transcript.cross_rack_symbols == plan.cross_symbols;
            // bandwidth is data independent; cross-check against the span
            // profile computed independently by worst_case_bandwidth
            std::size_t expect = 0;
            for (unsigned rk : plan.helpers) expect += bw.per_rack[rk];
            ok = ok && transcript.cross_rack_symbols == expect;
            if (!ok) ++rep.failures;
        }
    }

    rep.include_duration = cfg.timing;
    rep.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string Report::to_json(int indent) const {
    json j;
    j["version"] = kVersion;
    j["family"] = family;
    j["p0"] = p0;
    j["s_base"] = s_base;
    j["t"] = t;
    j["q"] = q;
    j["n"] = n;
    j["r"] = r;
    j["u"] = u;
    j["k"] = k;
    j["d"] = d;
    j["ell"] = ell;
    j["host"] = {host.first, host.second};
    j["bandwidth_symbols"] = bandwidth_symbols;
    j["bandwidth_bits"] = round6(bandwidth_bits.bits());
    j["bandwidth_bits_exact"] = bandwidth_bits.bits_exact();
    j["cutset_symbols"] = to_string(cutset_symbols);
    j["cutset_symbols_float"] = round6(boost::rational_cast<double>(cutset_symbols));
    j["cutset_bits"] = round6(cutset_bits.bits());
    j["cutset_bits_exact"] = cutset_bits.bits_exact();
    j["optimal"] = optimal;
    j["trials"] = trials;
    j["failures"] = failures;
    j["h_degrees"] = h_degrees;
    j["subspace_basis"] = subspace_basis;
    j["per_rack_b"] = per_rack_b;
    j["intra_rack_symbols"] = intra_rack_symbols;
    j["naive_symbols"] = naive_symbols;
    j["seed"] = seed;
    j["helper_policy"] = helper_policy;
    j["helper_sets"] = helper_sets;
    if (include_duration) j["duration_seconds"] = duration_seconds;
    return j.dump(indent) + "\n";
}

std::string Report::csv_header() {
    return "family,p0,s_base,t,q,n,r,u,k,d,ell,a,v,host_rack,host_node,feasible,violation,"
           "subspace_found,max_h_degree,degree_bound,bandwidth_symbols,cutset_symbols,"
           "bandwidth_bits_exact,cutset_bits_exact,optimal,trials,failures";
}

std::string Report::csv_row() const {
    long maxdeg = -1;
    for (long hd : h_degrees) maxdeg = std::max(maxdeg, hd);
    std::vector<std::string> fields = {
        family,
        std::to_string(p0),
        std::to_string(s_base),
        std::to_string(t),
        std::to_string(q),
        std::to_string(n),
        std::to_string(r),
        std::to_string(u),
        std::to_string(k),
        std::to_string(d),
        std::to_string(ell),
        std::to_string(a),
        std::to_string(v),
        std::to_string(host.first),
        std::to_string(host.second),
        "true",
        "",
        subspace_basis.empty() ? "-" : "yes",
        std::to_string(maxdeg),
        std::to_string(long(u) * (long(d) + 1) - long(k) - 1),
        std::to_string(bandwidth_symbols),
        to_string(cutset_symbols),
        bandwidth_bits.bits_exact(),
        cutset_bits.bits_exact(),
        optimal ? "true" : "false",
        std::to_string(trials),
        std::to_string(failures)};
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += fields[i];
    }
    return row;
}

std::optional<unsigned> smallest_feasible_k(FamilyParams params) {
    for (unsigned k = 1; k <= params.n || k <= (1u << 20); ++k) {
        params.k = k;
        auto check = validate_family_params(params);
        if (check.ok) return k;
        // stop early once k exceeds every family's possible bound
        if (check.derived.q && k > check.derived.q) break;
        if (params.family == Family::two_coset && k + 2 > params.n) break;
        if (!check.derived.q && k > 4096) break;
    }
    return std::nullopt;
}

std::string run_sweep_csv(const std::string& grid_json) {
    json cfg = json::parse(grid_json);
    const Family family = family_from_name(cfg.at("family").get<std::string>());

    auto list_of = [&](const char* key, std::vector<long> dflt) -> std::vector<long> {
        if (!cfg.contains(key)) return dflt;
        const auto& v = cfg.at(key);
        if (v.is_array()) {
            std::vector<long> out;
            for (const auto& x : v) out.push_back(x.get<long>());
            return out;
        }
        if (v.is_number()) return {v.get<long>()};
        return dflt;  // "auto" and friends
    };

    const unsigned p0 = cfg.value("p0", 2u);
    const unsigned s_base = cfg.value("s_base", 1u);
    const auto ts = list_of("t", {0});
    const auto ells = list_of("ell", {-1});
    const auto as = list_of("a", {0});
    const auto vs = list_of("v", {0});
    const auto ns = list_of("n", {0});
    const bool auto_k = !cfg.contains("k") || (cfg.at("k").is_string());
    const auto ks = auto_k ? std::vector<long>{-1} : list_of("k", {});

    ExperimentConfig ecfg;
    ecfg.trials = cfg.value("trials", 10u);
    ecfg.seed = cfg.value("seed", std::uint64_t(42));
    if (cfg.contains("helpers"))
        ecfg.helpers = helper_policy_from_name(cfg.at("helpers").get<std::string>());
    SubspaceSearchConfig scfg;
    scfg.seed = ecfg.seed;

    auto join = [](const std::vector<std::string>& fields) {
        std::string row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) row += ',';
            row += fields[i];
        }
        return row;
    };

    std::ostringstream os;
    os << Report::csv_header() << "\n";
    for (long tt : ts)
        for (long ell : ells)
            for (long a : as)
                for (long v : vs)
                    for (long nn : ns)
                        for (long kk : ks) {
                            FamilyParams prm;
                            prm.family = family;
                            prm.p0 = p0;
                            prm.s_base = s_base;
                            prm.t = unsigned(std::max(tt, 0l));
                            prm.ell = ell;
                            prm.a = unsigned(std::max(a, 0l));
                            prm.v = unsigned(std::max(v, 0l));
                            prm.n = unsigned(std::max(nn, 0l));
                            prm.host_rack = cfg.value("host_rack", 0u);
                            prm.host_node = cfg.value("host_node", 0u);
                            if (kk >= 0)
                                prm.k = unsigned(kk);
                            else
                                prm.k = smallest_feasible_k(prm).value_or(0);

                            auto check = validate_family_params(prm);
                            // shared identity columns for non-success rows
                            std::vector<std::string> head = {
                                family_name(family),        std::to_string(p0),
                                std::to_string(s_base),     std::to_string(prm.t),
                                std::to_string(check.derived.q), std::to_string(check.derived.n),
                                std::to_string(check.derived.r), std::to_string(check.derived.u),
                                std::to_string(prm.k),      std::to_string(check.derived.d),
                                std::to_string(prm.ell),    std::to_string(prm.a),
                                std::to_string(prm.v),      std::to_string(prm.host_rack),
                                std::to_string(prm.host_node)};
                            if (!check.ok) {
                                std::string why = check.violations.front();
                                std::replace(why.begin(), why.end(), ',', ';');
                                auto row = head;
                                for (const auto& f : {std::string("false"), why, std::string("-"),
                                                      std::string(""), std::string(""),
                                                      std::string(""), std::string(""),
                                                      std::string(""), std::string(""),
                                                      std::string("false"), std::string("0"),
                                                      std::string("0")})
                                    row.push_back(f);
                                os << join(row) << "\n";
                                continue;
                            }
                            try {
                                auto scheme = build_family_scheme(prm, scfg);
                                auto rep = run_repair_experiment(scheme, ecfg);
                                rep.a = prm.a;
                                rep.v = prm.v;
                                os << rep.csv_row() << "\n";
                            } catch (const SubspaceSearchError& e) {
                                auto row = head;
                                for (const auto& f :
                                     {std::string("true"), std::string(""), std::string("no"),
                                      std::to_string(e.best_degree),
                                      std::to_string(e.degree_bound), std::string(""),
                                      std::string(""), std::string(""), std::string(""),
                                      std::string("false"), std::string("0"), std::string("0")})
                                    row.push_back(f);
                                os << join(row) << "\n";
                            } catch (const Error& e) {
                                std::string why = e.what();
                                std::replace(why.begin(), why.end(), ',', ';');
                                auto row = head;
                                for (const auto& f : {std::string("false"), why, std::string("-"),
                                                      std::string(""), std::string(""),
                                                      std::string(""), std::string(""),
                                                      std::string(""), std::string(""),
                                                      std::string("false"), std::string("0"),
                                                      std::string("0")})
                                    row.push_back(f);
                                os << join(row) << "\n";
                            }
                        }
    return os.str();
}

}  // namespace rackrs
