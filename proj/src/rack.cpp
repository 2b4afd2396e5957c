#include "rackrs/rack.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace rackrs {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {
std::pair<std::uint64_t, unsigned> factor_prime_power(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        unsigned s = 0;
        std::uint64_t m = n;
        while (m % p == 0) {
            m /= p;
            ++s;
        }
        if (m != 1) throw Error("field size is not a prime power");
        return {p, s};
    }
    return {n, 1};
}
}  // namespace

double BitsAccount::bits() const {
    return boost::rational_cast<double>(symbols) * std::log2(double(base_size));
}

std::string BitsAccount::bits_exact() const {
    auto [p0, s] = factor_prime_power(base_size);
    Rational b = symbols * long(s);
    if (p0 == 2) return to_string(b);
    return to_string(b) + "*log2(" + std::to_string(p0) + ")";
}

// ---------------------------------------------------------------------------
// layout and scheme
// ---------------------------------------------------------------------------

std::vector<FieldElement> RackLayout::flatten() const {
    std::vector<FieldElement> out;
    out.reserve(size());
    for (const auto& row : grid) out.insert(out.end(), row.begin(), row.end());
    return out;
}

RackLayout RackLayout::make(std::vector<std::vector<FieldElement>> grid) {
    if (grid.empty() || grid.front().empty()) throw Error("empty rack layout");
    const std::size_t u = grid.front().size();
    for (const auto& row : grid)
        if (row.size() != u) throw Error("racks must have equal size");
    RackLayout l{unsigned(grid.size()), unsigned(u), std::move(grid)};
    auto flat = l.flatten();
    std::vector<elem_idx> idx;
    idx.reserve(flat.size());
    for (const auto& x : flat) idx.push_back(x.index());
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw Error("evaluation points must be distinct across the layout");
    return l;
}

GrsCode RepairScheme::code() const { return GrsCode::make(field, layout.flatten(), k); }

RepairScheme RepairScheme::make(std::shared_ptr<const FieldTower> field, RackLayout layout,
                                unsigned k, std::pair<unsigned, unsigned> host, unsigned d,
                                TraceBasis basis, std::vector<Poly> h_polys) {
    const unsigned r = layout.racks, u = layout.nodes_per_rack;
    if (host.first >= r || host.second >= u) throw Error("host position out of range");
    if (k < 1 || k >= layout.size()) throw Error("need 1 <= k < n");
    const unsigned d_min = (k + u) / u - 1;  // ceil((k+1)/u) - 1
    if (d < d_min || d > r - 1)
        throw Error("helper degree d=" + std::to_string(d) + " outside [" +
                    std::to_string(d_min) + ", " + std::to_string(r - 1) + "]");
    const unsigned t = field->relative_degree(basis.base);
    if (basis.eta.size() != t || basis.theta.size() != t)
        throw Error("basis must have length t = " + std::to_string(t));
    if (h_polys.size() != t) throw Error("need exactly t repair polynomials");
    for (const auto& h : h_polys)
        if (h.tower() != field.get()) throw Error("repair polynomial over a different field");
    RepairScheme s;
    s.field = std::move(field);
    s.layout = std::move(layout);
    s.k = k;
    s.host = host;
    s.d = d;
    s.basis = std::move(basis);
    s.h_polys = std::move(h_polys);
    return s;
}

ValidationReport validate_scheme(const RepairScheme& scheme) {
    ValidationReport rep;
    rep.degree_bound = scheme.degree_bound();
    rep.max_degree = -1;
    for (const auto& h : scheme.h_polys) rep.max_degree = std::max(rep.max_degree, h.degree());
    rep.degree_ok = rep.max_degree <= rep.degree_bound;
    if (!rep.degree_ok)
        rep.failures.push_back("max deg h_a = " + std::to_string(rep.max_degree) +
                               " exceeds u(d+1)-k-1 = " + std::to_string(rep.degree_bound));

    rep.host_values_ok = true;
    const auto& hp = scheme.host_point();
    for (std::size_t a = 0; a < scheme.h_polys.size(); ++a) {
        if (scheme.h_polys[a].eval(hp) != scheme.basis.eta[a]) {
            rep.host_values_ok = false;
            rep.failures.push_back("h_" + std::to_string(a + 1) +
                                   " does not take the prescribed value at the host point");
        }
    }

    rep.basis_ok = true;
    try {
        auto tb = dual_basis(scheme.basis.base, scheme.basis.eta);
        if (tb.theta != scheme.basis.theta) {
            rep.basis_ok = false;
            rep.failures.push_back("theta is not the trace-dual of eta");
        }
    } catch (const Error&) {
        rep.basis_ok = false;
        rep.failures.push_back("eta is not a basis over the base subfield");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// download plans and repair
// ---------------------------------------------------------------------------

DownloadPlan build_download_plan(const RepairScheme& scheme, std::span<const unsigned> helpers) {
    const FieldTower& F = *scheme.field;
    const unsigned u = scheme.layout.nodes_per_rack;
    const unsigned s = scheme.host.first, j = scheme.host.second;
    const unsigned t = scheme.t();

    if (helpers.size() != scheme.d)
        throw Error("need exactly d = " + std::to_string(scheme.d) + " helper racks, got " +
                    std::to_string(helpers.size()));
    std::set<unsigned> hs(helpers.begin(), helpers.end());
    if (hs.size() != helpers.size()) throw Error("repeated helper rack");
    if (hs.count(s)) throw Error("host rack cannot help itself");
    for (unsigned h : hs)
        if (h >= scheme.layout.racks) throw Error("helper rack out of range");

    DownloadPlan plan;
    plan.tower = &F;
    plan.host = scheme.host;
    plan.helpers.assign(hs.begin(), hs.end());

    plan.punct_racks.push_back(s);
    plan.punct_racks.insert(plan.punct_racks.end(), plan.helpers.begin(), plan.helpers.end());
    std::vector<FieldElement> punct_points;
    punct_points.reserve(std::size_t(u) * plan.punct_racks.size());
    for (unsigned rk : plan.punct_racks)
        for (const auto& a : scheme.layout.grid[rk]) punct_points.push_back(a);
    auto v = dual_multipliers(punct_points);
    for (std::size_t ri = 0; ri < plan.punct_racks.size(); ++ri)
        plan.punct_multipliers.emplace_back(v.begin() + long(ri) * u,
                                            v.begin() + long(ri + 1) * u);

    const FieldElement v_host = plan.punct_multipliers[0][j];

    // host-side weights: (v_{s,l} / v_{s,j}) * h_a(alpha_{s,l}), l != j
    plan.host_coeffs.assign(t, {});
    for (unsigned a = 0; a < t; ++a) {
        plan.host_coeffs[a].reserve(u - 1);
        for (unsigned l = 0; l < u; ++l) {
            if (l == j) continue;
            plan.host_coeffs[a].push_back((plan.punct_multipliers[0][l] / v_host) *
                                          scheme.h_polys[a].eval(scheme.layout.grid[s][l]));
        }
    }

    // helper-side spans of the h-evaluation vectors
    for (std::size_t hi = 0; hi < plan.helpers.size(); ++hi) {
        const unsigned rk = plan.helpers[hi];
        std::vector<std::vector<FieldElement>> hvecs(t);
        for (unsigned a = 0; a < t; ++a) {
            hvecs[a].reserve(u);
            for (unsigned l = 0; l < u; ++l)
                hvecs[a].push_back(scheme.h_polys[a].eval(scheme.layout.grid[rk][l]));
        }
        auto span = span_dim_over(hvecs, scheme.basis.base);
        std::vector<std::vector<FieldElement>> e(t);
        for (unsigned a = 0; a < t; ++a) e[a] = coords_in_span(span, hvecs[a]);
        plan.b_profile.push_back(span.dim);
        plan.cross_symbols += span.dim;
        plan.spans.push_back(std::move(span));
        plan.combo.push_back(std::move(e));

        std::vector<FieldElement> w;
        w.reserve(u);
        for (unsigned l = 0; l < u; ++l)
            w.push_back(plan.punct_multipliers[hi + 1][l] / v_host);
        plan.helper_weights.push_back(std::move(w));
    }
    return plan;
}

RepairTranscript execute_repair(const RepairScheme& scheme, const DownloadPlan& plan,
                                const Codeword& word) {
    const FieldTower& F = *scheme.field;
    if (plan.tower != &F || plan.host != scheme.host)
        throw Error("download plan does not match the scheme");
    const unsigned u = scheme.layout.nodes_per_rack;
    const unsigned s = scheme.host.first, j = scheme.host.second;
    const unsigned t = scheme.t();
    const GrsCode code = scheme.code();
    if (word.size() != code.length()) throw Error("codeword length mismatch");

    const std::size_t host_flat = std::size_t(s) * u + j;
    bool any_erased = false;
    for (std::size_t i = 0; i < word.erased.size(); ++i) {
        if (!word.erased[i]) continue;
        if (i != host_flat) throw Error("only the host position may be erased");
        any_erased = true;
    }
    if (!any_erased && !is_codeword(code, word))
        throw RepairError("input word fails the parity check");

    // f-values per coordinate (multipliers divided out)
    auto f_at = [&](unsigned rack, unsigned node) {
        const std::size_t flat = std::size_t(rack) * u + node;
        return word.symbols[flat] / code.multipliers[flat];
    };

    RepairTranscript out;
    out.intra_rack_symbols = std::size_t(u - 1) * t;
    out.cross_rack_symbols = plan.cross_symbols;
    out.cross_rack_bits =
        BitsAccount{Rational(long(plan.cross_symbols)),
                    std::uint64_t(F.subfield_elements(scheme.basis.base).size())};

    // downloads from each helper rack: Tr(f_i . c_l), one F_p symbol per span
    // vector, independent of a
    std::vector<std::vector<FieldElement>> downloads(plan.helpers.size());
    for (std::size_t hi = 0; hi < plan.helpers.size(); ++hi) {
        const unsigned rk = plan.helpers[hi];
        std::vector<elem_idx> fvec(u);
        for (unsigned l = 0; l < u; ++l)
            fvec[l] = F.mul(plan.helper_weights[hi][l].index(), f_at(rk, l).index());
        for (unsigned m = 0; m < plan.b_profile[hi]; ++m) {
            elem_idx dot = 0;
            const auto& c = plan.spans[hi].basis[m];
            for (unsigned l = 0; l < u; ++l) dot = F.add(dot, F.mul(fvec[l], c[l].index()));
            downloads[hi].emplace_back(&F, F.trace_raw(scheme.basis.base, dot));
        }
        out.per_rack_payload.emplace_back(rk, downloads[hi]);
    }

    // Tr(eta_a f(host)) = -sum_{l != j} Tr(w_l h_a f) - sum_i sum_l e Tr(f_i . c_l)
    std::vector<FieldElement> traces;
    traces.reserve(t);
    for (unsigned a = 0; a < t; ++a) {
        elem_idx host_sum = 0;
        unsigned col = 0;
        for (unsigned l = 0; l < u; ++l) {
            if (l == j) continue;
            host_sum = F.add(host_sum,
                             F.mul(plan.host_coeffs[a][col].index(), f_at(s, l).index()));
            ++col;
        }
        elem_idx acc = F.neg(F.trace_raw(scheme.basis.base, host_sum));
        for (std::size_t hi = 0; hi < plan.helpers.size(); ++hi)
            for (unsigned m = 0; m < plan.b_profile[hi]; ++m)
                acc = F.sub(acc, F.mul(plan.combo[hi][a][m].index(), downloads[hi][m].index()));
        traces.emplace_back(&F, acc);
    }
    out.recovered = element_from_traces(traces, scheme.basis);
    return out;
}

RepairTranscript repair_standard(const RepairScheme& scheme, std::span<const unsigned> helper_nodes,
                                 const Codeword& word) {
    if (scheme.layout.nodes_per_rack != 1)
        throw Error("repair_standard requires the degenerated layout u = 1");
    auto plan = build_download_plan(scheme, helper_nodes);
    return execute_repair(scheme, plan, word);
}

BandwidthSummary worst_case_bandwidth(const RepairScheme& scheme) {
    const unsigned u = scheme.layout.nodes_per_rack;
    const unsigned t = scheme.t();
    BandwidthSummary out;
    out.per_rack.assign(scheme.layout.racks, 0);
    for (unsigned rk = 0; rk < scheme.layout.racks; ++rk) {
        if (rk == scheme.host.first) continue;
        std::vector<std::vector<FieldElement>> hvecs(t);
        for (unsigned a = 0; a < t; ++a) {
            hvecs[a].reserve(u);
            for (unsigned l = 0; l < u; ++l)
                hvecs[a].push_back(scheme.h_polys[a].eval(scheme.layout.grid[rk][l]));
        }
        out.per_rack[rk] = span_dim_over(hvecs, scheme.basis.base).dim;
    }
    std::vector<unsigned> sorted;
    for (unsigned rk = 0; rk < scheme.layout.racks; ++rk)
        if (rk != scheme.host.first) sorted.push_back(out.per_rack[rk]);
    std::sort(sorted.rbegin(), sorted.rend());
    for (unsigned i = 0; i < scheme.d; ++i) out.symbols += sorted[i];
    out.bits = BitsAccount{
        Rational(out.symbols),
        std::uint64_t(scheme.field->subfield_elements(scheme.basis.base).size())};
    return out;
}

CutSetBound cutset_bound(const CutSetQuery& query) {
    if (query.n == 0 || query.r == 0 || query.n % query.r != 0)
        throw Error("r must divide n");
    if (query.k < 1 || query.k >= query.n) throw Error("need 1 <= k < n");
    if (query.base_size < 2) throw Error("base field too small");
    unsigned t = 0;
    std::uint64_t power = 1;
    while (power < query.q) {
        power *= query.base_size;
        ++t;
    }
    if (power != query.q) throw Error("q is not a power of the base field size");

    const unsigned m = unsigned((std::uint64_t(query.k) * query.r) / query.n);
    if (query.d < m) throw Error("cut-set bound needs d >= floor(kr/n)");
    if (query.d > query.r - 1) throw Error("d exceeds r-1");

    CutSetBound out;
    out.m = m;
    out.t = t;
    out.symbols = Rational(long(query.d) * t, long(query.d) - m + 1);
    out.bits = BitsAccount{out.symbols, query.base_size};
    return out;
}

}  // namespace rackrs
