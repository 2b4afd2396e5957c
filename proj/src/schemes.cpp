#include "rackrs/schemes.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "rackrs/serialize.hpp"

namespace rackrs {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

/// Trace polynomial sum_{i<steps} x^(base^i) as a Poly.
Poly trace_polynomial(const FieldTower& F, std::uint64_t base, unsigned steps) {
    Poly acc = Poly::zero(&F);
    std::uint64_t e = 1;
    for (unsigned i = 0; i < steps; ++i) {
        acc = acc + Poly::monomial(F.one(), std::size_t(e));
        e *= base;
    }
    return acc;
}

GoodPolynomial finish_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base, Poly g,
                                std::vector<std::vector<FieldElement>> grid, unsigned host_rack) {
    auto layout = RackLayout::make(std::move(grid));
    if (host_rack >= layout.racks) throw Error("host rack out of range");
    if (!is_good_polynomial(g, layout, host_rack))
        throw Error("constructed polynomial is not good on this layout");
    std::vector<FieldElement> consts;
    consts.reserve(layout.racks);
    for (unsigned i = 0; i < layout.racks; ++i) consts.push_back(g.eval(layout.grid[i][0]));
    return GoodPolynomial{std::move(g), std::move(layout), host_rack, std::move(consts), p_base,
                          std::move(field)};
}

}  // namespace

bool is_good_polynomial(const Poly& g, const RackLayout& layout, unsigned host_rack) {
    if (host_rack >= layout.racks) return false;
    if (g.degree() != long(layout.nodes_per_rack)) return false;
    for (unsigned i = 0; i < layout.racks; ++i) {
        const auto value = g.eval(layout.grid[i][0]);
        if (i == host_rack && !value.is_zero()) return false;
        if (i != host_rack && value.is_zero()) return false;
        for (const auto& x : layout.grid[i])
            if (g.eval(x) != value) return false;
    }
    return true;
}

GoodPolynomial additive_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                  unsigned host_rack) {
    const FieldTower& F = *field;
    const unsigned t = F.relative_degree(p_base);
    if (t % 2 != 0) throw Error("additive family needs even t");
    const Subfield p2 = F.subfield(2 * p_base.degree);
    const std::uint64_t p = ipow(F.characteristic(), p_base.degree);

    // scan 0 then generator powers; racks are trace fibers in first-seen order
    std::vector<elem_idx> scan;
    scan.reserve(F.size());
    scan.push_back(0);
    elem_idx cur = F.one().index();
    for (std::uint64_t i = 0; i + 1 < F.size(); ++i) {
        scan.push_back(cur);
        cur = F.mul(cur, F.primitive_element().index());
    }
    std::vector<elem_idx> seen_values;
    std::vector<std::vector<FieldElement>> grid;
    for (elem_idx x : scan) {
        const elem_idx tv = F.trace_raw(p2, x);
        auto it = std::find(seen_values.begin(), seen_values.end(), tv);
        std::size_t rack;
        if (it == seen_values.end()) {
            seen_values.push_back(tv);
            grid.emplace_back();
            rack = grid.size() - 1;
        } else {
            rack = std::size_t(it - seen_values.begin());
        }
        grid[rack].emplace_back(&F, x);
    }
    if (grid.size() != p * p) throw Error("unexpected coset count");

    if (host_rack >= grid.size()) throw Error("host rack out of range");
    const FieldElement beta = grid[host_rack][0];
    Poly g = trace_polynomial(F, ipow(F.characteristic(), p2.degree), t / 2) -
             Poly::constant(F.trace_to(beta, p2));
    return finish_good_poly(std::move(field), p_base, std::move(g), std::move(grid), host_rack);
}

GoodPolynomial multiplicative_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                        unsigned a, unsigned host_rack) {
    const FieldTower& F = *field;
    const unsigned t = F.relative_degree(p_base);
    if (a == 0 || t % a != 0 || a >= t) throw Error("multiplicative family needs a | t, a < t");
    const std::uint64_t p = ipow(F.characteristic(), p_base.degree);
    const std::uint64_t r = ipow(p, a) - 1;
    const std::uint64_t u = (F.size() - 1) / r;

    const elem_idx prim = F.primitive_element().index();
    std::vector<std::vector<FieldElement>> grid(r);
    for (std::uint64_t j = 0; j < r; ++j) {
        grid[j].reserve(u);
        elem_idx x = F.pw(prim, j);
        const elem_idx step = F.pw(prim, r);
        for (std::uint64_t i = 0; i < u; ++i) {
            grid[j].emplace_back(&F, x);
            x = F.mul(x, step);
        }
    }
    if (host_rack >= grid.size()) throw Error("host rack out of range");
    const FieldElement beta = grid[host_rack][0];
    Poly g = Poly::monomial(F.one(), std::size_t(u)) - Poly::constant(beta.pow(u));
    return finish_good_poly(std::move(field), p_base, std::move(g), std::move(grid), host_rack);
}

GoodPolynomial combined_good_poly(std::shared_ptr<const FieldTower> field, Subfield p_base,
                                  unsigned a, unsigned v, unsigned host_rack) {
    const FieldTower& F = *field;
    const unsigned t = F.relative_degree(p_base);
    const std::uint64_t p = ipow(F.characteristic(), p_base.degree);
    if (a == 0 || t % a != 0) throw Error("combined family needs a | t");
    if ((t / a) % p != 0) throw Error("combined family needs p | t/a");
    if (v < 1 || v >= p) throw Error("combined family needs 1 <= v < p");
    if ((ipow(p, a) - 1) % v != 0) throw Error("combined family needs v | p^a - 1");

    const Subfield pa = F.subfield(a * p_base.degree);
    const elem_idx prim = F.primitive_element().index();

    std::vector<elem_idx> seen_values;
    std::vector<std::vector<FieldElement>> grid;
    elem_idx cur = F.one().index();
    for (std::uint64_t i = 0; i + 1 < F.size(); ++i) {
        const elem_idx tr = F.trace_raw(pa, cur);
        if (tr != 0) {
            const elem_idx gv = F.pw(tr, v);
            auto it = std::find(seen_values.begin(), seen_values.end(), gv);
            std::size_t rack;
            if (it == seen_values.end()) {
                seen_values.push_back(gv);
                grid.emplace_back();
                rack = grid.size() - 1;
            } else {
                rack = std::size_t(it - seen_values.begin());
            }
            grid[rack].emplace_back(&F, cur);
        }
        cur = F.mul(cur, prim);
    }
    if (host_rack >= grid.size()) throw Error("host rack out of range");
    const FieldElement beta = grid[host_rack][0];

    Poly trace = trace_polynomial(F, ipow(F.characteristic(), pa.degree), t / a);
    Poly G = Poly::one(&F);
    for (unsigned i = 0; i < v; ++i) G = G * trace;
    Poly g = G - Poly::constant(G.eval(beta));
    return finish_good_poly(std::move(field), p_base, std::move(g), std::move(grid), host_rack);
}

SubspaceChoice subfield_subspace(const FieldTower& field, Subfield p_base, unsigned ell) {
    const unsigned t = field.relative_degree(p_base);
    if (ell == 0 || t % ell != 0)
        throw Error("subfield subspace needs ell | t");
    const Subfield target = field.subfield(ell * p_base.degree);
    SubspaceChoice V{p_base, {}, &field};
    for (elem_idx x : field.subfield_elements(target)) {
        std::vector<std::vector<FieldElement>> probe;
        for (const auto& b : V.basis_vectors) probe.push_back({b});
        probe.push_back({field.element(x)});
        if (span_dim_over(probe, p_base).dim == probe.size())
            V.basis_vectors.push_back(field.element(x));
        if (V.basis_vectors.size() == ell) break;
    }
    if (V.basis_vectors.size() != ell) throw Error("subfield basis extraction failed");
    return V;
}

// ---------------------------------------------------------------------------
// degree descent
// ---------------------------------------------------------------------------

namespace {

/// Shared precomputation for one good polynomial: the reduced powers
/// R_i = g^(p^i - 1) mod Z_E. h_a = sum_i c_i eta_a^(p^i) R_i then has the
/// same reduction as L_V(g eta_a)/g for L_V = sum_i c_i y^(p^i).
struct DescentTables {
    const FieldTower* F;
    std::uint64_t p;
    unsigned s_base;
    Poly Z;
    std::vector<std::vector<elem_idx>> R;  // R[i], raw coefficients

    DescentTables(const GoodPolynomial& good, unsigned ell_max) {
        F = good.field.get();
        s_base = good.p_base.degree;
        p = ipow(F->characteristic(), s_base);
        const auto pts = good.layout.flatten();
        Z = vanishing_poly(pts);
        Poly gp1 = Poly::one(F);
        for (std::uint64_t i = 0; i + 1 < p; ++i) gp1 = gp1 * good.g;
        gp1 = reduce_mod_vanishing(gp1, Z);
        Poly cur = Poly::one(F);
        R.push_back(cur.raw());
        for (unsigned i = 1; i <= ell_max; ++i) {
            for (unsigned f = 0; f < s_base; ++f) cur = cur.frobenius_pow();
            cur = reduce_mod_vanishing(cur * gp1, Z);
            R.push_back(cur.raw());
        }
    }
};

/// Max over a of the degree of sum_i c[i] * eta_pows[a][i] * R[i].
long combined_max_degree(const DescentTables& tab, const std::vector<elem_idx>& c,
                         const std::vector<std::vector<elem_idx>>& eta_pows) {
    const FieldTower& F = *tab.F;
    std::size_t top = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) top = std::max(top, tab.R[i].size());
    long max_deg = -1;
    for (const auto& epows : eta_pows) {
        long deg = -1;
        for (std::size_t idx = top; idx-- > 0;) {
            elem_idx acc = 0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (c[i] == 0 || idx >= tab.R[i].size()) continue;
                acc = F.add(acc, F.mul(F.mul(c[i], epows[i]), tab.R[i][idx]));
            }
            if (acc != 0) {
                deg = long(idx);
                break;
            }
        }
        max_deg = std::max(max_deg, deg);
    }
    return max_deg;
}

/// Coefficients of prod_{b in V}(y - b) at exponents p^i, from an explicit
/// member list. Length ell+1, monic.
std::vector<elem_idx> linearized_coeffs(const FieldTower& F, std::uint64_t p,
                                        const std::vector<elem_idx>& members, unsigned ell) {
    std::vector<elem_idx> L(members.size() + 1, 0);
    L[0] = F.one().index();
    std::size_t deg = 0;
    for (elem_idx b : members) {
        const elem_idx nb = F.neg(b);
        L[deg + 1] = L[deg];
        for (std::size_t i = deg; i-- > 0;) L[i + 1] = F.add(L[i], F.mul(L[i + 1], nb));
        L[0] = F.mul(L[0], nb);
        ++deg;
    }
    std::vector<elem_idx> c(ell + 1, 0);
    std::uint64_t e = 1;
    for (unsigned i = 0; i <= ell; ++i) {
        c[i] = L[std::size_t(e)];
        e *= p;
    }
    return c;
}

std::vector<elem_idx> members_from_basis(const FieldTower& F, Subfield base,
                                         const std::vector<elem_idx>& basis) {
    const auto& sub = F.subfield_elements(base);
    std::vector<elem_idx> members = {0};
    for (elem_idx b : basis) {
        const std::size_t cur = members.size();
        for (std::size_t ci = 1; ci < sub.size(); ++ci) {
            const elem_idx cb = F.mul(sub[ci], b);
            for (std::size_t i = 0; i < cur; ++i) members.push_back(F.add(members[i], cb));
        }
    }
    return members;
}

/// Number of dimension-ell F_p-subspaces of F_p^t, saturating at `cap`.
std::uint64_t gaussian_binomial(unsigned t, unsigned ell, std::uint64_t p, std::uint64_t cap) {
    // [t ell]_p via the recurrence [n k] = [n-1 k-1] + p^k [n-1 k]
    std::vector<std::vector<std::uint64_t>> tab(t + 1, std::vector<std::uint64_t>(ell + 1, 0));
    for (unsigned n = 0; n <= t; ++n) tab[n][0] = 1;
    for (unsigned n = 1; n <= t; ++n)
        for (unsigned k = 1; k <= std::min(n, ell); ++k) {
            __uint128_t val = tab[n - 1][k - 1];
            __uint128_t pk = 1;
            for (unsigned i = 0; i < k; ++i) pk *= p;
            val += pk * tab[n - 1][k];
            tab[n][k] = val > cap ? cap + 1 : std::uint64_t(val);
        }
    return tab[t][ell];
}

/// Calls fn(basis rows as field elements) for every dimension-ell subspace,
/// enumerated by reduced row-echelon form: pivot columns ascending, free
/// entries in mixed-radix order over the subfield elements. Stops when fn
/// returns true.
void enumerate_subspaces(const FieldTower& F, Subfield base, unsigned ell,
                         const std::function<bool(const std::vector<elem_idx>&)>& fn) {
    const unsigned t = F.relative_degree(base);
    const auto& sub = F.subfield_elements(base);
    const auto& ref = F.reference_basis(base);

    std::vector<unsigned> pivots(ell);
    for (unsigned i = 0; i < ell; ++i) pivots[i] = i;
    while (true) {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        std::vector<std::pair<unsigned, unsigned>> free_pos;
        for (unsigned i = 0; i < ell; ++i)
            for (unsigned c = pivots[i] + 1; c < t; ++c)
                if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
                    free_pos.emplace_back(i, c);

        std::vector<std::size_t> digit(free_pos.size(), 0);
        while (true) {
            std::vector<elem_idx> rows(ell, 0);
            for (unsigned i = 0; i < ell; ++i) rows[i] = ref[pivots[i]].index();
            for (std::size_t fi = 0; fi < free_pos.size(); ++fi) {
                auto [ri, c] = free_pos[fi];
                rows[ri] = F.add(rows[ri], F.mul(sub[digit[fi]], ref[c].index()));
            }
            if (fn(rows)) return;
            std::size_t i = 0;
            while (i < digit.size() && digit[i] == sub.size() - 1) digit[i++] = 0;
            if (i == digit.size()) break;
            ++digit[i];
        }

        // next pivot combination in lexicographic order
        long i = long(ell) - 1;
        while (i >= 0 && pivots[std::size_t(i)] == t - ell + unsigned(i)) --i;
        if (i < 0) break;
        ++pivots[std::size_t(i)];
        for (unsigned j = unsigned(i) + 1; j < ell; ++j) pivots[j] = pivots[j - 1] + 1;
    }
}

}  // namespace

RepairScheme degree_descent_scheme(const GoodPolynomial& good, const SubspaceChoice& V,
                                   const std::vector<FieldElement>& eta, unsigned k,
                                   unsigned host_node, std::optional<unsigned> d_opt) {
    const FieldTower& F = *good.field;
    if (V.base != good.p_base) throw Error("subspace base does not match the good polynomial");
    const unsigned ell = V.ell();
    const unsigned t = F.relative_degree(good.p_base);
    if (ell >= t) throw Error("need ell < t");
    const unsigned r = good.layout.racks;
    const unsigned d = d_opt.value_or(r - 1);

    const Poly L = linearized_from_subspace(V);
    const Poly Z = vanishing_poly(good.layout.flatten());
    const FieldElement c0 = L.coeff(1);  // prod of -b over nonzero b in V
    if (c0.is_zero()) throw Error("degenerate linearized polynomial");
    const FieldElement scale = c0.inv();

    // L(g eta_a) expanded along the p-power support of L, divided exactly by
    // g, then reduced; dividing first keeps the prescribed host values.
    const std::uint64_t p = ipow(F.characteristic(), good.p_base.degree);
    std::vector<Poly> h;
    h.reserve(eta.size());
    for (const auto& e : eta) {
        Poly lifted = Poly::zero(&F);
        Poly power = Poly::constant(e) * good.g;  // (eta g)^(p^i), by iterated Frobenius
        std::uint64_t exp = 1;
        for (unsigned i = 0; i <= ell; ++i) {
            const auto ci = L.coeff(std::size_t(exp));
            if (!ci.is_zero()) lifted = lifted + Poly::constant(ci) * power;
            if (i < ell) {
                for (unsigned f = 0; f < good.p_base.degree; ++f) power = power.frobenius_pow();
                exp *= p;
            }
        }
        Poly raw = exact_div(lifted, good.g);
        h.push_back(scale * reduce_mod_vanishing(raw, Z));
    }

    auto basis = dual_basis(good.p_base, eta);
    auto scheme = RepairScheme::make(good.field, good.layout, k,
                                     {good.host_rack, host_node}, d, std::move(basis),
                                     std::move(h));
    scheme.family = "degree-descent";
    scheme.ell = ell;
    scheme.subspace_basis = V.basis_vectors;
    scheme.validation = validate_scheme(scheme);
    if (!scheme.validation.degree_ok)
        throw SubspaceSearchError(scheme.validation.max_degree, scheme.degree_bound(), 1);
    if (!scheme.validation.ok())
        throw Error("degree-descent construction failed validation: " +
                    scheme.validation.failures.front());
    return scheme;
}

RepairScheme degree_descent_scheme(const GoodPolynomial& good, unsigned ell,
                                   const std::vector<FieldElement>& eta, unsigned k,
                                   unsigned host_node, const SubspaceSearchConfig& config,
                                   std::optional<unsigned> d_opt) {
    const FieldTower& F = *good.field;
    const unsigned t = F.relative_degree(good.p_base);
    if (ell == 0 || ell >= t) throw Error("need 1 <= ell < t");
    const unsigned r = good.layout.racks;
    const unsigned u = good.layout.nodes_per_rack;
    const unsigned d = d_opt.value_or(r - 1);
    const long bound = long(u) * (long(d) + 1) - long(k) - 1;

    // canonical attempt: the subfield F_{p^ell} itself
    if (config.policy != SubspacePolicy::SearchOnly && t % ell == 0) {
        try {
            return degree_descent_scheme(good, subfield_subspace(F, good.p_base, ell), eta, k,
                                         host_node, d_opt);
        } catch (const SubspaceSearchError&) {
            if (config.policy == SubspacePolicy::SubfieldOnly) throw;
        }
    }
    if (config.policy == SubspacePolicy::SubfieldOnly)
        throw Error("subfield policy needs ell | t");

    DescentTables tables(good, ell);
    const std::uint64_t p = tables.p;
    std::vector<std::vector<elem_idx>> eta_pows;
    for (const auto& e : eta) {
        std::vector<elem_idx> pw(ell + 1);
        std::uint64_t exp = 1;
        for (unsigned i = 0; i <= ell; ++i) {
            pw[i] = F.pw(e.index(), exp);
            exp *= p;
        }
        eta_pows.push_back(std::move(pw));
    }

    long best_degree = -1;
    std::size_t tried = 0;
    std::vector<elem_idx> found;
    auto consider = [&](const std::vector<elem_idx>& basis_rows) {
        ++tried;
        const auto members = members_from_basis(F, good.p_base, basis_rows);
        const auto c = linearized_coeffs(F, p, members, ell);
        const long deg = combined_max_degree(tables, c, eta_pows);
        if (best_degree < 0 || deg < best_degree) best_degree = deg;
        if (deg <= bound) {
            found = basis_rows;
            return true;
        }
        return false;
    };

    const std::uint64_t count = gaussian_binomial(t, ell, p, config.exhaustive_limit);
    if (count <= config.exhaustive_limit) {
        enumerate_subspaces(F, good.p_base, ell, consider);
    } else {
        std::mt19937_64 rng(config.seed);
        const auto& sub = F.subfield_elements(good.p_base);
        const auto& ref = F.reference_basis(good.p_base);
        std::set<std::vector<elem_idx>> visited;
        for (std::size_t it = 0; it < config.random_samples && found.empty(); ++it) {
            std::vector<elem_idx> rows(ell, 0);
            for (auto& row : rows)
                for (unsigned cidx = 0; cidx < t; ++cidx)
                    row = F.add(row, F.mul(sub[rng() % sub.size()], ref[cidx].index()));
            std::vector<std::vector<FieldElement>> probe;
            for (elem_idx row : rows) probe.push_back({FieldElement(&F, row)});
            auto span = span_dim_over(probe, good.p_base);
            if (span.dim != ell) continue;
            // full reduction gives a canonical form per subspace for dedup
            auto rref = span.echelon;
            for (std::size_t r2 = rref.size(); r2-- > 0;)
                for (std::size_t r1 = 0; r1 < r2; ++r1) {
                    const elem_idx f = rref[r1][span.pivots[r2]];
                    if (!f) continue;
                    for (std::size_t c2 = 0; c2 < rref[r1].size(); ++c2)
                        rref[r1][c2] = F.sub(rref[r1][c2], F.mul(f, rref[r2][c2]));
                }
            std::vector<elem_idx> canon;
            for (const auto& row : rref) canon.insert(canon.end(), row.begin(), row.end());
            if (!visited.insert(canon).second) continue;
            consider(rows);
        }
    }

    if (found.empty()) throw SubspaceSearchError(best_degree, bound, tried);

    SubspaceChoice V{good.p_base, {}, &F};
    for (elem_idx b : found) V.basis_vectors.emplace_back(&F, b);
    try {
        return degree_descent_scheme(good, V, eta, k, host_node, d_opt);
    } catch (const SubspaceSearchError&) {
        throw Error("search and constructor disagree on the accepted subspace");
    }
}

// ---------------------------------------------------------------------------
// standard-model constructors
// ---------------------------------------------------------------------------

RepairScheme gw_scheme(std::shared_ptr<const FieldTower> field, Subfield p_base, unsigned k,
                       unsigned failed_index, std::optional<std::vector<FieldElement>> eta_opt) {
    const FieldTower& F = *field;
    const std::uint64_t q = F.size();
    const std::uint64_t p = ipow(F.characteristic(), p_base.degree);
    if (k < 1 || std::uint64_t(k) > q - q / p)
        throw Error("full-length scheme needs k <= q(1 - 1/p)");
    if (failed_index >= q) throw Error("failed index out of range");
    const unsigned t = F.relative_degree(p_base);

    std::vector<std::vector<FieldElement>> grid;
    grid.reserve(q);
    for (elem_idx v = 0; v < q; ++v) grid.push_back({F.element(v)});
    const FieldElement alpha_j = F.element(elem_idx(failed_index));

    std::vector<FieldElement> eta = eta_opt.value_or(F.reference_basis(p_base));
    const Poly lin = Poly::x(field.get()) - Poly::constant(alpha_j);
    std::vector<Poly> h;
    h.reserve(t);
    for (unsigned a = 0; a < t; ++a) {
        // Tr(eta_a (x - a_j)) / (x - a_j) = sum_i eta_a^(p^i) (x - a_j)^(p^i - 1)
        Poly acc = Poly::zero(field.get());
        Poly power = lin;  // (x - a_j)^(p^i)
        std::uint64_t exp = 1;
        for (unsigned i = 0; i < t; ++i) {
            acc = acc + Poly::constant(eta[a].pow(exp)) * exact_div(power, lin);
            if (i + 1 < t) {
                for (unsigned f = 0; f < p_base.degree; ++f) power = power.frobenius_pow();
                exp *= p;
            }
        }
        h.push_back(acc);
    }

    auto scheme = RepairScheme::make(std::move(field), RackLayout::make(std::move(grid)), k,
                                     {failed_index, 0}, unsigned(q - 1),
                                     dual_basis(p_base, eta), std::move(h));
    scheme.family = "gw";
    scheme.validation = validate_scheme(scheme);
    if (!scheme.validation.ok())
        throw Error("full-length construction failed validation");
    return scheme;
}

RepairScheme two_coset_scheme(unsigned s_half, unsigned n, unsigned k, unsigned failed_index) {
    if (s_half < 1) throw Error("need s >= 1");
    auto field = make_field(2, 2 * s_half);
    const FieldTower& F = *field;
    const Subfield p_base = F.subfield(s_half);
    const std::uint64_t half_units = ipow(2, s_half) - 1;
    if (n % 2 != 0) throw Error("two-coset scheme needs even n");
    if (n < 4 || n > 2 * half_units) throw Error("need 4 <= n <= 2(2^s - 1)");
    if (k < 1 || k > n - 2) throw Error("need 1 <= k <= n - 2");
    if (failed_index >= n) throw Error("failed index out of range");

    const FieldElement beta = F.primitive_element();
    const FieldElement sub_gen = beta.pow((F.size() - 1) / half_units);
    std::vector<std::vector<FieldElement>> grid;
    grid.reserve(n);
    for (unsigned i = 0; i < n / 2; ++i) grid.push_back({sub_gen.pow(i)});
    for (unsigned i = 0; i < n / 2; ++i) grid.push_back({beta * sub_gen.pow(i)});
    const bool failed_in_subfield = failed_index < n / 2;
    const FieldElement alpha_j = grid[failed_index][0];

    const Poly h1 = Poly::one(field.get());
    const Poly h2 = failed_in_subfield ? Poly::monomial(beta.inv(), 1)
                                       : Poly::monomial(F.one(), 1);
    std::vector<FieldElement> eta = {h1.eval(alpha_j), h2.eval(alpha_j)};

    auto scheme = RepairScheme::make(std::move(field), RackLayout::make(std::move(grid)), k,
                                     {failed_index, 0}, n - 1, dual_basis(p_base, eta), {h1, h2});
    scheme.family = "two-coset";
    scheme.validation = validate_scheme(scheme);
    if (!scheme.validation.ok())
        throw Error("two-coset construction failed validation");
    return scheme;
}

// ---------------------------------------------------------------------------
// family parameter validation and dispatch
// ---------------------------------------------------------------------------

std::string family_name(Family f) {
    switch (f) {
        case Family::additive: return "additive";
        case Family::multiplicative: return "multiplicative";
        case Family::combined: return "combined";
        case Family::gw: return "gw";
        case Family::two_coset: return "two-coset";
    }
    throw Error("unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "additive") return Family::additive;
    if (name == "multiplicative") return Family::multiplicative;
    if (name == "combined") return Family::combined;
    if (name == "gw") return Family::gw;
    if (name == "two-coset" || name == "two_coset") return Family::two_coset;
    throw Error("unknown family: " + name);
}

FamilyCheck validate_family_params(const FamilyParams& prm) {
    FamilyCheck out;
    auto fail = [&](const std::string& msg) { out.violations.push_back(msg); };

    if (prm.p0 < 2) fail("p0 must be a prime");
    if (prm.s_base < 1) fail("s_base must be >= 1");
    if (!out.violations.empty()) return out;

    const std::uint64_t p = ipow(prm.p0, prm.s_base);
    const unsigned t = prm.t;
    std::uint64_t q = 0;
    if (prm.family != Family::two_coset) {
        if (t < 1) {
            fail("t must be >= 1");
            return out;
        }
        q = ipow(p, t);
    }

    switch (prm.family) {
        case Family::additive: {
            if (t <= 2) fail("additive family needs t > 2");
            if (t % 2 != 0) fail("t not even");
            if (prm.ell < 1 || prm.ell >= long(t)) fail("need 1 <= ell < t");
            const std::uint64_t u = ipow(p, t >= 2 ? t - 2 : 0);
            const std::uint64_t r = p * p;
            const std::uint64_t kmax = q - q / p + u - 1;  // p^t - p^(t-1) + p^(t-2) - 1
            if (prm.k < 1 || prm.k > kmax)
                fail("k out of range: need 1 <= k <= " + std::to_string(kmax));
            const unsigned m = unsigned(prm.k / u);
            if (prm.ell >= 1 && prm.ell < long(t)) {
                const unsigned tl = t - unsigned(prm.ell);
                if (t % tl != 0)
                    fail("(t - ell) does not divide t");
                else if (r - m != t / tl)
                    fail("p^2 - m = " + std::to_string(r - m) + " but t/(t-ell) = " +
                         std::to_string(t / tl));
            }
            out.derived = {q, unsigned(q), unsigned(r), unsigned(u), m, unsigned(r - 1)};
            break;
        }
        case Family::multiplicative: {
            if (prm.a == 0 || prm.a >= t || t % prm.a != 0) fail("need a | t with a < t");
            if (prm.ell < 1 || prm.ell >= long(t)) fail("need 1 <= ell < t");
            if (prm.a + unsigned(std::max(prm.ell, 0l)) <= t) fail("need a + ell > t");
            const std::uint64_t r = prm.a < 64 ? ipow(p, prm.a) - 1 : 0;
            if (r < 2) {
                fail("need at least two racks");
                break;
            }
            const std::uint64_t n = q - 1;
            const std::uint64_t u = n / r;
            // k <= (p^t - p^ell) (p^t - 1) / (p^t - p^(t-a)) - 1
            const std::uint64_t kmax =
                (q - ipow(p, unsigned(std::max(prm.ell, 0l)))) * (q - 1) /
                    (q - ipow(p, t - prm.a)) - 1;
            if (prm.k < 1 || prm.k > kmax)
                fail("k out of range: need 1 <= k <= " + std::to_string(kmax));
            const unsigned m = unsigned((std::uint64_t(prm.k) * r) / n);
            if (prm.ell >= 1 && prm.ell < long(t)) {
                const unsigned tl = t - unsigned(prm.ell);
                if (t % tl != 0)
                    fail("(t - ell) does not divide t");
                else if (r - m != t / tl)
                    fail("p^a - 1 - m = " + std::to_string(r - m) + " but t/(t-ell) = " +
                         std::to_string(t / tl));
            }
            out.derived = {q, unsigned(n), unsigned(r), unsigned(u), m, unsigned(r - 1)};
            break;
        }
        case Family::combined: {
            if (prm.a == 0 || t % prm.a != 0) fail("need a | t");
            else if ((t / prm.a) % p != 0) fail("need p | t/a");
            if (prm.v < 1 || prm.v >= p) fail("need 1 <= v < p");
            else if (prm.a > 0 && (ipow(p, prm.a) - 1) % prm.v != 0) fail("need v | p^a - 1");
            if (prm.ell < 1 || prm.ell >= long(t)) fail("need 1 <= ell < t");
            if (!out.violations.empty()) break;
            const std::uint64_t w = ipow(p, t - prm.a);
            const std::uint64_t n = q - w;
            const std::uint64_t u = std::uint64_t(prm.v) * w;
            const std::uint64_t r = n / u;
            if (r < 2) {
                fail("need at least two racks");
                break;
            }
            const std::uint64_t kmax = q - std::uint64_t(prm.v) * (q / p) - 1;
            if (prm.k < 1 || prm.k > kmax)
                fail("k out of range: need 1 <= k <= " + std::to_string(kmax));
            const unsigned m = unsigned(prm.k / u);
            const unsigned tl = t - unsigned(prm.ell);
            if (t % tl != 0)
                fail("(t - ell) does not divide t");
            else if (r - m != t / tl)
                fail("r - m = " + std::to_string(r - m) + " but t/(t-ell) = " +
                     std::to_string(t / tl));
            out.derived = {q, unsigned(n), unsigned(r), unsigned(u), m, unsigned(r - 1)};
            break;
        }
        case Family::gw: {
            const std::uint64_t kmax = q - q / p;
            if (prm.k < 1 || prm.k > kmax)
                fail("k out of range: need 1 <= k <= q(1 - 1/p) = " + std::to_string(kmax));
            out.derived = {q, unsigned(q), unsigned(q), 1, prm.k, unsigned(q - 1)};
            break;
        }
        case Family::two_coset: {
            if (prm.p0 != 2) fail("two-coset scheme lives in characteristic 2");
            const std::uint64_t half_units = ipow(2, prm.s_base) - 1;
            if (prm.n % 2 != 0) fail("n not even");
            if (prm.n < 4 || prm.n > 2 * half_units)
                fail("need 4 <= n <= 2(2^s - 1) = " + std::to_string(2 * half_units));
            if (prm.k < 1 || prm.k + 2 > prm.n) fail("need 1 <= k <= n - 2");
            q = ipow(2, 2 * prm.s_base);
            out.derived = {q, prm.n, prm.n, 1, prm.k, prm.n - 1};
            break;
        }
    }
    if (prm.family != Family::two_coset && prm.family != Family::gw) {
        if (out.derived.r > 0 && prm.host_rack >= out.derived.r) fail("host rack out of range");
        if (out.derived.u > 0 && prm.host_node >= out.derived.u) fail("host node out of range");
    } else if (out.derived.n > 0 && prm.host_node >= out.derived.n) {
        fail("host node out of range");
    }
    out.ok = out.violations.empty();
    return out;
}

RepairScheme build_family_scheme(const FamilyParams& prm, const SubspaceSearchConfig& config,
                                 const std::vector<std::string>* explicit_basis) {
    auto check = validate_family_params(prm);
    if (!check.ok) throw HypothesisError(check.violations);

    switch (prm.family) {
        case Family::gw: {
            auto field = make_field(prm.p0, prm.s_base * prm.t);
            auto scheme = gw_scheme(field, field->subfield(prm.s_base), prm.k, prm.host_node);
            return scheme;
        }
        case Family::two_coset:
            return two_coset_scheme(prm.s_base, prm.n, prm.k, prm.host_node);
        case Family::additive:
        case Family::multiplicative:
        case Family::combined: {
            auto field = make_field(prm.p0, prm.s_base * prm.t);
            const Subfield p_base = field->subfield(prm.s_base);
            GoodPolynomial good =
                prm.family == Family::additive
                    ? additive_good_poly(field, p_base, prm.host_rack)
                    : prm.family == Family::multiplicative
                          ? multiplicative_good_poly(field, p_base, prm.a, prm.host_rack)
                          : combined_good_poly(field, p_base, prm.a, prm.v, prm.host_rack);
            RepairScheme scheme = [&] {
                if (explicit_basis) {
                    SubspaceChoice V{p_base, {}, field.get()};
                    for (const auto& s : *explicit_basis)
                        V.basis_vectors.push_back(parse_element(*field, s));
                    return degree_descent_scheme(good, V, field->reference_basis(p_base), prm.k,
                                                 prm.host_node);
                }
                return degree_descent_scheme(good, unsigned(prm.ell),
                                             field->reference_basis(p_base), prm.k,
                                             prm.host_node, config);
            }();
            scheme.family = family_name(prm.family);
            return scheme;
        }
    }
    throw Error("unknown family");
}

}  // namespace rackrs
