#include "rackrs/field.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace rackrs {

namespace {

constexpr std::uint64_t kMaxFieldSize = 1u << 20;

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; std::uint64_t(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---- polynomial arithmetic over the prime field F_{p0}, used only for
// ---- modulus validation and the default-modulus search.
using PrimePoly = std::vector<unsigned>;  // low degree first, residues mod p0

void pp_trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

unsigned pp_inv_mod(unsigned a, unsigned p) {
    // Fermat; p prime, a != 0
    unsigned r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = (std::uint64_t(r) * b) % p;
        b = (std::uint64_t(b) * b) % p;
        e >>= 1;
    }
    return r;
}

PrimePoly pp_mul(const PrimePoly& a, const PrimePoly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    pp_trim(r);
    return r;
}

PrimePoly pp_mod(PrimePoly a, const PrimePoly& m, unsigned p) {
    const unsigned lead_inv = pp_inv_mod(m.back(), p);
    while (a.size() >= m.size() && !a.empty()) {
        unsigned c = a.back();
        if (c) {
            unsigned f = (std::uint64_t(c) * lead_inv) % p;
            std::size_t off = a.size() - m.size();
            for (std::size_t i = 0; i < m.size(); ++i)
                a[off + i] = (a[off + i] + std::uint64_t(p - 1) * f % p * m[i]) % p;
        }
        a.pop_back();
        pp_trim(a);
    }
    return a;
}

PrimePoly pp_sub(PrimePoly a, const PrimePoly& b, unsigned p) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    pp_trim(a);
    return a;
}

PrimePoly pp_gcd(PrimePoly a, PrimePoly b, unsigned p) {
    while (!b.empty()) {
        PrimePoly r = pp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

PrimePoly pp_powmod(PrimePoly base, std::uint64_t e, const PrimePoly& m, unsigned p) {
    PrimePoly r = {1};
    base = pp_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = pp_mod(pp_mul(r, base, p), m, p);
        base = pp_mod(pp_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

/// Irreducibility of a monic degree-T polynomial over F_{p0}:
/// x^(p0^T) = x mod f, and gcd(f, x^(p0^d) - x) = 1 for every proper d | T.
bool pp_irreducible(const PrimePoly& f, unsigned p0) {
    const std::size_t T = f.size() - 1;
    if (T == 0) return false;
    if (T == 1) return true;
    PrimePoly x = {0, 1};
    PrimePoly r = pp_mod(x, f, p0);
    std::vector<PrimePoly> frob_chain(T + 1);
    frob_chain[0] = r;
    for (std::size_t i = 1; i <= T; ++i) {
        r = pp_powmod(r, p0, f, p0);
        frob_chain[i] = r;
    }
    if (frob_chain[T] != pp_mod(x, f, p0)) return false;
    for (std::size_t d = 1; d < T; ++d) {
        if (T % d != 0) continue;
        PrimePoly g = pp_gcd(f, pp_sub(frob_chain[d], pp_mod(x, f, p0), p0), p0);
        if (g.size() > 1) return false;
    }
    return true;
}

std::vector<unsigned> default_modulus(unsigned p0, unsigned T) {
    // scan monic coefficient strings by ascending base-p0 integer encoding
    std::vector<unsigned> c(T + 1, 0);
    c[T] = 1;
    while (true) {
        if (pp_irreducible(c, p0)) return c;
        std::size_t i = 0;
        while (i < T && c[i] == p0 - 1) c[i++] = 0;
        if (i == T) throw Error("no irreducible modulus found");  // unreachable
        ++c[i];
    }
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldTower
// ---------------------------------------------------------------------------

std::shared_ptr<const FieldTower> FieldTower::make(unsigned p0, unsigned ext_degree,
                                                   std::optional<std::vector<unsigned>> modulus) {
    if (!is_prime(p0)) throw Error("field characteristic must be prime, got " + std::to_string(p0));
    if (ext_degree < 1) throw Error("extension degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < ext_degree; ++i) {
        q *= p0;
        if (q > kMaxFieldSize) throw Error("field too large (q > 2^20)");
    }
    std::vector<unsigned> mod;
    if (modulus) {
        mod = *modulus;
        if (mod.size() != ext_degree + 1) throw Error("modulus must have degree T");
        for (unsigned c : mod)
            if (c >= p0) throw Error("modulus coefficients must be residues mod p0");
        if (mod.back() != 1) throw Error("modulus must be monic");
        if (!pp_irreducible(mod, p0)) throw Error("reducible modulus");
    } else {
        mod = default_modulus(p0, ext_degree);
    }
    return std::shared_ptr<const FieldTower>(new FieldTower(p0, ext_degree, std::move(mod)));
}

std::shared_ptr<const FieldTower> make_field(unsigned p0, unsigned ext_degree,
                                             std::optional<std::vector<unsigned>> modulus) {
    return FieldTower::make(p0, ext_degree, std::move(modulus));
}

FieldTower::FieldTower(unsigned p0, unsigned T, std::vector<unsigned> modulus)
    : p0_(p0), T_(T), modulus_(std::move(modulus)) {
    q_ = 1;
    for (unsigned i = 0; i < T_; ++i) q_ *= p0_;
    xor_add_ = (p0_ == 2);

    auto decode = [&](elem_idx v, unsigned* d) {
        for (unsigned i = 0; i < T_; ++i) {
            d[i] = v % p0_;
            v /= p0_;
        }
    };
    auto encode = [&](const unsigned* d) {
        elem_idx v = 0;
        for (unsigned i = T_; i-- > 0;) v = v * p0_ + d[i];
        return v;
    };

    // canonical root of the modulus: the residue class of x
    if (T_ >= 2) {
        gen_ = p0_;  // digits (0,1,0,...)
    } else {
        gen_ = (p0_ - modulus_[0]) % p0_;  // x = -c0 mod (x + c0)
    }
    one_ = 1;

    neg_.resize(q_);
    std::vector<unsigned> da(T_), db(T_);
    for (std::uint64_t a = 0; a < q_; ++a) {
        decode(elem_idx(a), da.data());
        for (unsigned i = 0; i < T_; ++i) da[i] = (p0_ - da[i]) % p0_;
        neg_[a] = encode(da.data());
    }

    if (!xor_add_ && q_ <= 1024) {
        add_tab_.resize(q_ * q_);
        for (std::uint64_t a = 0; a < q_; ++a) {
            decode(elem_idx(a), da.data());
            for (std::uint64_t b = 0; b < q_; ++b) {
                decode(elem_idx(b), db.data());
                unsigned dc[64];
                for (unsigned i = 0; i < T_; ++i) dc[i] = (da[i] + db[i]) % p0_;
                add_tab_[a * q_ + b] = encode(dc);
            }
        }
    }

    // schoolbook multiply with modulus reduction, for bootstrapping the tables
    auto mul_slow = [&](elem_idx a, elem_idx b) -> elem_idx {
        decode(a, da.data());
        decode(b, db.data());
        std::vector<unsigned> prod(2 * T_ - 1, 0);
        for (unsigned i = 0; i < T_; ++i) {
            if (!da[i]) continue;
            for (unsigned j = 0; j < T_; ++j)
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p0_;
        }
        for (unsigned i = 2 * T_ - 1; i-- > T_;) {
            unsigned c = prod[i];
            if (!c) continue;
            prod[i] = 0;
            for (unsigned j = 0; j < T_; ++j)
                prod[i - T_ + j] = (prod[i - T_ + j] + (p0_ - 1) * c % p0_ * modulus_[j]) % p0_;
        }
        unsigned dc[64];
        for (unsigned i = 0; i < T_; ++i) dc[i] = prod[i];
        return encode(dc);
    };
    auto pow_slow = [&](elem_idx a, std::uint64_t e) {
        elem_idx r = one_, b = a;
        while (e) {
            if (e & 1) r = mul_slow(r, b);
            b = mul_slow(b, b);
            e >>= 1;
        }
        return r;
    };

    const std::uint64_t group = q_ - 1;
    const auto factors = prime_factors(group);
    prim_ = one_;
    for (std::uint64_t cand = 1; cand < q_; ++cand) {
        bool primitive = true;
        for (auto f : factors)
            if (pow_slow(elem_idx(cand), group / f) == one_) {
                primitive = false;
                break;
            }
        if (primitive) {
            prim_ = elem_idx(cand);
            break;
        }
    }

    exp_.assign(2 * group, 0);
    log_.assign(q_, 0xFFFFFFFFu);
    elem_idx cur = one_;
    for (std::uint64_t i = 0; i < group; ++i) {
        exp_[i] = cur;
        exp_[i + group] = cur;
        log_[cur] = std::uint32_t(i);
        cur = mul_slow(cur, prim_);
    }

    frob_.resize(q_);
    frob_[0] = 0;
    for (std::uint64_t a = 1; a < q_; ++a)
        frob_[a] = exp_[(std::uint64_t(log_[a]) * p0_) % group];

    // subfield lattice
    for (unsigned s = 1; s <= T_; ++s) {
        if (T_ % s != 0) continue;
        SubData sd;
        sd.s = s;
        const unsigned t = T_ / s;
        sd.trace_tab.resize(q_);
        for (std::uint64_t a = 0; a < q_; ++a) {
            elem_idx acc = elem_idx(a), x = elem_idx(a);
            for (unsigned i = 1; i < t; ++i) {
                for (unsigned j = 0; j < s; ++j) x = frob_[x];
                acc = add(acc, x);
            }
            sd.trace_tab[a] = acc;
        }
        for (std::uint64_t a = 0; a < q_; ++a) {
            elem_idx x = elem_idx(a);
            for (unsigned j = 0; j < s; ++j) x = frob_[x];
            if (x == elem_idx(a)) sd.elems.push_back(elem_idx(a));
        }
        sd.ref_basis.reserve(t);
        elem_idx b = one_;
        for (unsigned i = 0; i < t; ++i) {
            sd.ref_basis.emplace_back(this, b);
            b = mul(b, gen_);
        }
        subs_.emplace(s, std::move(sd));
    }
    // trace-dual of each reference basis (needs mul/inv tables, hence second pass)
    for (auto& [s, sd] : subs_) {
        TraceBasis tb = dual_basis(Subfield{s}, sd.ref_basis);
        sd.ref_dual = std::move(tb.theta);
    }
}

elem_idx FieldTower::inv(elem_idx a) const {
    if (a == 0) throw Error("inversion of zero");
    const std::uint64_t group = q_ - 1;
    return exp_[(group - log_[a]) % group];
}

elem_idx FieldTower::pw(elem_idx a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? one_ : 0;
    const std::uint64_t group = q_ - 1;
    return exp_[(std::uint64_t(log_[a]) * (e % group)) % group];
}

elem_idx FieldTower::add_slow(elem_idx a, elem_idx b) const {
    elem_idx v = 0, m = 1;
    for (unsigned i = 0; i < T_; ++i) {
        v += m * ((a % p0_ + b % p0_) % p0_);
        a /= p0_;
        b /= p0_;
        m *= p0_;
    }
    return v;
}

std::uint64_t FieldTower::order_of(const FieldElement& x) const {
    if (x.is_zero()) return 0;
    return (q_ - 1) / std::gcd<std::uint64_t>(log_[x.index()], q_ - 1);
}

FieldElement FieldTower::element(elem_idx v) const {
    if (v >= q_) throw Error("element index out of range");
    return {this, v};
}

FieldElement FieldTower::from_coeffs(std::span<const unsigned> coeffs) const {
    if (coeffs.size() > T_) throw Error("too many coefficients for this field");
    elem_idx v = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] >= p0_) throw Error("coefficient not a residue mod p0");
        v = v * p0_ + coeffs[i];
    }
    return {this, v};
}

std::vector<unsigned> FieldTower::subfield_degrees() const {
    std::vector<unsigned> out;
    for (const auto& [s, sd] : subs_) out.push_back(s);
    return out;
}

Subfield FieldTower::subfield(unsigned s) const {
    if (s == 0 || T_ % s != 0)
        throw Error("subfield degree " + std::to_string(s) + " does not divide " + std::to_string(T_));
    return Subfield{s};
}

const FieldTower::SubData& FieldTower::sub_(Subfield base) const {
    auto it = subs_.find(base.degree);
    if (it == subs_.end())
        throw Error("subfield degree " + std::to_string(base.degree) + " does not divide " +
                    std::to_string(T_));
    return it->second;
}

bool FieldTower::in_subfield(const FieldElement& x, Subfield base) const {
    sub_(base);
    elem_idx v = x.index();
    for (unsigned j = 0; j < base.degree; ++j) v = frob_[v];
    return v == x.index();
}

const std::vector<elem_idx>& FieldTower::subfield_elements(Subfield base) const {
    return sub_(base).elems;
}

FieldElement FieldTower::trace_to(const FieldElement& x, Subfield base) const {
    return {this, sub_(base).trace_tab[x.index()]};
}

const std::vector<FieldElement>& FieldTower::reference_basis(Subfield base) const {
    return sub_(base).ref_basis;
}

std::vector<FieldElement> FieldTower::coords(const FieldElement& x, Subfield base) const {
    const SubData& sd = sub_(base);
    std::vector<FieldElement> out;
    out.reserve(sd.ref_dual.size());
    for (const auto& d : sd.ref_dual)
        out.emplace_back(this, sd.trace_tab[mul(x.index(), d.index())]);
    return out;
}

std::string FieldTower::description() const {
    std::ostringstream os;
    os << p0_ << '^' << T_ << "/modulus=";
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
        if (i) os << ',';
        os << modulus_[i];
    }
    return os.str();
}

std::shared_ptr<const FieldTower> parse_field(const std::string& description) {
    auto slash = description.find('/');
    auto caret = description.find('^');
    if (slash == std::string::npos || caret == std::string::npos || caret > slash ||
        description.compare(slash + 1, 8, "modulus=") != 0)
        throw Error("bad field description: " + description);
    unsigned p0 = unsigned(std::strtoul(description.substr(0, caret).c_str(), nullptr, 10));
    unsigned T = unsigned(std::strtoul(description.substr(caret + 1, slash - caret - 1).c_str(),
                                       nullptr, 10));
    std::vector<unsigned> mod;
    std::istringstream is(description.substr(slash + 9));
    std::string tok;
    while (std::getline(is, tok, ','))
        mod.push_back(unsigned(std::strtoul(tok.c_str(), nullptr, 10)));
    return make_field(p0, T, mod);
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

namespace {
const FieldTower& same_tower(const FieldElement& a, const FieldElement& b) {
    if (&a.tower() != &b.tower()) throw Error("elements from different fields");
    return a.tower();
}
}  // namespace

const FieldTower& FieldElement::tower() const {
    if (!tower_) throw Error("operation on default-constructed field element");
    return *tower_;
}

std::vector<unsigned> FieldElement::coeffs() const {
    const auto& F = tower();
    std::vector<unsigned> out(F.ext_degree());
    elem_idx v = v_;
    for (auto& c : out) {
        c = v % F.characteristic();
        v /= F.characteristic();
    }
    return out;
}

std::string FieldElement::str() const {
    const auto cs = coeffs();
    std::ostringstream os;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) os << ',';
        os << cs[i];
    }
    return os.str();
}

FieldElement FieldElement::operator-() const { return {tower_, tower().neg(v_)}; }
FieldElement FieldElement::inv() const { return {tower_, tower().inv(v_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {tower_, tower().pw(v_, e)}; }

FieldElement FieldElement::frobenius(unsigned times) const {
    elem_idx v = v_;
    for (unsigned i = 0; i < times; ++i) v = tower().frob(v);
    return {tower_, v};
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return {&same_tower(a, b), a.tower().add(a.index(), b.index())};
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return {&same_tower(a, b), a.tower().sub(a.index(), b.index())};
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return {&same_tower(a, b), a.tower().mul(a.index(), b.index())};
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return {&same_tower(a, b), a.tower().mul(a.index(), b.tower().inv(b.index()))};
}

// ---------------------------------------------------------------------------
// dual bases, trace reconstruction, spans
// ---------------------------------------------------------------------------

namespace {

/// Gauss-Jordan inverse over a subfield; entries must lie in the subfield.
std::vector<std::vector<elem_idx>> invert_matrix(const FieldTower& F,
                                                 std::vector<std::vector<elem_idx>> m) {
    const std::size_t n = m.size();
    std::vector<std::vector<elem_idx>> inv(n, std::vector<elem_idx>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw Error("singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        elem_idx d = F.inv(m[col][col]);
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] = F.mul(m[col][j], d);
            inv[col][j] = F.mul(inv[col][j], d);
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            elem_idx f = m[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[row][j] = F.sub(m[row][j], F.mul(f, m[col][j]));
                inv[row][j] = F.sub(inv[row][j], F.mul(f, inv[col][j]));
            }
        }
    }
    return inv;
}

}  // namespace

TraceBasis dual_basis(Subfield base, const std::vector<FieldElement>& eta) {
    if (eta.empty()) throw Error("empty basis");
    const FieldTower& F = eta.front().tower();
    const unsigned t = F.relative_degree(base);
    if (eta.size() != t)
        throw Error("basis must have length " + std::to_string(t) + ", got " +
                    std::to_string(eta.size()));
    for (const auto& e : eta) same_tower(eta.front(), e);

    // the trace form is nondegenerate, so the Gram matrix is singular exactly
    // when eta is rank deficient over the subfield
    std::vector<std::vector<elem_idx>> gram(t, std::vector<elem_idx>(t));
    for (unsigned i = 0; i < t; ++i)
        for (unsigned j = 0; j < t; ++j)
            gram[i][j] = F.trace_raw(base, F.mul(eta[i].index(), eta[j].index()));
    std::vector<std::vector<elem_idx>> gram_inv;
    try {
        gram_inv = invert_matrix(F, std::move(gram));
    } catch (const Error&) {
        throw Error("eta is not a basis (rank deficient)");
    }

    std::vector<FieldElement> theta(t, F.zero());
    for (unsigned j = 0; j < t; ++j) {
        elem_idx acc = 0;
        for (unsigned i = 0; i < t; ++i) acc = F.add(acc, F.mul(gram_inv[i][j], eta[i].index()));
        theta[j] = FieldElement(&F, acc);
    }
    for (unsigned i = 0; i < t; ++i)
        for (unsigned j = 0; j < t; ++j) {
            elem_idx tr = F.trace_raw(base, F.mul(eta[i].index(), theta[j].index()));
            if (tr != (i == j ? F.one().index() : 0)) throw Error("dual basis construction failed");
        }
    return TraceBasis{base, eta, std::move(theta)};
}

FieldElement element_from_traces(std::span<const FieldElement> traces, const TraceBasis& basis) {
    if (traces.size() != basis.theta.size())
        throw Error("expected " + std::to_string(basis.theta.size()) + " traces, got " +
                    std::to_string(traces.size()));
    const FieldTower& F = basis.theta.front().tower();
    elem_idx acc = 0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        same_tower(basis.theta.front(), traces[i]);
        if (!F.in_subfield(traces[i], basis.base))
            throw Error("trace value outside the base subfield");
        acc = F.add(acc, F.mul(traces[i].index(), basis.theta[i].index()));
    }
    return {&F, acc};
}

SpanBasis span_dim_over(std::span<const std::vector<FieldElement>> vectors, Subfield base) {
    SpanBasis out;
    out.base = base;
    if (vectors.empty()) return out;
    const std::size_t u = vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != u) throw Error("ragged vector set");
    if (u == 0) return out;

    const FieldTower& F = vectors.front().front().tower();
    const unsigned t = F.relative_degree(base);
    out.tower = &F;
    out.width = u * t;

    // expand an F_q vector into u*t subfield coordinates
    auto expand = [&](const std::vector<FieldElement>& v) {
        std::vector<elem_idx> row;
        row.reserve(u * t);
        for (const auto& x : v) {
            same_tower(vectors.front().front(), x);
            for (const auto& c : F.coords(x, base)) row.push_back(c.index());
        }
        return row;
    };

    for (std::size_t vi = 0; vi < vectors.size(); ++vi) {
        std::vector<elem_idx> row = expand(vectors[vi]);
        std::vector<elem_idx> combo(out.basis.size() + 1, 0);
        combo.back() = F.one().index();  // coefficient of the incoming vector itself
        for (std::size_t r = 0; r < out.echelon.size(); ++r) {
            elem_idx f = row[out.pivots[r]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < out.width; ++j)
                row[j] = F.sub(row[j], F.mul(f, out.echelon[r][j]));
            for (std::size_t m = 0; m < out.echelon_in_basis[r].size(); ++m)
                combo[m] = F.sub(combo[m], F.mul(f, out.echelon_in_basis[r][m]));
        }
        std::size_t lead = 0;
        while (lead < out.width && row[lead] == 0) ++lead;
        if (lead == out.width) continue;  // dependent
        elem_idx d = F.inv(row[lead]);
        for (auto& x : row) x = F.mul(x, d);
        for (auto& x : combo) x = F.mul(x, d);
        out.echelon.push_back(std::move(row));
        out.echelon_in_basis.push_back(std::move(combo));
        out.pivots.push_back(lead);
        out.basis.push_back(vectors[vi]);
        ++out.dim;
    }
    return out;
}

std::vector<FieldElement> coords_in_span(const SpanBasis& span, const std::vector<FieldElement>& v) {
    if (span.dim == 0) {
        bool all_zero = true;
        for (const auto& x : v) all_zero = all_zero && x.is_zero();
        if (!all_zero) throw Error("vector outside span");
        return {};
    }
    const FieldTower& F = *span.tower;
    const unsigned t = F.relative_degree(span.base);
    if (v.size() * t != span.width) throw Error("vector length mismatch");

    std::vector<elem_idx> row;
    row.reserve(span.width);
    for (const auto& x : v)
        for (const auto& c : F.coords(x, span.base)) row.push_back(c.index());

    std::vector<elem_idx> coeffs(span.dim, 0);
    for (std::size_t r = 0; r < span.echelon.size(); ++r) {
        elem_idx f = row[span.pivots[r]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < span.width; ++j)
            row[j] = F.sub(row[j], F.mul(f, span.echelon[r][j]));
        // echelon row r = sum_m echelon_in_basis[r][m] * basis[m]
        for (std::size_t m = 0; m < span.echelon_in_basis[r].size(); ++m)
            coeffs[m] = F.add(coeffs[m], F.mul(f, span.echelon_in_basis[r][m]));
    }
    for (elem_idx x : row)
        if (x != 0) throw Error("vector outside span");
    std::vector<FieldElement> out;
    out.reserve(span.dim);
    for (elem_idx c : coeffs) out.emplace_back(&F, c);
    return out;
}

}  // namespace rackrs
