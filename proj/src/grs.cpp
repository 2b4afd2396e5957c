#include "rackrs/grs.hpp"

#include <algorithm>

namespace rackrs {

GrsCode GrsCode::make(std::shared_ptr<const FieldTower> field, std::vector<FieldElement> points,
                      unsigned k) {
    std::vector<FieldElement> ones(points.size(), field->one());
    return make(std::move(field), std::move(points), k, std::move(ones));
}

GrsCode GrsCode::make(std::shared_ptr<const FieldTower> field, std::vector<FieldElement> points,
                      unsigned k, std::vector<FieldElement> multipliers) {
    const std::size_t n = points.size();
    if (k < 1 || k >= n) throw Error("need 1 <= k < n");
    if (n > field->size()) throw Error("more points than field elements");
    if (multipliers.size() != n) throw Error("multiplier count must equal n");
    std::vector<elem_idx> idx;
    idx.reserve(n);
    for (const auto& a : points) {
        if (&a.tower() != field.get()) throw Error("points from a different field");
        idx.push_back(a.index());
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw Error("evaluation points must be distinct");
    for (const auto& v : multipliers) {
        if (&v.tower() != field.get()) throw Error("multipliers from a different field");
        if (v.is_zero()) throw Error("multipliers must be nonzero");
    }
    return GrsCode{std::move(field), std::move(points), std::move(multipliers), k};
}

Codeword encode(const GrsCode& code, const Poly& message) {
    if (message.degree() > long(code.k) - 1)
        throw Error("message degree " + std::to_string(message.degree()) + " exceeds k-1 = " +
                    std::to_string(code.k - 1));
    Codeword w;
    w.symbols.reserve(code.length());
    for (std::size_t i = 0; i < code.length(); ++i)
        w.symbols.push_back(code.multipliers[i] * message.eval(code.points[i]));
    w.erased.assign(code.length(), false);
    return w;
}

std::vector<FieldElement> dual_multipliers(std::span<const FieldElement> points) {
    if (points.empty()) throw Error("no points");
    const FieldTower& F = points.front().tower();
    {
        std::vector<elem_idx> idx;
        for (const auto& a : points) idx.push_back(a.index());
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
            throw Error("repeated points");
    }
    std::vector<FieldElement> u;
    u.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        elem_idx prod = F.one().index();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            prod = F.mul(prod, F.sub(points[i].index(), points[j].index()));
        }
        u.emplace_back(&F, F.inv(prod));
    }
    return u;
}

bool is_codeword(const GrsCode& code, const Codeword& word) {
    if (word.size() != code.length()) throw Error("codeword length mismatch");
    for (bool e : word.erased)
        if (e) throw Error("parity check on a word with erasures");
    const FieldTower& F = *code.field;
    const auto u = dual_multipliers(code.points);
    const std::size_t n = code.length();
    // f-values scaled by u_i once, then checked against successive powers
    std::vector<elem_idx> terms(n);
    for (std::size_t i = 0; i < n; ++i)
        terms[i] = F.mul(u[i].index(),
                         F.mul(word.symbols[i].index(), F.inv(code.multipliers[i].index())));
    for (unsigned e = 0; e < n - code.k; ++e) {
        elem_idx acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc = F.add(acc, terms[i]);
        if (acc != 0) return false;
        if (e + 1 < n - code.k)
            for (std::size_t i = 0; i < n; ++i) terms[i] = F.mul(terms[i], code.points[i].index());
    }
    return true;
}

Codeword naive_recover(const GrsCode& code, const Codeword& word,
                       std::span<const std::size_t> helpers) {
    if (word.size() != code.length()) throw Error("codeword length mismatch");
    if (helpers.size() != code.k)
        throw Error("naive recovery needs exactly k helpers, got " +
                    std::to_string(helpers.size()));
    std::vector<FieldElement> pts, vals;
    pts.reserve(code.k);
    vals.reserve(code.k);
    for (std::size_t i : helpers) {
        if (i >= code.length()) throw Error("helper index out of range");
        if (word.erased[i]) throw Error("helper coincides with an erasure");
        pts.push_back(code.points[i]);
        vals.push_back(word.symbols[i] / code.multipliers[i]);
    }
    const Poly f = interpolate(pts, vals);
    return encode(code, f);
}

}  // namespace rackrs
