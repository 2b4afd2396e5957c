#include "rackrs/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rackrs {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

FieldElement parse_element(const FieldTower& field, const std::string& text) {
    std::vector<unsigned> coeffs;
    for (const auto& tok : split(text, ',')) {
        const std::string c = strip(tok);
        if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos)
            throw Error("bad element coefficient: '" + c + "'");
        coeffs.push_back(unsigned(std::stoul(c)));
    }
    if (coeffs.size() != field.ext_degree())
        throw Error("element needs " + std::to_string(field.ext_degree()) + " coefficients");
    return field.from_coeffs(coeffs);
}

Poly parse_poly(const FieldTower& field, const std::string& text) {
    std::vector<FieldElement> coeffs;
    const std::string body = strip(text);
    if (body.empty()) return Poly::zero(&field);
    for (const auto& tok : split(body, ';')) coeffs.push_back(parse_element(field, strip(tok)));
    return Poly::from_coeffs(coeffs);
}

std::string scheme_to_json(const RepairScheme& scheme, int indent) {
    json j;
    j["format"] = "rackrs-scheme-v1";
    j["field"] = scheme.field->description();
    j["base_degree"] = scheme.basis.base.degree;
    j["family"] = scheme.family;
    j["k"] = scheme.k;
    j["d"] = scheme.d;
    j["ell"] = scheme.ell;
    j["host"] = {scheme.host.first, scheme.host.second};
    json layout = json::array();
    for (const auto& row : scheme.layout.grid) {
        json r = json::array();
        for (const auto& x : row) r.push_back(x.str());
        layout.push_back(r);
    }
    j["layout"] = layout;
    json eta = json::array(), theta = json::array();
    for (const auto& e : scheme.basis.eta) eta.push_back(e.str());
    for (const auto& e : scheme.basis.theta) theta.push_back(e.str());
    j["eta"] = eta;
    j["theta"] = theta;
    json hp = json::array();
    for (const auto& h : scheme.h_polys) {
        json coeffs = json::array();
        for (long i = 0; i <= h.degree(); ++i) coeffs.push_back(h.coeff(std::size_t(i)).str());
        hp.push_back(coeffs);
    }
    j["h_polys"] = hp;
    json sb = json::array();
    for (const auto& e : scheme.subspace_basis) sb.push_back(e.str());
    j["subspace_basis"] = sb;
    j["validation"] = {{"degree_ok", scheme.validation.degree_ok},
                       {"host_values_ok", scheme.validation.host_values_ok},
                       {"basis_ok", scheme.validation.basis_ok},
                       {"max_degree", scheme.validation.max_degree},
                       {"degree_bound", scheme.validation.degree_bound},
                       {"failures", scheme.validation.failures}};
    return j.dump(indent) + "\n";
}

RepairScheme scheme_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "rackrs-scheme-v1") throw Error("unknown scheme file format");
    auto field = parse_field(j.at("field").get<std::string>());
    const Subfield base = field->subfield(j.at("base_degree").get<unsigned>());

    std::vector<std::vector<FieldElement>> grid;
    for (const auto& row : j.at("layout")) {
        std::vector<FieldElement> r;
        for (const auto& x : row) r.push_back(parse_element(*field, x.get<std::string>()));
        grid.push_back(std::move(r));
    }
    TraceBasis basis;
    basis.base = base;
    for (const auto& x : j.at("eta")) basis.eta.push_back(parse_element(*field, x.get<std::string>()));
    for (const auto& x : j.at("theta"))
        basis.theta.push_back(parse_element(*field, x.get<std::string>()));

    std::vector<Poly> h;
    for (const auto& coeffs : j.at("h_polys")) {
        std::vector<FieldElement> c;
        for (const auto& x : coeffs) c.push_back(parse_element(*field, x.get<std::string>()));
        if (c.empty()) c.push_back(field->zero());
        h.push_back(Poly::from_coeffs(c));
    }

    auto scheme = RepairScheme::make(field, RackLayout::make(std::move(grid)),
                                     j.at("k").get<unsigned>(),
                                     {j.at("host")[0].get<unsigned>(), j.at("host")[1].get<unsigned>()},
                                     j.at("d").get<unsigned>(), std::move(basis), std::move(h));
    scheme.family = j.value("family", "manual");
    scheme.ell = j.value("ell", -1);
    if (j.contains("subspace_basis"))
        for (const auto& x : j.at("subspace_basis"))
            scheme.subspace_basis.push_back(parse_element(*field, x.get<std::string>()));
    scheme.validation = validate_scheme(scheme);
    return scheme;
}

void save_scheme(const RepairScheme& scheme, const std::string& path) {
    write_file(path, scheme_to_json(scheme));
}

RepairScheme load_scheme(const std::string& path) { return scheme_from_json(read_file(path)); }

std::string codeword_to_text(const GrsCode& code, const Codeword& word) {
    if (word.size() != code.length()) throw Error("codeword length mismatch");
    std::ostringstream os;
    os << "field: " << code.field->description() << "\n";
    os << "k: " << code.k << "\n";
    os << "points: ";
    for (std::size_t i = 0; i < code.points.size(); ++i)
        os << (i ? "; " : "") << code.points[i].str();
    os << "\nmultipliers: ";
    for (std::size_t i = 0; i < code.multipliers.size(); ++i)
        os << (i ? "; " : "") << code.multipliers[i].str();
    os << "\nerased: ";
    bool first = true;
    for (std::size_t i = 0; i < word.erased.size(); ++i)
        if (word.erased[i]) {
            os << (first ? "" : ",") << i;
            first = false;
        }
    os << "\nsymbols:\n";
    for (const auto& s : word.symbols) os << s.str() << "\n";
    return os.str();
}

std::pair<GrsCode, Codeword> codeword_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::shared_ptr<const FieldTower> field;
    unsigned k = 0;
    std::vector<FieldElement> points, multipliers;
    std::vector<std::size_t> erased;
    std::vector<FieldElement> symbols;
    bool in_symbols = false;
    while (std::getline(is, line)) {
        line = strip(line);
        if (line.empty()) continue;
        if (in_symbols) {
            symbols.push_back(parse_element(*field, line));
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) throw Error("bad codeword file line: " + line);
        const std::string key = strip(line.substr(0, colon));
        const std::string val = strip(line.substr(colon + 1));
        if (key == "field") {
            field = parse_field(val);
        } else if (key == "k") {
            k = unsigned(std::stoul(val));
        } else if (key == "points" || key == "multipliers") {
            if (!field) throw Error("field header must come first");
            auto& dst = key == "points" ? points : multipliers;
            for (const auto& tok : split(val, ';')) dst.push_back(parse_element(*field, strip(tok)));
        } else if (key == "erased") {
            if (!val.empty())
                for (const auto& tok : split(val, ','))
                    erased.push_back(std::stoul(strip(tok)));
        } else if (key == "symbols") {
            if (!field) throw Error("field header must come first");
            in_symbols = true;
        } else {
            throw Error("unknown codeword file key: " + key);
        }
    }
    if (!field) throw Error("missing field header");
    auto code = multipliers.empty() ? GrsCode::make(field, points, k)
                                    : GrsCode::make(field, points, k, multipliers);
    Codeword w{std::move(symbols), std::vector<bool>(code.length(), false)};
    if (w.symbols.size() != code.length()) throw Error("symbol count does not match the code");
    for (std::size_t i : erased) {
        if (i >= w.erased.size()) throw Error("erasure index out of range");
        w.erased[i] = true;
    }
    return {std::move(code), std::move(w)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace rackrs
