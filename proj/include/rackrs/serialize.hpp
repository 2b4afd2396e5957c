#ifndef RACKRS_SERIALIZE_HPP
#define RACKRS_SERIALIZE_HPP

#include <string>
#include <utility>

#include "rackrs/rack.hpp"

namespace rackrs {

/// "c0,c1,...,c_{T-1}" (base-10 residues, low degree first)
FieldElement parse_element(const FieldTower& field, const std::string& text);

/// Elements joined by ';', low degree first. Inverse of Poly::str().
Poly parse_poly(const FieldTower& field, const std::string& text);

/// Self-contained JSON document: field header, layout grid, k, d, host,
/// basis, h-polynomial coefficient lists, provenance and validation report.
std::string scheme_to_json(const RepairScheme& scheme, int indent = 2);
RepairScheme scheme_from_json(const std::string& text);

void save_scheme(const RepairScheme& scheme, const std::string& path);
RepairScheme load_scheme(const std::string& path);

/// Codeword files: field/code header, then one element per line; the erasure
/// mask is an index list.
std::string codeword_to_text(const GrsCode& code, const Codeword& word);
std::pair<GrsCode, Codeword> codeword_from_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace rackrs

#endif
