#ifndef PHIMOD_CATALOG_HPP
#define PHIMOD_CATALOG_HPP

#include "phimod/galois.hpp"

namespace phimod {

struct unknown_label : std::invalid_argument {
    explicit unknown_label(const std::string& l)
        : std::invalid_argument("unknown field catalog label: " + l) {}
};
struct unsupported_index : std::invalid_argument {
    explicit unsupported_index(int e)
        : std::invalid_argument("no classification fields with e = " + std::to_string(e)) {}
};

struct CatalogEntry {
    std::string label;
    int f = 1;
    int e = 1;
    std::vector<Rational> eisenstein;  // a_0..a_{e-1} of the monic stage
    Presentation presentation;
    std::string group_shape;      // human tag: "1", "C2", "C3", "C6", "D4", "S3", ...
    std::string row;              // which classification row(s) the field serves
    int pair_index = 0;           // dodecic i in 1..10, 0 otherwise (K_i ~ K_{i+5})
};

/// The catalog text in its versioned on-disk format (also shipped as
/// data/field_catalog.txt; the two must match byte for byte).
const std::string& field_catalog_text();

/// Parses catalog text; throws on malformed records.
std::vector<CatalogEntry> parse_catalog(const std::string& text);

/// The built-in catalog (parsed once, cached).
const std::vector<CatalogEntry>& field_catalog();

const CatalogEntry& catalog_entry(const std::string& label);

/// All classification-relevant fields for a ramification index.
std::vector<CatalogEntry> catalog_fields(int e);

/// Cached tower construction / Galois group construction per label.
TowerFieldPtr get_field(const std::string& label);
/// Roots of the label's Eisenstein stage inside its own tower, canonical
/// order (cached; this is the expensive part of group construction).
const std::vector<FieldElement>& get_roots(const std::string& label);
const GaloisGroup& get_group(const std::string& label);

}  // namespace phimod

#endif
