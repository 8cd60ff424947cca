#include "phimod/catalog.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace phimod {

static const char* kCatalogText =
    R"(# phimod3 field catalog, format version 1
# label|f|e|eisenstein a0..a_{e-1} of monic X^e+a_{e-1}X^{e-1}+...+a0|generators name:order:m|relations (words = id)|shape|row|pair
Q3|1|1|-3|||1|e=1|0
Q3(sqrt3)|1|2|-3 0|t2:2:0||C2|e=2|0
Lg|1|3|-3 9 -6|t3:3:0||C3|e=3-abelian|0
Lng-closure|2|3|6 0 -3|t3:3:0,w:2:1|w t3 w t3|S3|e=3-nonabelian|0
Q3(zeta4,pi4)|2|4|-3 0 0 0|t4:4:0,w:2:1|w t4 w t4|D4|e=4|0
Lg(sqrt3)|1|6|-3 0 18 0 -15 0|t3:3:0,t2:2:0|t3 t2 t3^-1 t2^-1|C6|e=6-abelian|0
Lng-closure(sqrt3)|2|6|-48 0 72 0 -3 0|t3:3:0,t2:2:0,w:2:1|w t3 w t3;t3 t2 t3^-1 t2^-1;w t2 w t2^-1|S3xC2|e=6-nonabelian|0
K1|2|12|3 0 0 0 3 0 0 0 0 0 0 0|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|1
K2|2|12|-3 0 0 0 -3 0 0 3 0 -3 0 -3|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|2
K3|2|12|3 0 0 0 0 0 0 0 0 0 0 0|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|3
K4|2|12|-12 -9 9 -3 -9 9 6 0 -9 9 9 0|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|4
K5|2|12|-3 0 -9 0 0 0 -12 -9 9 9 9 9|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|5
K6|2|12|-3 0 0 3 3 3 3 -3 0 -3 3 0|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|6
K7|2|12|3 0 0 3 -3 3 0 0 0 3 -3 -3|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|7
K8|2|12|-12 9 9 3 0 0 -12 9 -9 9 0 -9|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|8
K9|2|12|12 -9 -9 6 -9 9 3 -9 -9 -3 9 9|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|9
K10|2|12|3 9 -9 3 9 9 3 0 9 6 0 -9|t4:4:0,t3:3:0,w:2:1|t4 t3 t4^-1 t3;w t4 w t4;t3 w t3^-1 w|(C3:C4):C2|e=12|10
)";

const std::string& field_catalog_text() {
    static const std::string text = kCatalogText;
    return text;
}

static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur += c;
    }
    out.push_back(cur);
    return out;
}

static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

static RelationWord parse_word(const std::string& s) {
    RelationWord w;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        size_t caret = tok.find('^');
        if (caret == std::string::npos) {
            w.emplace_back(tok, 1);
        } else {
            w.emplace_back(tok.substr(0, caret), std::stoi(tok.substr(caret + 1)));
        }
    }
    return w;
}

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
    std::vector<CatalogEntry> entries;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> parts = split(t, '|');
        if (parts.size() != 9)
            throw precondition_error("catalog line " + std::to_string(lineno) +
                                     ": expected 9 fields, got " + std::to_string(parts.size()));
        CatalogEntry e;
        e.label = trim(parts[0]);
        e.f = std::stoi(parts[1]);
        e.e = std::stoi(parts[2]);
        {
            std::istringstream cs(parts[3]);
            long c;
            while (cs >> c) e.eisenstein.push_back(Rational(c));
        }
        if (static_cast<int>(e.eisenstein.size()) != e.e)
            throw precondition_error("catalog line " + std::to_string(lineno) +
                                     ": coefficient count != e");
        if (!trim(parts[4]).empty()) {
            for (const auto& g : split(parts[4], ',')) {
                std::vector<std::string> bits = split(trim(g), ':');
                if (bits.size() != 3)
                    throw precondition_error("catalog line " + std::to_string(lineno) +
                                             ": bad generator spec '" + g + "'");
                e.presentation.generators.push_back(
                    {bits[0], std::stoi(bits[1]), std::stoi(bits[2])});
            }
        }
        if (!trim(parts[5]).empty()) {
            for (const auto& r : split(parts[5], ';'))
                e.presentation.relations.push_back(parse_word(r));
        }
        e.group_shape = trim(parts[6]);
        e.row = trim(parts[7]);
        e.pair_index = std::stoi(parts[8]);
        entries.push_back(std::move(e));
    }
    return entries;
}

const std::vector<CatalogEntry>& field_catalog() {
    static const std::vector<CatalogEntry> entries = parse_catalog(field_catalog_text());
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& label) {
    for (const auto& e : field_catalog())
        if (e.label == label) return e;
    throw unknown_label(label);
}

std::vector<CatalogEntry> catalog_fields(int e) {
    switch (e) {
        case 1: case 2: case 3: case 4: case 6: case 12: break;
        default: throw unsupported_index(e);
    }
    std::vector<CatalogEntry> out;
    for (const auto& entry : field_catalog())
        if (entry.e == e) out.push_back(entry);
    return out;
}

static std::mutex registry_mutex;

TowerFieldPtr get_field(const std::string& label) {
    static std::map<std::string, TowerFieldPtr> cache;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto it = cache.find(label);
    if (it != cache.end()) return it->second;
    const CatalogEntry& e = catalog_entry(label);
    TowerFieldPtr K = TowerField::make(e.label, e.f, e.eisenstein);
    cache.emplace(label, K);
    return K;
}

const std::vector<FieldElement>& get_roots(const std::string& label) {
    static std::map<std::string, std::shared_ptr<std::vector<FieldElement>>> cache;
    TowerFieldPtr K = get_field(label);
    {
        std::lock_guard<std::mutex> lock(registry_mutex);
        auto it = cache.find(label);
        if (it != cache.end()) return *it->second;
    }
    std::vector<Rational> poly = K->eisenstein();
    poly.push_back(1);
    auto roots = std::make_shared<std::vector<FieldElement>>(find_roots_in_field(poly, K));
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto [it, inserted] = cache.emplace(label, std::move(roots));
    return *it->second;
}

const GaloisGroup& get_group(const std::string& label) {
    static std::map<std::string, std::shared_ptr<GaloisGroup>> cache;
    TowerFieldPtr K = get_field(label);
    const CatalogEntry& e = catalog_entry(label);
    {
        std::lock_guard<std::mutex> lock(registry_mutex);
        auto it = cache.find(label);
        if (it != cache.end()) return *it->second;
    }
    auto G = std::make_shared<GaloisGroup>(build_galois_group(K, e.presentation, get_roots(label)));
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto [it, inserted] = cache.emplace(label, std::move(G));
    return *it->second;
}

}  // namespace phimod
