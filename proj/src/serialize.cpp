#include "phimod/serialize.hpp"

#include "phimod/catalog.hpp"

#include <sstream>

namespace phimod {

namespace {

std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

/// Character-level cursor with positioned errors.
struct Cursor {
    const std::string& s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    void expect(char c, const std::string& what) {
        if (!eat(c)) fail("expected '" + std::string(1, c) + "' (" + what + ")");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg + " in \"" + s + "\"", pos);
    }

    BigInt digits10() {
        if (!isdigit(static_cast<unsigned char>(peek()))) fail("expected a digit");
        BigInt n = 0;
        while (isdigit(static_cast<unsigned char>(peek()))) n = n * 10 + (s[pos++] - '0');
        return n;
    }
    long integer() {
        bool neg = eat('-');
        if (!neg) eat('+');
        BigInt n = digits10();
        return static_cast<long>(neg ? -n : n);
    }
    Rational rational() {
        bool neg = eat('-');
        BigInt num = digits10();
        BigInt den = 1;
        if (eat('/')) {
            den = digits10();
            if (den == 0) fail("zero denominator");
        }
        Rational q(num, den);
        return neg ? -q : q;
    }
};

/// padic := "0~" absprec | digits3 "e" val "~" prec
PadicNumber parse_padic(Cursor& c) {
    if (c.s.compare(c.pos, 2, "0~") == 0) {
        c.pos += 2;
        return PadicNumber::zero_to(c.integer());
    }
    size_t start = c.pos;
    BigInt unit = 0;
    int ndigits = 0;
    while (c.peek() >= '0' && c.peek() <= '2') {
        unit = unit * 3 + (c.s[c.pos++] - '0');
        ++ndigits;
    }
    if (ndigits == 0) c.fail("expected base-3 digits");
    c.expect('e', "3-adic valuation");
    long val = c.integer();
    c.expect('~', "3-adic precision");
    long prec = c.integer();
    if (prec < ndigits) {
        c.pos = start;
        c.fail("more digits than the declared precision");
    }
    return PadicNumber::make(val, unit, static_cast<int>(prec));
}

/// value := "(" padic ")" "+" "(" padic ")" "*i"
///        | rational | rational? sign rational "*i" | [sign] "i"
K0Value parse_value(Cursor& c) {
    if (c.eat('(')) {
        PadicNumber re = parse_padic(c);
        c.expect(')', "closing the real part");
        c.expect('+', "between parts");
        c.expect('(', "opening the imaginary part");
        PadicNumber im = parse_padic(c);
        c.expect(')', "closing the imaginary part");
        c.expect('*', "the *i marker");
        c.expect('i', "the *i marker");
        return K0Value::approx(re, im);
    }
    auto bare_i = [&](bool neg) -> std::optional<GaussianRational> {
        if (!c.eat('i')) return std::nullopt;
        return GaussianRational(0, neg ? -1 : 1);
    };
    if (auto v = bare_i(false)) return K0Value(*v);
    if (c.peek() == '-' || c.peek() == '+') {
        size_t save = c.pos;
        bool neg = c.eat('-');
        if (!neg) c.eat('+');
        if (auto v = bare_i(neg)) return K0Value(*v);
        c.pos = save;
    }
    Rational first = c.rational();
    if (c.eat('*')) {
        c.expect('i', "the *i marker");
        return K0Value(GaussianRational(0, first));
    }
    if (c.peek() == '+' || c.peek() == '-') {
        bool neg = c.s[c.pos] == '-';
        ++c.pos;
        if (auto v = bare_i(false)) return K0Value(GaussianRational(first, neg ? -1 : 1));
        Rational second = c.rational();
        c.expect('*', "the *i marker");
        c.expect('i', "the *i marker");
        return K0Value(GaussianRational(first, neg ? -second : second));
    }
    return K0Value(GaussianRational(first));
}

std::string matrix_entry(const K0Matrix& M, int i, int j) { return k0_to_string(M.at(i, j)); }

K0Value entry_at(const nlohmann::json& rows, int i, int j, const std::string& where) {
    if (!rows.is_array() || rows.size() != 2 || !rows[i].is_array() || rows[i].size() != 2)
        throw parse_error("matrix must be a 2x2 array of strings", 0, where);
    const auto& cell = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (!cell.is_string()) throw parse_error("matrix entry must be a string", 0, where);
    try {
        return k0_from_string(cell.get<std::string>());
    } catch (const parse_error& e) {
        throw parse_error(e.what(), e.position,
                          where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
}

nlohmann::json matrix_json(const K0Matrix& M) {
    return nlohmann::json::array(
        {{matrix_entry(M, 0, 0), matrix_entry(M, 0, 1)},
         {matrix_entry(M, 1, 0), matrix_entry(M, 1, 1)}});
}

std::vector<K0Value> coords_from_json(const nlohmann::json& arr, size_t e,
                                      const std::string& where) {
    if (!arr.is_array() || arr.size() != e)
        throw parse_error("coordinate list must have " + std::to_string(e) + " entries", 0,
                          where);
    std::vector<K0Value> out;
    for (size_t i = 0; i < e; ++i) {
        if (!arr[i].is_string()) throw parse_error("coordinate must be a string", 0, where);
        try {
            out.push_back(k0_from_string(arr[i].get<std::string>()));
        } catch (const parse_error& err) {
            throw parse_error(err.what(), err.position, where + "[" + std::to_string(i) + "]");
        }
    }
    return out;
}

}  // namespace

std::string padic_to_string(const PadicNumber& p) {
    if (p.is_zero()) return "0~" + std::to_string(p.abs_precision());
    std::string digits;
    BigInt u = p.unit();
    for (int k = 0; k < p.precision(); ++k) {
        digits += static_cast<char>('0' + static_cast<int>(u % 3));
        u /= 3;
    }
    std::reverse(digits.begin(), digits.end());
    // trim leading zeros but keep the declared precision
    size_t first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    return digits + "e" + std::to_string(p.valuation_int()) + "~" +
           std::to_string(p.precision());
}

std::string k0_to_string(const K0Value& v) {
    if (v.is_exact()) {
        const GaussianRational& g = v.exact();
        if (g.im == 0) return rational_str(g.re);
        std::string im = g.im == 1 ? "i" : g.im == -1 ? "-i" : rational_str(g.im) + "*i";
        if (g.re == 0) return im;
        return rational_str(g.re) + (g.im > 0 ? "+" : "") + im;
    }
    int p = K0Value::default_precision;
    return "(" + padic_to_string(v.re(p)) + ")+(" + padic_to_string(v.im(p)) + ")*i";
}

K0Value k0_from_string(const std::string& s) {
    Cursor c{s};
    K0Value v = parse_value(c);
    if (!c.done()) c.fail("trailing characters");
    return v;
}

nlohmann::json module_to_json(const FilteredModule& D) {
    nlohmann::json j;
    j["format"] = kModuleFormat;
    j["field_label"] = D.base.field->label();
    j["group_presentation_ref"] = D.base.field->label();
    j["phi"] = matrix_json(D.base.phi);
    nlohmann::json gal = nlohmann::json::object();
    for (const auto& [name, M] : D.base.galois) gal[name] = matrix_json(M);
    j["galois"] = gal;
    nlohmann::json fil;
    nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array();
    for (const auto& c : D.fil_x.coords()) xs.push_back(k0_to_string(c));
    for (const auto& c : D.fil_y.coords()) ys.push_back(k0_to_string(c));
    fil["x_coords"] = xs;
    fil["y_coords"] = ys;
    j["fil"] = fil;
    return j;
}

FilteredModule module_from_json(const nlohmann::json& j) {
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw parse_error(std::string("missing field \"") + key + "\"", 0);
        return j.at(key);
    };
    if (!need("format").is_string() || need("format").get<std::string>() != kModuleFormat)
        throw parse_error(std::string("unsupported format (expected \"") + kModuleFormat + "\")",
                          0, "format");
    if (!need("field_label").is_string())
        throw parse_error("field_label must be a string", 0, "field_label");
    std::string label = j["field_label"].get<std::string>();
    std::string ref = need("group_presentation_ref").is_string()
                          ? j["group_presentation_ref"].get<std::string>()
                          : throw parse_error("group_presentation_ref must be a string", 0,
                                              "group_presentation_ref");
    if (ref != label)
        throw parse_error("group_presentation_ref must match field_label in this format version",
                          0, "group_presentation_ref");

    TowerFieldPtr K;
    try {
        K = get_field(label);
    } catch (const unknown_label& e) {
        throw parse_error(e.what(), 0, "field_label");
    }
    const GaloisGroup& G = get_group(label);
    int f = K->f();

    FilteredModule D;
    D.base.field = K;
    D.base.group = &G;
    D.base.phi = K0Matrix(entry_at(need("phi"), 0, 0, "phi"), entry_at(j["phi"], 0, 1, "phi"),
                          entry_at(j["phi"], 1, 0, "phi"), entry_at(j["phi"], 1, 1, "phi"), f, 1);

    const nlohmann::json& gal = need("galois");
    if (!gal.is_object()) throw parse_error("galois must be an object", 0, "galois");
    for (const auto& g : G.presentation().generators) {
        if (!gal.contains(g.name))
            throw parse_error("missing galois generator \"" + g.name + "\"", 0, "galois");
        std::string where = "galois." + g.name;
        D.base.galois.emplace(
            g.name, K0Matrix(entry_at(gal[g.name], 0, 0, where), entry_at(gal[g.name], 0, 1, where),
                             entry_at(gal[g.name], 1, 0, where), entry_at(gal[g.name], 1, 1, where),
                             f, g.unramified_exponent));
    }
    if (gal.size() != G.presentation().generators.size())
        throw parse_error("galois lists a generator outside the group presentation", 0, "galois");

    const nlohmann::json& fil = need("fil");
    if (!fil.is_object() || !fil.contains("x_coords") || !fil.contains("y_coords"))
        throw parse_error("fil must carry x_coords and y_coords", 0, "fil");
    size_t e = static_cast<size_t>(K->e());
    D.fil_x = FieldElement(K, coords_from_json(fil["x_coords"], e, "fil.x_coords"));
    D.fil_y = FieldElement(K, coords_from_json(fil["y_coords"], e, "fil.y_coords"));
    if (D.fil_x.is_zero() && D.fil_y.is_zero())
        throw parse_error("fil must be a nonzero line", 0, "fil");
    return D;
}

std::string write_module(const FilteredModule& D) { return module_to_json(D).dump(2) + "\n"; }

namespace {

/// Weierstrass equation parser over a flattened (whitespace-free) string.
struct CurveParser {
    std::string s;
    size_t pos = 0;

    explicit CurveParser(const std::string& text) {
        for (char c : text)
            if (!isspace(static_cast<unsigned char>(c))) s += c;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg + " in \"" + s + "\"", pos);
    }
    bool eat(char c) {
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat(const std::string& w) {
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    int digits() {
        if (pos >= s.size() || !isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected a digit");
        int n = 0;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos])))
            n = n * 10 + (s[pos++] - '0');
        return n;
    }
    /// coefficient := int | int '*t' | 't' | '(' int (+|-) [int '*'] 't' ')'
    F9 coeff() {
        if (eat('(')) {
            int a = eat('-') ? -digits() : digits();
            int sign = eat('-') ? -1 : (eat('+') ? 1 : 0);
            if (sign == 0) fail("expected '+' or '-' inside coefficient");
            int b = 1;
            if (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
                b = digits();
                if (!eat('*')) fail("expected '*t'");
            }
            if (!eat('t')) fail("expected 't'");
            if (!eat(')')) fail("expected ')'");
            return F9(a, sign * b);
        }
        if (eat('t')) return F9(0, 1);
        int a = digits();
        if (eat('*')) {
            if (!eat('t')) fail("expected 't' after '*'");
            return F9(0, a);
        }
        return F9(a);
    }
    /// term := [coeff '*'] monomial | coeff   (monomials start with x or y)
    void term(CurveF3q& E, bool lhs, bool negated) {
        F9 c(1);
        bool have_coeff = false;
        if (pos < s.size() &&
            (isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '(' || s[pos] == 't')) {
            c = coeff();
            have_coeff = true;
            if (!eat('*') && pos < s.size() && (s[pos] == 'x' || s[pos] == 'y'))
                fail("expected '*' between coefficient and monomial");
        }
        if (negated) c = -c;
        if (s.compare(pos, 3, "y^2") == 0) fail("y^2 may only lead the left side");
        if (s.compare(pos, 3, "x^3") == 0) fail("x^3 may only lead the right side");
        if (eat("x^2")) {
            if (lhs) fail("x^2 belongs on the right side");
            E.a2 = E.a2 + c;
            return;
        }
        if (eat("x*y") || eat("y*x")) {
            if (!lhs) fail("x*y belongs on the left side");
            E.a1 = E.a1 + c;
            return;
        }
        if (eat('x')) {
            if (lhs) fail("x belongs on the right side");
            E.a4 = E.a4 + c;
            return;
        }
        if (eat('y')) {
            if (!lhs) fail("y belongs on the left side");
            E.a3 = E.a3 + c;
            return;
        }
        if (!have_coeff) fail("expected a term");
        if (lhs) fail("constants belong on the right side");
        E.a6 = E.a6 + c;
    }

    CurveF3q parse(int s_field) {
        CurveF3q E;
        E.s = s_field;
        if (!eat("y^2")) fail("curve must start with y^2");
        while (pos < s.size() && s[pos] != '=') {
            bool neg = eat('-');
            if (!neg && !eat('+')) fail("expected '+', '-' or '='");
            term(E, true, neg);
        }
        if (!eat('=')) fail("expected '='");
        if (!eat("x^3")) fail("right side must start with x^3");
        while (pos < s.size()) {
            bool neg = eat('-');
            if (!neg && !eat('+')) fail("expected '+' or '-'");
            term(E, false, neg);
        }
        if (E.s == 1 &&
            !(E.a1.in_f3() && E.a2.in_f3() && E.a3.in_f3() && E.a4.in_f3() && E.a6.in_f3()))
            fail("coefficient involves t but the field is f3");
        return E;
    }
};

}  // namespace

CurveF3q parse_curve(const std::string& spec, int s) {
    CurveParser p(spec);
    return p.parse(s);
}

nlohmann::json conditions_to_json(const ConditionsReport& r) {
    nlohmann::json j;
    j["cond1_char_poly"] = r.cond1;
    if (r.char_poly_coeffs)
        j["char_poly"] = {rational_str((*r.char_poly_coeffs)[0]),
                          rational_str((*r.char_poly_coeffs)[1])};
    j["cond2_weil_rational"] = r.cond2;
    j["weil_window"] = r.weil_window;
    nlohmann::json weil = nlohmann::json::array();
    for (const auto& w : r.weil)
        weil.push_back({{"word", w.word},
                        {"n", w.n},
                        {"trace", w.trace ? nlohmann::json(rational_str(*w.trace))
                                          : nlohmann::json(nullptr)}});
    j["weil_traces"] = weil;
    j["cond3_determinants"] = r.cond3;
    j["cond4_filtration"] = r.cond4;
    j["admissible"] = r.admissible;
    j["t_newton"] = rational_str(r.t_N);
    j["t_hodge"] = r.t_H;
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& l : r.lines)
        lines.push_back({{"t_newton", rational_str(l.t_newton)}, {"line_in_fil", l.line_in_fil}});
    j["stable_lines"] = lines;
    return j;
}

nlohmann::json table1_to_json(const Table1Report& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"row", row.row},
                        {"expected", row.expected},
                        {"computed", row.computed},
                        {"pass", row.pass},
                        {"notes", row.notes}});
    return {{"sample_budget", r.sample_budget},
            {"seed", r.seed},
            {"rows", rows},
            {"all_pass", r.all_pass()}};
}

nlohmann::json table2_to_json(const std::vector<Table2Row>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"row", r.name},
                       {"curve", r.curve},
                       {"verdict", r.verdict},
                       {"pass", r.pass},
                       {"notes", r.notes}});
    return out;
}

FilteredModule read_module(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(e.what(), e.byte);
    }
    return module_from_json(j);
}

}  // namespace phimod
