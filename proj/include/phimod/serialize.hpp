#ifndef PHIMOD_SERIALIZE_HPP
#define PHIMOD_SERIALIZE_HPP

#include "phimod/ec3.hpp"
#include "phimod/phigal.hpp"

#include <json.hpp>

namespace phimod {

/// Parse failure with a byte position (inside the offending entry string,
/// or inside the file for JSON-level errors) and the field path.
struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, size_t pos, std::string where = "")
        : std::runtime_error(msg +
                             (msg.find("at position") == std::string::npos
                                  ? " at position " + std::to_string(pos)
                                  : "") +
                             (where.empty() ? "" : " in " + where)),
          position(pos),
          context(std::move(where)) {}
    size_t position;
    std::string context;
};

inline constexpr const char* kModuleFormat = "phimod3-module/1";

/// Canonical entry strings: exact values as "a+b*i" with rational a, b;
/// approximate values as "(<padic>)+(<padic>)*i" with each component a
/// base-3 digit string "d...d e<val> ~<prec>" or "0~<absprec>".
std::string k0_to_string(const K0Value& v);
K0Value k0_from_string(const std::string& s);

std::string padic_to_string(const PadicNumber& p);

nlohmann::json module_to_json(const FilteredModule& D);
FilteredModule module_from_json(const nlohmann::json& j);

/// Whole-file helpers (pretty JSON, trailing newline).
std::string write_module(const FilteredModule& D);
FilteredModule read_module(const std::string& text);

/// Weierstrass equation in the CLI's text format, e.g. "y^2=x^3-x+1" or
/// "y^2+x*y=x^3+(1+2*t)*x" (F9 coefficients as "a+b*t"); s = 1 for F3,
/// 2 for F9.  Throws parse_error with a position.
CurveF3q parse_curve(const std::string& spec, int s);

/// Structured report fragments shared by the CLI and the bindings.
nlohmann::json conditions_to_json(const ConditionsReport& r);
nlohmann::json table1_to_json(const Table1Report& r);
nlohmann::json table2_to_json(const std::vector<Table2Row>& rows);

}  // namespace phimod

#endif
