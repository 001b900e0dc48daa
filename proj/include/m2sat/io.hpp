#pragma once

// JSON encodings. Numbers are always exact strings: rationals as "n/d" or "n",
// surds as {"p": rational, "q": rational, "r": integer}, infinities as "inf" / "-inf".

#include "m2sat/solver.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace m2sat {

using json = nlohmann::json;

/// Malformed or invalid input. `where` is a JSON pointer or "line L, column C".
class IoError : public std::runtime_error {
public:
    IoError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j, const std::string& where = "");
json surd_to_json(const Surd& s);
/// Accepts a surd object or a rational string.
Surd surd_from_json(const json& j, const std::string& where = "");
/// Rational values print as strings, irrational ones as surd objects.
json ext_to_json(const ExtSurd& x);
ExtSurd ext_from_json(const json& j, const std::string& where = "");

json pfl_to_json(const PFL& f);
PFL pfl_from_json(const json& j, const std::string& where = "");

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

std::string literal_to_string(const Instance& inst, Literal x);
Literal literal_from_string(const Instance& inst, const std::string& s, const std::string& where = "");

json certificate_to_json(const Instance& inst, const Certificate& cert);
Certificate certificate_from_json(const Instance& inst, const json& j);

json verdict_to_json(const Instance& inst, const Verdict& v);
/// Fills sat, witness and certificate.
Verdict verdict_from_json(const Instance& inst, const json& j);

/// Parses text, reporting syntax errors with line and column.
json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace m2sat
