#include "m2sat/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace m2sat {

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw IoError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw IoError(where, std::string("missing field '") + key + "'");
    return *it;
}

Integer integer_from_json(const json& j, const std::string& where) {
    static const std::regex pattern("-?[0-9]+");
    std::string s;
    if (j.is_number_integer()) {
        s = j.dump();
    } else if (j.is_string()) {
        s = j.get<std::string>();
    } else {
        throw IoError(where, "expected an integer");
    }
    if (!std::regex_match(s, pattern)) throw IoError(where, "malformed integer '" + s + "'");
    return Integer(s);
}

std::size_t index_from_json(const json& j, const std::string& where) {
    if (!j.is_number_unsigned()) throw IoError(where, "expected a non-negative index");
    return j.get<std::size_t>();
}

json integer_to_json(const Integer& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

}  // namespace

json rational_to_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const json& j, const std::string& where) {
    static const std::regex pattern("(-?[0-9]+)(/([0-9]+))?");
    if (!j.is_string()) throw IoError(where, "expected a rational string");
    std::string s = j.get<std::string>();
    std::smatch m;
    if (!std::regex_match(s, m, pattern)) throw IoError(where, "malformed rational '" + s + "'");
    Integer num(m[1].str());
    Integer den = m[3].matched ? Integer(m[3].str()) : Integer(1);
    if (den == 0) throw IoError(where, "zero denominator in '" + s + "'");
    return make_rational(num, den);
}

json surd_to_json(const Surd& s) {
    return {{"p", rational_to_json(s.p())}, {"q", rational_to_json(s.q())}, {"r", integer_to_json(s.r())}};
}

Surd surd_from_json(const json& j, const std::string& where) {
    if (j.is_string()) return Surd(rational_from_json(j, where));
    Rational p = rational_from_json(field(j, "p", where), at(where, "p"));
    Rational q = rational_from_json(field(j, "q", where), at(where, "q"));
    Integer r = integer_from_json(field(j, "r", where), at(where, "r"));
    if (r < 0) throw IoError(at(where, "r"), "negative radicand");
    return Surd::make(p, q, r);
}

json ext_to_json(const ExtSurd& x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    if (x.value().is_rational()) return rational_to_json(x.value().p());
    return surd_to_json(x.value());
}

ExtSurd ext_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return ExtSurd::pos_inf();
        if (s == "-inf") return ExtSurd::neg_inf();
    }
    return ExtSurd(surd_from_json(j, where));
}

json pfl_to_json(const PFL& f) {
    json out = json::array();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const FracLin& g = f.piece(i);
        json piece = {{"a", g.a().get_str()}, {"b", g.b().get_str()}, {"c", g.c().get_str()}, {"d", g.d().get_str()}};
        out.push_back({{"piece", piece}, {"upto", i < f.breaks().size() ? ext_to_json(f.breaks()[i]) : json("inf")}});
    }
    return out;
}

PFL pfl_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw IoError(where, "expected a non-empty list of pieces");
    std::vector<ExtSurd> breaks;
    std::vector<Coeffs> pieces;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string w = at(where, i);
        const json& piece = field(j[i], "piece", w);
        std::string pw = at(w, "piece");
        pieces.push_back({integer_from_json(field(piece, "a", pw), at(pw, "a")),
                          integer_from_json(field(piece, "b", pw), at(pw, "b")),
                          integer_from_json(field(piece, "c", pw), at(pw, "c")),
                          integer_from_json(field(piece, "d", pw), at(pw, "d"))});
        ExtSurd upto = ext_from_json(field(j[i], "upto", w), at(w, "upto"));
        bool last = i + 1 == j.size();
        if (last != upto.is_pos_inf())
            throw IoError(at(w, "upto"), last ? "last piece must extend to inf" : "only the last piece may extend to inf");
        if (!last) breaks.push_back(upto);
    }
    try {
        return pfl_validate(breaks, pieces);
    } catch (const ValidationError& e) {
        throw IoError(where, e.what());
    }
}

std::string literal_to_string(const Instance& inst, Literal x) { return inst.literal_name(x); }

Literal literal_from_string(const Instance& inst, const std::string& s, const std::string& where) {
    bool neg = !s.empty() && s[0] == '-';
    std::string name = neg ? s.substr(1) : s;
    for (std::size_t v = 0; v < inst.names.size(); ++v)
        if (inst.names[v] == name) return Literal(v, neg);
    throw IoError(where, "unknown variable '" + name + "'");
}

json instance_to_json(const Instance& inst) {
    json vars = json::array();
    for (std::size_t v = 0; v < inst.var_count(); ++v)
        vars.push_back({{"name", inst.names[v]},
                        {"range", {ext_to_json(inst.ranges[v].lo), ext_to_json(inst.ranges[v].hi)}}});
    json cons = json::array();
    for (const auto& c : inst.constraints)
        cons.push_back({{"lesser", literal_to_string(inst, c.lesser)},
                        {"greater", literal_to_string(inst, c.greater)},
                        {"f", pfl_to_json(c.f)}});
    return {{"variables", vars}, {"constraints", cons}};
}

Instance instance_from_json(const json& j) {
    Instance inst;
    const json& vars = field(j, "variables", "");
    if (!vars.is_array()) throw IoError("/variables", "expected a list");
    for (std::size_t v = 0; v < vars.size(); ++v) {
        std::string w = at("/variables", v);
        const json& name = field(vars[v], "name", w);
        if (!name.is_string()) throw IoError(at(w, "name"), "expected a string");
        const json& range = field(vars[v], "range", w);
        if (!range.is_array() || range.size() != 2) throw IoError(at(w, "range"), "expected [lo, hi]");
        ExtSurd lo = ext_from_json(range[0], at(w, "range/0"));
        ExtSurd hi = ext_from_json(range[1], at(w, "range/1"));
        if (!lo.is_finite() || !hi.is_finite()) throw IoError(at(w, "range"), "range must be compact");
        inst.names.push_back(name.get<std::string>());
        inst.ranges.push_back({lo.value(), hi.value()});
    }
    const json& cons = field(j, "constraints", "");
    if (!cons.is_array()) throw IoError("/constraints", "expected a list");
    for (std::size_t i = 0; i < cons.size(); ++i) {
        std::string w = at("/constraints", i);
        auto lit = [&](const char* key) {
            const json& s = field(cons[i], key, w);
            if (!s.is_string()) throw IoError(at(w, key), "expected a literal name");
            return literal_from_string(inst, s.get<std::string>(), at(w, key));
        };
        Literal lesser = lit("lesser"), greater = lit("greater");
        inst.constraints.push_back({lesser, greater, pfl_from_json(field(cons[i], "f", w), at(w, "f"))});
    }
    try {
        validate_instance(inst);
    } catch (const ValidationError& e) {
        throw IoError("/", e.what());
    }
    return inst;
}

json certificate_to_json(const Instance& inst, const Certificate& cert) {
    json steps = json::array();
    for (const auto& st : cert.steps) {
        json s = {{"op", op_name(st.op)}};
        switch (st.op) {
        case CertStep::Op::Use:
            s["constraint"] = st.constraint;
            s["dual"] = st.dual;
            break;
        case CertStep::Op::Compose:
        case CertStep::Op::Min:
            s["args"] = st.args;
            break;
        case CertStep::Op::Range:
            s["literal"] = literal_to_string(inst, st.literal);
            break;
        case CertStep::Op::Assume:
            s["literal"] = literal_to_string(inst, st.literal);
            s["value"] = ext_to_json(st.value);
            break;
        case CertStep::Op::Apply:
            s["fact"] = st.args.at(0);
            s["bound"] = st.args.at(1);
            s["value"] = ext_to_json(st.value);
            break;
        case CertStep::Op::LoopClose:
            s["fact"] = st.args.at(0);
            s["bound"] = st.args.at(1);
            s["fixed"] = ext_to_json(st.fixed);
            s["entry"] = ext_to_json(st.bound2);
            break;
        case CertStep::Op::RangeViolation:
            s["bound"] = st.args.at(0);
            s["value"] = ext_to_json(st.value);
            s["min"] = ext_to_json(st.bound2);
            break;
        case CertStep::Op::CrossViolation:
            s["literal"] = literal_to_string(inst, st.literal);
            s["c"] = ext_to_json(st.value);
            s["bounds"] = st.args;
            break;
        }
        steps.push_back(std::move(s));
    }
    return {{"steps", steps}};
}

Certificate certificate_from_json(const Instance& inst, const json& j) {
    Certificate cert;
    const json& steps = field(j, "steps", "/certificate");
    if (!steps.is_array()) throw IoError("/certificate/steps", "expected a list");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        std::string w = at("/certificate/steps", i);
        const json& s = steps[i];
        const json& opj = field(s, "op", w);
        auto op = opj.is_string() ? op_from_name(opj.get<std::string>()) : std::nullopt;
        if (!op) throw IoError(at(w, "op"), "unknown step kind");
        CertStep st;
        st.op = *op;
        auto idx = [&](const char* key) { return index_from_json(field(s, key, w), at(w, key)); };
        auto idx_list = [&](const char* key) {
            const json& a = field(s, key, w);
            if (!a.is_array()) throw IoError(at(w, key), "expected a list of step indices");
            std::vector<std::size_t> out;
            for (std::size_t k = 0; k < a.size(); ++k) out.push_back(index_from_json(a[k], at(at(w, key), k)));
            return out;
        };
        auto ext = [&](const char* key) { return ext_from_json(field(s, key, w), at(w, key)); };
        auto lit = [&]() {
            const json& l = field(s, "literal", w);
            if (!l.is_string()) throw IoError(at(w, "literal"), "expected a literal name");
            return literal_from_string(inst, l.get<std::string>(), at(w, "literal"));
        };
        switch (st.op) {
        case CertStep::Op::Use: {
            st.constraint = idx("constraint");
            const json& d = field(s, "dual", w);
            if (!d.is_boolean()) throw IoError(at(w, "dual"), "expected a boolean");
            st.dual = d.get<bool>();
            break;
        }
        case CertStep::Op::Compose:
        case CertStep::Op::Min:
            st.args = idx_list("args");
            break;
        case CertStep::Op::Range:
            st.literal = lit();
            break;
        case CertStep::Op::Assume:
            st.literal = lit();
            st.value = ext("value");
            break;
        case CertStep::Op::Apply:
            st.args = {idx("fact"), idx("bound")};
            st.value = ext("value");
            break;
        case CertStep::Op::LoopClose:
            st.args = {idx("fact"), idx("bound")};
            st.fixed = ext("fixed");
            st.bound2 = ext("entry");
            break;
        case CertStep::Op::RangeViolation:
            st.args = {idx("bound")};
            st.value = ext("value");
            st.bound2 = ext("min");
            break;
        case CertStep::Op::CrossViolation:
            st.literal = lit();
            st.value = ext("c");
            st.args = idx_list("bounds");
            break;
        }
        cert.steps.push_back(std::move(st));
    }
    return cert;
}

json verdict_to_json(const Instance& inst, const Verdict& v) {
    if (v.sat) {
        json w = json::object();
        for (std::size_t i = 0; i < v.witness.size(); ++i) w[inst.names.at(i)] = surd_to_json(v.witness[i]);
        return {{"status", "SAT"}, {"witness", w}};
    }
    return {{"status", "UNSAT"}, {"certificate", certificate_to_json(inst, v.certificate)}};
}

Verdict verdict_from_json(const Instance& inst, const json& j) {
    Verdict v;
    const json& status = field(j, "status", "");
    if (status == "SAT") {
        v.sat = true;
        const json& w = field(j, "witness", "");
        if (!w.is_object()) throw IoError("/witness", "expected an object");
        if (w.size() != inst.var_count()) throw IoError("/witness", "witness must assign every variable exactly once");
        for (const auto& name : inst.names) {
            auto it = w.find(name);
            if (it == w.end()) throw IoError("/witness", "no value for '" + name + "'");
            v.witness.push_back(surd_from_json(*it, at("/witness", name)));
        }
    } else if (status == "UNSAT") {
        v.sat = false;
        v.certificate = certificate_from_json(inst, field(j, "certificate", ""));
    } else {
        throw IoError("/status", "expected \"SAT\" or \"UNSAT\"");
    }
    return v;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw IoError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json_text(ss.str());
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.where(), "JSON syntax error");
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot write file");
    out << j.dump(2) << "\n";
}

}  // namespace m2sat
