#pragma once

// JSON readers and writers for the command-line tool and golden tests.
// Distances are strings in the format printed by format(m, d); matrices are
// row-major arrays. Object keys are sorted, so dump() is canonical.

#include "fraisse.hpp"
#include "topology.hpp"
#include "urysohn.hpp"
#include "zariski.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

using Json = nlohmann::json;

// Malformed or inconsistent input; the tool maps this to a usage error.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string digest(const Json& j) { return fnv1a_hex(j.dump()); }

// ---- monoids and values ---------------------------------------------------

// "rational", "integer", "lex_pair", "quad_ext[:n]", "rational_truncated:b".
inline Monoid parse_monoid_spec(const std::string& text)
{
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (name == "rational" && arg.empty()) return Monoid::rational();
        if (name == "integer" && arg.empty()) return Monoid::integer();
        if (name == "lex_pair" && arg.empty()) return Monoid::lex_pair();
        if (name == "quad_ext") return Monoid::quad_ext(arg.empty() ? 2 : std::stol(arg));
        if ((name == "rational_truncated" || name == "truncated") && !arg.empty())
            return Monoid::truncated(parse_rational(arg));
    } catch (const std::exception& e) {
        throw InputError("bad monoid '" + text + "': " + e.what());
    }
    throw InputError("unknown monoid kind '" + text + "'");
}

inline std::string monoid_spec(const Monoid& m)
{
    switch (m.kind) {
    case Kind::rational_truncated: return "rational_truncated:" + format_rational(m.bound);
    case Kind::quad_ext: return "quad_ext:" + std::to_string(m.radicand);
    default: return kind_name(m.kind);
    }
}

inline Monoid parse_monoid(const Json& j)
{
    if (j.is_string()) return parse_monoid_spec(j.get<std::string>());
    if (j.is_object() && j.contains("kind")) {
        std::string spec = j.at("kind").get<std::string>();
        if (j.contains("bound")) spec += ":" + (j["bound"].is_string() ? j["bound"].get<std::string>() : j["bound"].dump());
        if (j.contains("radicand")) spec += ":" + j["radicand"].dump();
        return parse_monoid_spec(spec);
    }
    throw InputError("monoid must be a string or an object with a kind");
}

inline Rational json_rational(const Json& j)
{
    try {
        if (j.is_number_integer()) return Rational(j.get<long long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw InputError(std::string("bad rational: ") + e.what());
    }
    throw InputError("rationals must be integers or strings like \"3/2\"");
}

// Accepts the printed forms "3/2", "(1,1/2)", "1+2a", "2a", or an integer.
inline Distance parse_distance(const Monoid& m, const Json& j)
{
    Distance d;
    if (j.is_number_integer()) {
        d = Distance(Rational(j.get<long long>()));
    } else if (j.is_array() && j.size() == 2) {
        d = Distance(json_rational(j[0]), json_rational(j[1]));
    } else if (j.is_string()) {
        std::string t = j.get<std::string>();
        try {
            if (!t.empty() && t.front() == '(' && t.back() == ')') {
                auto comma = t.find(',');
                if (comma == std::string::npos) throw InputError("pair without comma");
                d = Distance(parse_rational(t.substr(1, comma - 1)), parse_rational(t.substr(comma + 1, t.size() - comma - 2)));
            } else if (!t.empty() && t.back() == 'a') {
                auto plus = t.rfind('+');
                if (plus == std::string::npos)
                    d = Distance(Rational(0), parse_rational(t.substr(0, t.size() - 1)));
                else
                    d = Distance(parse_rational(t.substr(0, plus)), parse_rational(t.substr(plus + 1, t.size() - plus - 2)));
            } else {
                d = Distance(parse_rational(t));
            }
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError("bad distance '" + t + "': " + e.what());
        }
    } else {
        throw InputError("distance must be a string, an integer or a pair");
    }
    if (!valid_value(m, d)) throw InputError("distance " + j.dump() + " is not in the " + kind_name(m.kind) + " monoid");
    return d;
}

inline Json distance_json(const Monoid& m, const Distance& d) { return format(m, d); }

// "0", "0+", "3/2", "3/2+", "alpha", "alpha@2", "empty".
inline EndSegment parse_segment(const Monoid& m, const std::string& t)
{
    try {
        if (t == "empty") return seg_empty(m);
        if (t == "alpha") return seg_boundary(m, 2);
        if (t.rfind("alpha@", 0) == 0) return seg_boundary(m, 2, Distance(parse_rational(t.substr(6))));
        if (!t.empty() && t.back() == '+') return seg_open(m, parse_distance(m, Json(t.substr(0, t.size() - 1))));
        return seg_closed(m, parse_distance(m, Json(t)));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("bad end segment '" + t + "': " + e.what());
    }
}

// ---- spaces and structures ------------------------------------------------

inline std::vector<std::string> json_labels(const Json& j, const char* what)
{
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array of labels");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw InputError(std::string(what) + " must contain strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

// {"monoid": ..., "points": [...], "distances": [[...], ...]}. The table is
// taken as given, so invalid spaces can be loaded and reported.
inline FinSpace parse_space(const Json& j, const std::optional<Monoid>& override_monoid = {})
{
    if (!j.is_object()) throw InputError("space must be an object");
    Monoid m = override_monoid ? *override_monoid
                               : (j.contains("monoid") ? parse_monoid(j["monoid"]) : Monoid::rational());
    auto pts = json_labels(j.value("points", Json::array()), "points");
    const Json& rows = j.value("distances", Json::array());
    if (!rows.is_array() || rows.size() != pts.size()) throw InputError("distances must be a square matrix over points");
    std::vector<std::vector<Distance>> table;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != pts.size()) throw InputError("distances must be a square matrix over points");
        std::vector<Distance> r;
        for (const auto& v : row) r.push_back(parse_distance(m, v));
        table.push_back(std::move(r));
    }
    try {
        return FinSpace(m, pts, table);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad space: ") + e.what());
    }
}

inline Json space_json(const FinSpace& s)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < s.size(); ++k) r.push_back(distance_json(s.monoid(), s.d(i, k)));
        rows.push_back(r);
    }
    return {{"monoid", monoid_spec(s.monoid())}, {"points", s.labels()}, {"distances", rows}};
}

inline Json map_json(const PartialMap& f)
{
    Json out = Json::array();
    for (const auto& [a, b] : f.pairs()) out.push_back({a, b});
    return out;
}

// [["a","b"], ...] or {"a": "b", ...}.
inline PartialMap parse_map(const Json& j)
{
    PartialMap f;
    try {
        if (j.is_object()) {
            for (const auto& [k, v] : j.items()) f.add(k, v.get<std::string>());
        } else if (j.is_array()) {
            for (const auto& p : j) {
                if (!p.is_array() || p.size() != 2) throw InputError("map entries must be pairs");
                f.add(p[0].get<std::string>(), p[1].get<std::string>());
            }
        } else {
            throw InputError("map must be an object or a list of pairs");
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("bad map: ") + e.what());
    }
    return f;
}

// {"signature": {"E": 2}, "points": [...], "relations": {"E": [[...], ...]}}.
inline RelStructure parse_structure(const Json& j)
{
    if (!j.is_object()) throw InputError("structure must be an object");
    std::vector<std::pair<std::string, int>> sig;
    const Json& js = j.value("signature", Json{{"E", 2}});
    if (!js.is_object()) throw InputError("signature must map relation names to arities");
    for (const auto& [name, ar] : js.items()) sig.emplace_back(name, ar.get<int>());
    try {
        RelStructure out(sig);
        for (const auto& p : json_labels(j.value("points", Json::array()), "points")) out.add_point(p);
        if (j.contains("relations"))
            for (const auto& [name, tuples] : j["relations"].items())
                for (const auto& t : tuples) out.add_tuple(name, json_labels(t, "relation tuple"));
        return out;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("bad structure: ") + e.what());
    }
}

inline Json structure_json(const RelStructure& s)
{
    Json sig = Json::object(), rels = Json::object();
    for (const auto& [name, ar] : s.signature()) {
        sig[name] = ar;
        Json ts = Json::array();
        for (const auto& t : s.tuples(name)) ts.push_back(t);
        rels[name] = ts;
    }
    return {{"signature", sig}, {"points", s.points()}, {"relations", rels}};
}

// ---- words ----------------------------------------------------------------

// A string "alpha x x^-1 beta" or an array of such tokens.
inline GroupWord parse_word_json(const Json& j)
{
    std::string text;
    if (j.is_string()) {
        text = j.get<std::string>();
    } else if (j.is_array()) {
        for (const auto& t : j) {
            if (!t.is_string()) throw InputError("word tokens must be strings");
            text += t.get<std::string>() + " ";
        }
    } else {
        throw InputError("word must be a string or an array of tokens");
    }
    try {
        return parse_word(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad word: ") + e.what());
    }
}

// ---- transcripts ----------------------------------------------------------

inline Json pairs_json(const std::vector<std::pair<PointId, PointId>>& ps)
{
    Json out = Json::array();
    for (const auto& [a, b] : ps) out.push_back({a, b});
    return out;
}

inline std::vector<std::pair<PointId, PointId>> parse_pairs(const Json& j)
{
    std::vector<std::pair<PointId, PointId>> out;
    for (const auto& p : j) out.emplace_back(p.at(0).get<PointId>(), p.at(1).get<PointId>());
    return out;
}

inline Json transcript_json(const UrysohnSession& s)
{
    const Monoid& m = s.monoid();
    Json ev = Json::array();
    for (const auto& e : s.transcript()) {
        Json x;
        switch (e.op) {
        case SessionEvent::Op::realize: x["op"] = "realize"; break;
        case SessionEvent::Op::realize_free: x["op"] = "realize_free"; break;
        case SessionEvent::Op::extend: x["op"] = "extend"; break;
        }
        if (e.op == SessionEvent::Op::extend) {
            x["map"] = pairs_json(e.map);
            x["x"] = e.x;
            x["inverse"] = e.inverse;
        } else {
            x["base"] = e.base;
            Json ds = Json::array();
            for (const auto& d : e.dists) ds.push_back(distance_json(m, d));
            x["dists"] = ds;
        }
        x["result"] = e.result;
        ev.push_back(x);
    }
    return {{"session", "urysohn"}, {"monoid", monoid_spec(m)}, {"seed", s.seed()}, {"events", ev}};
}

inline Json transcript_json(const LimitSession& s)
{
    Json ev = Json::array();
    for (const auto& e : s.transcript()) {
        Json x;
        x["op"] = e.op == LimitSession::Event::Op::realize ? "realize" : "extend";
        if (e.op == LimitSession::Event::Op::extend) {
            x["map"] = pairs_json(e.map);
            x["x"] = e.x;
            x["inverse"] = e.inverse;
        }
        x["row"] = e.row;
        x["result"] = e.result;
        ev.push_back(x);
    }
    return {{"session", s.kind() == LimitSession::Kind::graph ? "graph" : "tournament"},
            {"seed", s.seed()},
            {"events", ev}};
}

inline std::vector<SessionEvent> parse_urysohn_events(const Monoid& m, const Json& j)
{
    std::vector<SessionEvent> out;
    try {
        for (const auto& x : j) {
            SessionEvent e;
            std::string op = x.at("op").get<std::string>();
            if (op == "realize")
                e.op = SessionEvent::Op::realize;
            else if (op == "realize_free")
                e.op = SessionEvent::Op::realize_free;
            else if (op == "extend")
                e.op = SessionEvent::Op::extend;
            else
                throw InputError("unknown transcript op " + op);
            if (e.op == SessionEvent::Op::extend) {
                e.map = parse_pairs(x.at("map"));
                e.x = x.at("x").get<PointId>();
                e.inverse = x.at("inverse").get<bool>();
            } else {
                e.base = x.at("base").get<std::vector<PointId>>();
                for (const auto& d : x.at("dists")) e.dists.push_back(parse_distance(m, d));
            }
            e.result = x.at("result").get<PointId>();
            out.push_back(std::move(e));
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("bad transcript: ") + e.what());
    }
    return out;
}

inline std::vector<LimitSession::Event> parse_limit_events(const Json& j)
{
    std::vector<LimitSession::Event> out;
    try {
        for (const auto& x : j) {
            LimitSession::Event e;
            std::string op = x.at("op").get<std::string>();
            if (op != "realize" && op != "extend") throw InputError("unknown transcript op " + op);
            e.op = op == "realize" ? LimitSession::Event::Op::realize : LimitSession::Event::Op::extend;
            if (e.op == LimitSession::Event::Op::extend) {
                e.map = parse_pairs(x.at("map"));
                e.x = x.at("x").get<PointId>();
                e.inverse = x.at("inverse").get<bool>();
            }
            e.row = x.value("row", std::vector<int>{});
            e.result = x.at("result").get<PointId>();
            out.push_back(std::move(e));
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("bad transcript: ") + e.what());
    }
    return out;
}

} // namespace ury
