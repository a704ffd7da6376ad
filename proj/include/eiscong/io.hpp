#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <openssl/evp.h>
#include <unistd.h>

#include <json.hpp>

#include "eiscong/congruence.hpp"

namespace eiscong::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Fields, labels, elements

/// "rational", "rq<D>", or a JSON file {"id": ..., "table": [[[..]]]}.
/// The same id always yields the same object, so characters built from
/// separately parsed labels can be combined.
inline std::shared_ptr<NumberField> parse_field(const std::string& spec) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<NumberField>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(spec);
    if (it != registry.end()) return it->second;
    std::shared_ptr<NumberField> f;
    if (spec == "rational" || spec == "Q") {
        f = NumberField::rational();
    } else if (spec.rfind("rq", 0) == 0 && spec.size() > 2 &&
               spec.find_first_not_of("0123456789", 2) == std::string::npos) {
        f = NumberField::real_quadratic(Int(spec.substr(2)));
    } else {
        std::ifstream in(spec);
        require(in.good(), ErrorKind::parse, "unknown field id and no such file: " + spec);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            fail(ErrorKind::parse, "field file is not JSON: " + std::string(e.what()));
        }
        require(j.is_object() && j.contains("table") && j.contains("id"), ErrorKind::parse,
                "field file needs \"id\" and \"table\"");
        std::vector<std::vector<IntVec>> table;
        for (const auto& row : j.at("table")) {
            std::vector<IntVec> r;
            for (const auto& v : row) {
                IntVec e;
                for (const auto& x : v) e.push_back(x.is_string() ? Int(x.get<std::string>()) : Int(x.get<long>()));
                r.push_back(e);
            }
            table.push_back(r);
        }
        f = NumberField::from_table(table, j.at("id").get<std::string>());
    }
    // Aliases and files naming a known id resolve to the registered object.
    auto known = registry.find(f->id());
    if (known != registry.end()) f = known->second;
    registry.emplace(spec, f);
    registry.emplace(f->id(), f);
    return f;
}

/// Modulus from an ideal digest or a single integer n meaning (n).
inline Ideal parse_ideal(const NumberField& f, const std::string& text) { return Ideal::parse_digest(f, text); }

/// Element "a:b:..." in the integral basis.
inline FieldElement parse_element(const NumberField& f, const std::string& text) {
    RatVec v;
    std::size_t pos = 0;
    while (true) {
        auto c = text.find(':', pos);
        v.push_back(parse_rat(text.substr(pos, c == std::string::npos ? std::string::npos : c - pos)));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    require(v.size() <= static_cast<std::size_t>(f.degree()), ErrorKind::parse, "element has too many coordinates");
    v.resize(static_cast<std::size_t>(f.degree()), 0);
    return f.element(v);
}

inline std::string format_element(const FieldElement& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ":" : "") + to_string(x[i]);
    return s;
}

/// "trivial" or "F:<id>/m:<digest>/idx:<k>" (the "F:" part optional).
inline Character parse_character(const NumberField& f, const std::string& label) {
    if (label == "trivial") return trivial_character(f);
    std::string rest = label;
    if (rest.rfind("F:", 0) == 0) {
        auto slash = rest.find("/m:");
        require(slash != std::string::npos, ErrorKind::parse, "bad character label: " + label);
        require(rest.substr(2, slash - 2) == f.id(), ErrorKind::parse, "character label names another field: " + label);
        rest = rest.substr(slash + 1);
    }
    require(rest.rfind("m:", 0) == 0, ErrorKind::parse, "bad character label: " + label);
    auto idx = rest.find("/idx:");
    require(idx != std::string::npos, ErrorKind::parse, "bad character label: " + label);
    Ideal m = parse_ideal(f, rest.substr(2, idx - 2));
    Rat k = parse_rat(rest.substr(idx + 5));
    require(k.get_den() == 1 && k >= 0, ErrorKind::parse, "bad character index: " + label);
    auto g = ray_class_group(f, m);
    const auto& inv = g->invariants();
    require(k.get_num() < g->order(), ErrorKind::parse, "character index out of range: " + label);
    IntVec a(inv.size());
    Int r = k.get_num();
    for (std::size_t j = inv.size(); j-- > 0;) {
        a[j] = r % inv[j];
        r /= inv[j];
    }
    return Character(g, a);
}

// ---------------------------------------------------------------------------
// Exact JSON values

inline json to_json(const Rat& r) { return to_string(r); }

/// Rational string when rational, otherwise power-basis coefficient strings.
inline json to_json(const Cyclo& x) {
    Cyclo s = x.simplified();
    json j;
    j["conductor"] = s.conductor();
    if (s.is_rational()) j["value"] = to_string(s.rational());
    else {
        json arr = json::array();
        for (const auto& c : s.coeffs()) arr.push_back(to_string(c));
        j["value"] = arr;
    }
    return j;
}

inline Cyclo cyclo_from_json(const json& j) {
    require(j.is_object() && j.contains("value"), ErrorKind::parse, "cyclotomic value needs \"value\"");
    if (j.at("value").is_string()) return Cyclo(parse_rat(j.at("value").get<std::string>()));
    long n = j.value("conductor", 1L);
    RatVec c;
    for (const auto& v : j.at("value")) c.push_back(parse_rat(v.get<std::string>()));
    c.resize(static_cast<std::size_t>(Cyclo::degree_of(n)), 0);
    return Cyclo(n, c);
}

inline json ideal_json(const Ideal& a) {
    json j;
    j["hnf"] = a.digest();
    if (!a.is_zero()) j["norm"] = to_string(a.norm());
    return j;
}

inline json residue_map_json(const ResidueMap& m) {
    json g = json::array();
    for (const auto& c : m.factor()) g.push_back(c.get_str());
    return {{"l", m.l().get_str()}, {"conductor", m.conductor()}, {"index", m.index()}, {"factor", g},
            {"residue_degree", m.residue_degree()}};
}

inline json character_json(const Character& c) {
    json sig = json::array();
    for (int s : c.signature()) sig.push_back(s);
    json csig = json::array();
    for (int s : c.conductor().signature) csig.push_back(s);
    return {{"label", c.label()},
            {"modulus", c.modulus().digest()},
            {"order", c.order()},
            {"signature", sig},
            {"conductor", c.conductor().finite.digest()},
            {"primitive", c.is_primitive()}};
}

inline json table_json(const CoefficientTable& t) {
    json arr = json::array();
    for (const auto& [n, v] : t.entries()) {
        json e = to_json(v);
        e["ideal"] = n.digest();
        e["norm"] = n.norm_int().get_str().size() < 18 ? json(to_long(n.norm_int())) : json(n.norm_int().get_str());
        arr.push_back(e);
    }
    return {{"bound", t.bound()}, {"coefficients", arr}};
}

inline json candidate_json(const Candidate& c) {
    json j = {{"l", c.l.get_str()},
              {"map", residue_map_json(c.map)},
              {"integral", c.integral},
              {"ord_positive", c.ord_positive},
              {"l_gt_k_plus_1", c.l_gt_k_plus_1},
              {"unramified", c.unramified},
              {"degree_condition", c.degree_ok},
              {"theorem_applicable", c.theorem_applicable()},
              {"newform_possible", c.newform_possible()}};
    if (!c.integral) j["note"] = "l-adically non-integral L-ratio";
    if (c.ord_positive)
        j["newform"] = {{"first_factor_vanishes", c.newform.first_vanishes},
                        {"second_factor_vanishes", c.newform.second_vanishes},
                        {"taylor_quantity_vanishes", c.newform.taylor_vanishes},
                        {"case", c.newform.which_case()}};
    return j;
}

inline json report_json(const CongruenceReport& r) {
    json cands = json::array();
    for (const auto& c : r.candidates) cands.push_back(candidate_json(c));
    json fails = json::array();
    for (const auto& s : r.hypothesis_failures) fails.push_back(s);
    json applicable = json::array();
    for (const auto& l : r.applicable_primes()) applicable.push_back(l.get_str());
    json j = {{"field", r.field},
              {"eta", r.eta},
              {"psi", r.psi},
              {"k", r.k},
              {"p", r.prime},
              {"hypotheses_met", r.hypotheses_met()},
              {"hypothesis_failures", fails},
              {"l_value", to_json(r.l_value)},
              {"euler_factor", to_json(r.euler)},
              {"second_factor", to_json(r.second)},
              {"x", to_json(r.x)},
              {"norm", to_string(r.norm)},
              {"candidates", cands},
              {"theorem_applicable_primes", applicable},
              {"newform_possible", r.any_newform_possible()},
              {"degree_condition", r.degree_rule}};
    if (!r.hypotheses_met()) j["mode"] = "outside theorem hypotheses";
    return j;
}

inline json verification_json(const VerificationReport& v) {
    json ps = json::array();
    for (const auto& p : v.primes) {
        json e = {{"coefficient_factor", p.coefficient_factor},
                  {"orbit", p.orbit},
                  {"above", residue_map_json(p.character_map)},
                  {"passed", p.passed},
                  {"checked", p.checked}};
        e["counterexample"] = p.counterexample ? json(*p.counterexample) : json(nullptr);
        ps.push_back(e);
    }
    json sk = json::array();
    for (const auto& s : v.skipped) sk.push_back(s);
    return {{"l", v.l.get_str()}, {"bound", v.bound}, {"skipped", sk}, {"primes", ps}, {"pass", v.all_pass()}};
}

// ---------------------------------------------------------------------------
// Eigenform files

namespace detail {

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& msg) {
    fail(ErrorKind::parse, "schema violation at " + (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

inline const json& field_at(const json& j, const std::string& ptr, const char* key) {
    if (!j.contains(key)) schema_error(ptr, std::string("missing \"") + key + "\"");
    return j.at(key);
}

inline std::string string_at(const json& j, const std::string& ptr, const char* key) {
    const json& v = field_at(j, ptr, key);
    if (!v.is_string()) schema_error(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
}

inline Rat rat_at(const json& v, const std::string& ptr) {
    if (v.is_number_integer()) return Rat(Int(v.dump()));
    if (!v.is_string()) schema_error(ptr, "expected an exact number string");
    try {
        return parse_rat(v.get<std::string>());
    } catch (const Error&) {
        schema_error(ptr, "not an exact rational");
    }
}

} // namespace detail

inline constexpr const char* kEigenformSchema = "1";

inline EigenformData parse_eigenform(const json& j) {
    using namespace detail;
    if (!j.is_object()) schema_error("", "expected an object");
    EigenformData d;
    d.schema_version = string_at(j, "", "schema_version");
    if (d.schema_version != kEigenformSchema) schema_error("/schema_version", "unsupported version " + d.schema_version);
    d.field = string_at(j, "", "field");
    d.level = string_at(j, "", "level");
    const json& w = field_at(j, "", "weight");
    if (!w.is_number_integer()) schema_error("/weight", "expected an integer");
    d.k = w.get<long>();
    d.character = string_at(j, "", "character");
    const json& cf = field_at(j, "", "coefficient_field");
    if (!cf.is_object()) schema_error("/coefficient_field", "expected an object");
    const json& poly = field_at(cf, "/coefficient_field", "polynomial");
    if (!poly.is_array() || poly.size() < 2) schema_error("/coefficient_field/polynomial", "expected at least two coefficients");
    for (std::size_t i = 0; i < poly.size(); ++i)
        d.polynomial.push_back(rat_at(poly[i], "/coefficient_field/polynomial/" + std::to_string(i)));
    if (d.polynomial.back() != 1) schema_error("/coefficient_field/polynomial", "polynomial must be monic");
    const json& ev = field_at(j, "", "eigenvalues");
    if (!ev.is_array()) schema_error("/eigenvalues", "expected an array");
    const std::size_t deg = d.polynomial.size() - 1;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const std::string ptr = "/eigenvalues/" + std::to_string(i);
        if (!ev[i].is_object()) schema_error(ptr, "expected an object");
        std::string prime = string_at(ev[i], ptr, "prime");
        const json& val = field_at(ev[i], ptr, "value");
        if (!val.is_array()) schema_error(ptr + "/value", "expected an array");
        RatVec v;
        for (std::size_t t = 0; t < val.size(); ++t) v.push_back(rat_at(val[t], ptr + "/value/" + std::to_string(t)));
        require(v.size() == deg, ErrorKind::validation,
                "eigenvalue for prime " + prime + " has " + std::to_string(v.size()) + " coordinates, expected " +
                    std::to_string(deg));
        require(seen.insert(prime).second, ErrorKind::validation, "prime " + prime + " listed twice");
        d.eigenvalues.emplace_back(prime, v);
    }
    d.provenance = j.value("provenance", "");
    static const std::set<std::string> known{"schema_version", "field",       "level",      "weight",
                                             "character",      "coefficient_field", "eigenvalues", "provenance"};
    for (const auto& [key, v] : j.items())
        if (!known.count(key)) d.extra[key] = v.dump();
    return d;
}

inline EigenformData parse_eigenform_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::parse, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, path + " is not valid JSON: " + e.what());
    }
    return parse_eigenform(j);
}

inline json eigenform_json(const EigenformData& d) {
    json poly = json::array();
    for (const auto& c : d.polynomial) poly.push_back(to_string(c));
    json ev = json::array();
    for (const auto& [p, v] : d.eigenvalues) {
        json arr = json::array();
        for (const auto& c : v) arr.push_back(to_string(c));
        ev.push_back({{"prime", p}, {"value", arr}});
    }
    json j = {{"schema_version", d.schema_version}, {"field", d.field},     {"level", d.level},
              {"weight", d.k},                      {"character", d.character},
              {"coefficient_field", {{"polynomial", poly}}},
              {"eigenvalues", ev},                  {"provenance", d.provenance}};
    for (const auto& [key, v] : d.extra) j[key] = json::parse(v);
    return j;
}

// ---------------------------------------------------------------------------
// Content-addressed cache

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    require(ctx && EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1 &&
                EVP_DigestUpdate(ctx.get(), data.data(), data.size()) == 1 &&
                EVP_DigestFinal_ex(ctx.get(), md, &len) == 1,
            ErrorKind::structural, "SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

/// Canonical text of a request: keys sorted, no whitespace.
inline std::string canonical(const json& request) { return request.dump(); }

inline std::string request_digest(const json& request) { return sha256_hex(canonical(request)); }

class Cache {
public:
    Cache() = default;
    explicit Cache(std::filesystem::path dir, std::ostream* warn = &std::cerr) : dir_(std::move(dir)), warn_(warn) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        auto probe = dir_ / (".probe-" + std::to_string(::getpid()));
        std::ofstream out(probe);
        if (ec || !out.good()) {
            if (warn_) *warn_ << "warning: cache directory " << dir_.string() << " is not writable; cache disabled\n";
            return;
        }
        out.close();
        std::filesystem::remove(probe, ec);
        enabled_ = true;
    }

    bool enabled() const { return enabled_; }
    const std::filesystem::path& dir() const { return dir_; }

    /// Validated entry or nothing; corrupt and mismatched entries are discarded.
    std::optional<json> get(const json& request) const {
        if (!enabled_) return std::nullopt;
        const std::string digest = request_digest(request);
        auto path = dir_ / (digest + ".json");
        if (!std::filesystem::exists(path)) return std::nullopt;
        try {
            std::ifstream in(path);
            json j;
            in >> j;
            if (j.at("digest").get<std::string>() == digest && request_digest(j.at("request")) == digest &&
                j.at("request") == request && j.contains("result"))
                return j.at("result");
        } catch (const std::exception&) {
        }
        if (warn_) *warn_ << "warning: discarding corrupt cache entry " << path.string() << "\n";
        std::error_code ec;
        std::filesystem::remove(path, ec);
        return std::nullopt;
    }

    /// Write through a temporary file and an atomic rename.
    void put(const json& request, const json& result) const {
        if (!enabled_) return;
        const std::string digest = request_digest(request);
        json entry = {{"digest", digest}, {"request", request}, {"result", result}};
        std::random_device rd;
        auto tmp = dir_ / (".tmp-" + digest + "-" + std::to_string(rd()));
        {
            std::ofstream out(tmp);
            out << entry.dump();
            if (!out.good()) {
                if (warn_) *warn_ << "warning: cache write failed\n";
                return;
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, dir_ / (digest + ".json"), ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }

    std::size_t clear() const {
        std::size_t n = 0;
        if (dir_.empty() || !std::filesystem::exists(dir_)) return 0;
        for (const auto& e : std::filesystem::directory_iterator(dir_)) {
            if (!e.is_regular_file() || e.path().extension() != ".json") continue;
            std::error_code ec;
            if (std::filesystem::remove(e.path(), ec)) ++n;
        }
        return n;
    }

    std::size_t size() const {
        std::size_t n = 0;
        if (dir_.empty() || !std::filesystem::exists(dir_)) return 0;
        for (const auto& e : std::filesystem::directory_iterator(dir_))
            if (e.is_regular_file() && e.path().extension() == ".json") ++n;
        return n;
    }

private:
    std::filesystem::path dir_;
    std::ostream* warn_ = &std::cerr;
    bool enabled_ = false;
};

} // namespace eiscong::io
