// eiscong: command-line front end. Every command prints one JSON document.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eiscong/eiscong.hpp"

using namespace eiscong;
using io::json;

namespace {

enum Exit { ok = 0, error = 1, hypotheses = 2, incomplete = 3, usage = 64 };

struct Global {
    std::string field = "rational";
    std::string cache_dir;
    int indent = 2;
    bool explain = false;
};

struct Outcome {
    json result;
    int code = Exit::ok;
};

void emit(const Global& g, const json& j) { std::cout << j.dump(g.indent) << "\n"; }

int emit_error(const Global& g, ErrorKind kind, const std::string& msg) {
    emit(g, {{"error_kind", to_string(kind)}, {"message", msg}});
    if (kind == ErrorKind::incomplete_data) return Exit::incomplete;
    if (kind == ErrorKind::usage) return Exit::usage;
    return Exit::error;
}

/// Run a computation through the cache. The request must already be canonical
/// (labels and digests, not raw user text).
int run(const Global& g, json request, const std::function<Outcome()>& compute) {
    std::string dir = g.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("EISCONG_CACHE")) dir = env;
    std::optional<io::Cache> cache;
    if (!dir.empty()) cache.emplace(dir);
    std::string provenance = "computed";
    Outcome out;
    std::optional<json> hit;
    if (cache) hit = cache->get(request);
    if (hit) {
        out.result = hit->at("result");
        out.code = hit->at("code").get<int>();
        provenance = "cache";
    } else {
        out = compute();
        if (cache) cache->put(request, {{"result", out.result}, {"code", out.code}});
    }
    json shown = out.result;
    if (g.explain) shown["provenance"] = provenance;
    emit(g, shown);
    return out.code;
}

std::pair<FieldElement, FieldElement> parse_cusp(const NumberField& f, const std::string& text) {
    auto comma = text.find(',');
    require(comma != std::string::npos, ErrorKind::parse, "cusp must be \"alpha,gamma\"");
    return {io::parse_element(f, text.substr(0, comma)), io::parse_element(f, text.substr(comma + 1))};
}

SeriesKind parse_series(const std::string& s) {
    if (s == "base") return SeriesKind::base;
    if (s == "raised") return SeriesKind::raised;
    if (s == "delta-eta") return SeriesKind::delta_eta;
    if (s == "delta-psi") return SeriesKind::delta_psi;
    fail(ErrorKind::usage, "unknown series " + s);
}

json field_json(const NumberField& f) {
    json j = {{"id", f.id()}, {"degree", f.degree()}, {"discriminant", f.discriminant().get_str()}};
    if (f.degree() == 2) {
        const auto& u = f.units();
        j["units"] = {{"fundamental", io::format_element(u.fundamental)},
                      {"fundamental_norm", u.fundamental_norm},
                      {"totally_positive", io::format_element(u.totally_positive)}};
    }
    return j;
}

json group_json(const ClassGroup& g) {
    json inv = json::array(), reps = json::array();
    for (const auto& x : g.invariants()) inv.push_back(x.get_str());
    for (const auto& r : g.representatives()) reps.push_back(r.digest());
    return {{"order", g.size()}, {"invariants", inv}, {"representatives", reps}};
}

json datum_json(const CuspDatum& x) {
    return {{"lambda", x.lambda},
            {"i", x.i},
            {"alpha", io::format_element(x.alpha)},
            {"beta", io::format_element(x.beta)},
            {"gamma", io::format_element(x.gamma)},
            {"delta", io::format_element(x.delta)},
            {"n1", x.n1.digest()},
            {"n2", x.n2.digest()},
            {"t", x.t.digest()},
            {"c", x.c.digest()}};
}

} // namespace

int main(int argc, char** argv) {
    Global g;
    CLI::App app{"Hilbert Eisenstein series data and congruence primes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--field", g.field, "rational, rq<D>, or a field JSON file");
    app.add_option("--cache-dir", g.cache_dir, "result cache directory (default: $EISCONG_CACHE)");
    app.add_option("--json-indent", g.indent, "JSON indent, -1 for compact");
    app.add_flag("--explain", g.explain, "add a provenance field");

    std::string modulus = "1", label, eta = "trivial", psi = "trivial", prime, cusp = "0,1", series = "base",
                convention = "theorem", stabilize, raise, report_path, eigenform_path, hecke_n;
    long k = 2, bound = 10, lambda = -1;
    std::string l_opt;
    bool primitive_only = false;

    auto* field_cmd = app.add_subcommand("field", "field invariants");
    auto* cg_cmd = app.add_subcommand("classgroup", "wide and narrow class groups");
    cg_cmd->add_option("--modulus", modulus, "representatives coprime to this ideal");
    auto* chars_cmd = app.add_subcommand("chars", "narrow ray class characters");
    chars_cmd->add_option("--modulus", modulus, "ideal digest or integer")->required();
    chars_cmd->add_flag("--primitive", primitive_only, "primitive characters only");
    auto* lv_cmd = app.add_subcommand("lvalue", "Hecke L-value L(chi, 1 - k)");
    lv_cmd->add_option("--char", label)->required();
    lv_cmd->add_option("--k", k)->required();
    auto* gauss_cmd = app.add_subcommand("gauss", "Gauss sum of a character");
    gauss_cmd->add_option("--char", label)->required();

    auto* eis_cmd = app.add_subcommand("eis", "Eisenstein series data");
    eis_cmd->require_subcommand(1);
    eis_cmd->fallthrough();
    auto series_opts = [&](CLI::App* c) {
        c->add_option("--eta", eta);
        c->add_option("--psi", psi);
        c->add_option("--k", k)->required();
    };
    auto* coeffs_cmd = eis_cmd->add_subcommand("coeffs", "Fourier coefficients up to a norm bound");
    series_opts(coeffs_cmd);
    coeffs_cmd->add_option("--bound", bound)->required();
    coeffs_cmd->add_option("--p", prime, "prime label for --stabilize");
    coeffs_cmd->add_option("--stabilize", stabilize, "eta or psi");
    coeffs_cmd->add_option("--raise", raise, "level-raise by this ideal");
    auto* hecke_cmd = eis_cmd->add_subcommand("hecke", "apply T(n) to a coefficient table");
    series_opts(hecke_cmd);
    hecke_cmd->add_option("--n", hecke_n)->required();
    hecke_cmd->add_option("--bound", bound)->required();
    auto* infty_cmd = eis_cmd->add_subcommand("infty", "constant terms at infinity");
    series_opts(infty_cmd);
    infty_cmd->add_option("--p", prime, "prime label for --stabilize");
    infty_cmd->add_option("--stabilize", stabilize, "eta or psi");
    auto* cusp_cmd = eis_cmd->add_subcommand("cusp-term", "constant term at a finite cusp");
    series_opts(cusp_cmd);
    cusp_cmd->add_option("--cusp", cusp, "alpha,gamma with elements a:b");
    cusp_cmd->add_option("--lambda", lambda, "narrow class index (default: all)");
    cusp_cmd->add_option("--series", series, "base, raised, delta-eta, delta-psi");
    cusp_cmd->add_option("--p", prime);
    cusp_cmd->add_option("--sign-convention", convention, "theorem or proof");

    auto* search_cmd = app.add_subcommand("search", "congruence prime search");
    series_opts(search_cmd);
    search_cmd->add_option("--p", prime)->required();
    auto* verify_cmd = app.add_subcommand("verify", "check eigenform data against a search report");
    verify_cmd->add_option("--report", report_path)->required();
    verify_cmd->add_option("--eigenform", eigenform_path)->required();
    verify_cmd->add_option("--bound", bound)->required();
    verify_cmd->add_option("--l", l_opt, "override the report's primes");

    auto* cache_cmd = app.add_subcommand("cache", "cache maintenance");
    cache_cmd->require_subcommand(1);
    cache_cmd->fallthrough();
    auto* cache_clear = cache_cmd->add_subcommand("clear", "delete all entries");
    auto* cache_stats = cache_cmd->add_subcommand("stats", "count entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Exit::usage;
    }
    if (g.indent < 0) g.indent = -1;

    try {
        auto F = io::parse_field(g.field);
        const NumberField& f = *F;
        auto make_series = [&] {
            return EisensteinSeries(io::parse_character(f, eta), io::parse_character(f, psi), k);
        };
        json base_req = {{"field", f.id()}};

        if (*field_cmd) return run(g, {{"command", "field"}, {"field", f.id()}}, [&] { return Outcome{field_json(f)}; });

        if (*cg_cmd) {
            Ideal m = io::parse_ideal(f, modulus);
            return run(g, {{"command", "classgroup"}, {"field", f.id()}, {"modulus", m.digest()}}, [&] {
                auto cd = class_groups(f, m);
                return Outcome{{{"field", f.id()},
                                {"coprime_to", m.digest()},
                                {"h", cd.h()},
                                {"h_plus", cd.h_plus()},
                                {"wide", group_json(*cd.wide)},
                                {"narrow", group_json(*cd.narrow)}}};
            });
        }

        if (*chars_cmd) {
            Ideal m = io::parse_ideal(f, modulus);
            json req = {{"command", "chars"}, {"field", f.id()}, {"modulus", m.digest()}, {"primitive", primitive_only}};
            return run(g, req, [&] {
                auto grp = ray_class_group(f, m);
                json inv = json::array(), list = json::array();
                for (const auto& x : grp->invariants()) inv.push_back(x.get_str());
                for (const auto& c : characters_of(grp))
                    if (!primitive_only || c.is_primitive()) list.push_back(io::character_json(c));
                return Outcome{{{"modulus", m.digest()}, {"invariants", inv}, {"characters", list}}};
            });
        }

        if (*lv_cmd) {
            Character chi = io::parse_character(f, label);
            return run(g, {{"command", "lvalue"}, {"char", chi.label()}, {"field", f.id()}, {"k", k}}, [&] {
                LValue v = hecke_l_value(chi, k);
                json j = io::to_json(v.value);
                j["character"] = chi.label();
                j["k"] = k;
                j["method"] = v.method;
                return Outcome{j};
            });
        }

        if (*gauss_cmd) {
            Character chi = io::parse_character(f, label);
            return run(g, {{"command", "gauss"}, {"char", chi.label()}, {"field", f.id()}}, [&] {
                json j = io::to_json(gauss_sum(chi));
                j["character"] = chi.label();
                return Outcome{j};
            });
        }

        if (*eis_cmd) {
            EisensteinSeries E = make_series();
            json req = {{"field", f.id()}, {"eta", E.eta().label()}, {"psi", E.psi().label()}, {"k", k}};
            auto parse_stab = [&]() -> std::optional<StabilizedSeries> {
                if (stabilize.empty()) return std::nullopt;
                require(stabilize == "eta" || stabilize == "psi", ErrorKind::usage, "--stabilize takes eta or psi");
                require(!prime.empty(), ErrorKind::usage, "--stabilize needs --p");
                return StabilizedSeries(E, prime_from_label(f, prime), stabilize == "eta" ? Stabilizer::eta : Stabilizer::psi);
            };
            if (*coeffs_cmd) {
                auto S = parse_stab();
                std::optional<Ideal> r;
                if (!raise.empty()) r = io::parse_ideal(f, raise);
                req.update({{"command", "eis-coeffs"}, {"bound", bound}, {"stabilize", stabilize},
                            {"p", S ? S->prime().label() : ""}, {"raise", r ? r->digest() : ""}});
                return run(g, req, [&] {
                    CoefficientTable t;
                    json j = req;
                    j.erase("command");
                    if (S) {
                        t = S->table(bound);
                        j["delta"] = io::to_json(S->delta());
                        j["level"] = S->level().digest();
                    } else if (r) {
                        t = CoefficientTable(f, bound);
                        for (const auto& fi : ideals_up_to_norm(f, bound))
                            t.set(fi.ideal, fi.ideal.is_subset_of(*r) ? E.coefficient(fi.ideal / *r) : Cyclo(Rat(0)));
                        j["level"] = (E.level() * *r).digest();
                    } else {
                        t = E.table(bound);
                        j["level"] = E.level().digest();
                    }
                    j.update(io::table_json(t));
                    return Outcome{j};
                });
            }
            if (*hecke_cmd) {
                Ideal n = io::parse_ideal(f, hecke_n);
                req.update({{"command", "eis-hecke"}, {"bound", bound}, {"n", n.digest()}});
                return run(g, req, [&] {
                    CoefficientTable t = hecke_apply(n, E.table(bound), E.phi(), k);
                    json j = req;
                    j.erase("command");
                    j.update(io::table_json(t));
                    return Outcome{j};
                });
            }
            if (*infty_cmd) {
                auto S = parse_stab();
                req.update({{"command", "eis-infty"}, {"stabilize", stabilize}, {"p", S ? S->prime().label() : ""}});
                return run(g, req, [&] {
                    json terms = json::array();
                    if (S) {
                        auto narrow = class_groups(f, S->level()).narrow;
                        for (std::size_t i = 0; i < narrow->size(); ++i) {
                            json t = io::to_json(S->constant_term_infty(static_cast<int>(i)));
                            t["lambda"] = i;
                            t["t"] = narrow->representatives()[i].digest();
                            terms.push_back(t);
                        }
                    } else {
                        auto narrow = class_groups(f, E.level()).narrow;
                        for (std::size_t i = 0; i < narrow->size(); ++i) {
                            json t = io::to_json(E.constant_term_infty(static_cast<int>(i)));
                            t["lambda"] = i;
                            t["t"] = narrow->representatives()[i].digest();
                            terms.push_back(t);
                        }
                    }
                    json j = req;
                    j.erase("command");
                    j["two_power_convention"] = kTwoPowerConvention;
                    j["terms"] = terms;
                    return Outcome{j};
                });
            }
            if (*cusp_cmd) {
                SeriesKind kind = parse_series(series);
                require(convention == "theorem" || convention == "proof", ErrorKind::usage,
                        "--sign-convention takes theorem or proof");
                std::optional<PrimeIdeal> p;
                if (!prime.empty()) p = prime_from_label(f, prime);
                require(kind == SeriesKind::base || p, ErrorKind::usage, "--series " + series + " needs --p");
                auto [alpha, gamma] = parse_cusp(f, cusp);
                req.update({{"command", "eis-cusp-term"}, {"cusp", io::format_element(alpha) + "," + io::format_element(gamma)},
                            {"lambda", lambda}, {"series", series}, {"p", p ? p->label() : ""}, {"sign_convention", convention}});
                return run(g, req, [&] {
                    Ideal level = kind == SeriesKind::base ? E.level() : E.level() * p->ideal;
                    CuspFrame frame(E, level);
                    json terms = json::array();
                    for (std::size_t i = 0; i < frame.narrow_count(); ++i) {
                        if (lambda >= 0 && static_cast<long>(i) != lambda) continue;
                        CuspDatum x = frame.datum(alpha, gamma, static_cast<int>(i));
                        json t = io::to_json(constant_term_at_cusp(
                            E, kind, p, x, convention == "theorem" ? SignConvention::theorem : SignConvention::proof));
                        t["datum"] = datum_json(x);
                        terms.push_back(t);
                    }
                    require(!terms.empty(), ErrorKind::domain, "narrow class index out of range");
                    json j = req;
                    j.erase("command");
                    j["level"] = level.digest();
                    j["two_power_convention"] = kTwoPowerConvention;
                    j["terms"] = terms;
                    return Outcome{j};
                });
            }
        }

        if (*search_cmd) {
            EisensteinSeries E = make_series();
            PrimeIdeal p = prime_from_label(f, prime);
            json req = {{"command", "search"}, {"field", f.id()}, {"eta", E.eta().label()},
                        {"psi", E.psi().label()}, {"k", k}, {"p", p.label()}};
            return run(g, req, [&] {
                CongruenceReport r = search_congruence_primes(E, p);
                return Outcome{io::report_json(r), r.hypotheses_met() ? Exit::ok : Exit::hypotheses};
            });
        }

        if (*verify_cmd) {
            std::ifstream in(report_path);
            require(in.good(), ErrorKind::parse, "cannot open " + report_path);
            json rep;
            try {
                in >> rep;
            } catch (const json::exception& e) {
                fail(ErrorKind::parse, report_path + " is not valid JSON: " + e.what());
            }
            for (const char* key : {"field", "eta", "psi", "k", "p"})
                require(rep.contains(key), ErrorKind::parse, std::string("report lacks \"") + key + "\"");
            auto RF = io::parse_field(rep.at("field").get<std::string>());
            const NumberField& rf = *RF;
            EisensteinSeries E(io::parse_character(rf, rep.at("eta").get<std::string>()),
                               io::parse_character(rf, rep.at("psi").get<std::string>()), rep.at("k").get<long>());
            PrimeIdeal p = prime_from_label(rf, rep.at("p").get<std::string>());
            EigenformData data = io::parse_eigenform_file(eigenform_path);
            // Oldforms are accepted: the data level must divide m p.
            Ideal data_level = io::parse_ideal(rf, data.level);
            require((E.level() * p.ideal).is_subset_of(data_level), ErrorKind::validation,
                    "eigenform level " + data.level + " does not divide the series level times p");
            std::vector<Int> ls;
            if (!l_opt.empty()) ls.push_back(Int(l_opt));
            else
                for (const auto& x : rep.value("theorem_applicable_primes", json::array())) ls.emplace_back(x.get<std::string>());
            require(!ls.empty(), ErrorKind::domain, "no congruence primes to verify; pass --l");
            json req = {{"command", "verify"}, {"report", rep}, {"eigenform", io::eigenform_json(data)},
                        {"bound", bound}, {"l", l_opt}};
            return run(g, req, [&] {
                json out = json::array();
                bool all = true;
                for (const auto& l : ls) {
                    VerificationReport v = verify_congruence(E, p, data, l, bound);
                    all = all && v.all_pass();
                    out.push_back(io::verification_json(v));
                }
                return Outcome{{{"field", rf.id()}, {"k", E.k()}, {"p", p.label()}, {"verifications", out}, {"pass", all}}};
            });
        }

        if (*cache_cmd) {
            std::string dir = g.cache_dir;
            if (dir.empty())
                if (const char* env = std::getenv("EISCONG_CACHE")) dir = env;
            require(!dir.empty(), ErrorKind::usage, "no cache directory configured");
            io::Cache c(dir);
            if (*cache_clear) emit(g, {{"cleared", c.clear()}, {"dir", dir}});
            if (*cache_stats) emit(g, {{"entries", c.size()}, {"dir", dir}});
            return Exit::ok;
        }
    } catch (const Error& e) {
        return emit_error(g, e.kind(), e.what());
    } catch (const std::exception& e) {
        return emit_error(g, ErrorKind::structural, e.what());
    }
    return Exit::usage;
}
