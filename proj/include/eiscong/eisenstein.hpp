#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/cusp.hpp"
#include "eiscong/lvalue.hpp"

namespace eiscong {

/// Every power of two in the constant-term formulas is read as 2^-d, d the degree.
inline constexpr const char* kTwoPowerConvention = "degree";

/// Sign factor: theorem statements use sgn(-gamma)^q, the proof body sgn(gamma)^q.
enum class SignConvention { theorem, proof };

/// Coefficients c(n) for every integral ideal of norm <= bound.
class CoefficientTable {
public:
    CoefficientTable() = default;
    CoefficientTable(const NumberField& f, long bound) : field_(&f), bound_(bound) {}

    const NumberField& field() const { return *field_; }
    long bound() const { return bound_; }
    const std::map<Ideal, Cyclo>& entries() const { return entries_; }
    void set(const Ideal& n, Cyclo v) { entries_[n] = std::move(v); }

    /// Lookup; ideals beyond the bound are an error, never an implicit zero.
    const Cyclo& at(const Ideal& n) const {
        require(n.is_integral() && !n.is_zero(), ErrorKind::domain, "coefficient index must be a nonzero integral ideal");
        if (n.norm_int() > bound_)
            fail(ErrorKind::range, "coefficient of norm " + n.norm_int().get_str() + " requested from a table of bound " +
                                       std::to_string(bound_));
        auto it = entries_.find(n);
        require(it != entries_.end(), ErrorKind::structural, "table is missing an ideal within its bound");
        return it->second;
    }

    friend bool operator==(const CoefficientTable& a, const CoefficientTable& b) {
        return a.bound_ == b.bound_ && a.entries_ == b.entries_;
    }

private:
    const NumberField* field_ = nullptr;
    long bound_ = 0;
    std::map<Ideal, Cyclo> entries_;
};

inline bool operator==(const std::map<Ideal, Cyclo>& a, const std::map<Ideal, Cyclo>& b) {
    if (a.size() != b.size()) return false;
    for (auto i = a.begin(), j = b.begin(); i != a.end(); ++i, ++j)
        if (!(i->first == j->first) || !(i->second == j->second)) return false;
    return true;
}

/// E_k(eta, psi): eta of modulus a and signature q, psi of modulus b and
/// signature r, level m = ab and character phi = eta psi on m.
class EisensteinSeries {
public:
    EisensteinSeries(Character eta, Character psi, long k)
        : eta_(std::move(eta)), psi_(std::move(psi)), k_(k), cache_(std::make_shared<Cache>()) {
        require(k >= 1, ErrorKind::domain, "weight must be at least 1");
        require(&eta_.field() == &psi_.field(), ErrorKind::structural, "characters over different fields");
        const auto& q = eta_.signature();
        const auto& r = psi_.signature();
        for (std::size_t i = 0; i < q.size(); ++i)
            require((q[i] + r[i] + k) % 2 == 0, ErrorKind::domain,
                    "parity condition q + r = k mod 2 fails: the Eisenstein space is empty");
        m_ = eta_.modulus() * psi_.modulus();
        phi_ = multiply_on(eta_, psi_, m_);
        for (int s : phi_.signature())
            require(s == k % 2, ErrorKind::domain, "phi_r(eps) = sgn(eps)^k fails for a unit");
        n_ = lcm(eta_.value_conductor(), psi_.value_conductor());
    }

    const NumberField& field() const { return eta_.field(); }
    const Character& eta() const { return eta_; }
    const Character& psi() const { return psi_; }
    const Character& phi() const { return phi_; }
    long k() const { return k_; }
    const Ideal& level() const { return m_; }

    bool is_newform() const {
        return eta_.is_primitive() && psi_.is_primitive() &&
               eta_.conductor().finite * psi_.conductor().finite == m_;
    }

    /// c(n) = sum_{n1 | n} eta(n / n1) psi(n1) N(n1)^(k-1).
    Cyclo coefficient(const Ideal& n) const {
        require(n.is_integral() && !n.is_zero(), ErrorKind::domain, "coefficient index must be a nonzero integral ideal");
        return coefficient(factor_ideal(n));
    }

    Cyclo coefficient(const Factorization& fac) const {
        // Walk the exponent lattice of the divisors, angles added in Z / n.
        struct Local {
            std::optional<Rat> te, tp;
            Int norm;
            int e;
        };
        std::vector<Local> loc;
        for (const auto& [P, e] : fac) loc.push_back({theta_eta(P), theta_psi(P), P.norm(), e});
        RatVec ring(static_cast<std::size_t>(n_), 0);
        std::vector<int> f(loc.size(), 0);
        for (;;) {
            bool zero = false;
            Rat angle = 0;
            Int nn = 1;
            for (std::size_t j = 0; j < loc.size() && !zero; ++j) {
                const int up = loc[j].e - f[j];
                if (up > 0) {
                    if (!loc[j].te) zero = true;
                    else angle += *loc[j].te * up;
                }
                if (f[j] > 0) {
                    if (!loc[j].tp) zero = true;
                    else angle += *loc[j].tp * f[j];
                    nn *= ipow(loc[j].norm, static_cast<unsigned long>(f[j]));
                }
            }
            if (!zero) {
                Rat pos = reduce_angle(angle) * Rat(n_);
                ring[static_cast<std::size_t>(to_long(pos.get_num()))] += Rat(ipow(nn, static_cast<unsigned long>(k_ - 1)));
            }
            std::size_t j = 0;
            while (j < f.size() && f[j] == loc[j].e) f[j++] = 0;
            if (j == f.size()) break;
            ++f[j];
        }
        return Cyclo::from_group_ring(n_, ring).simplified();
    }

    CoefficientTable table(long bound) const {
        CoefficientTable t(field(), bound);
        for (const auto& fi : ideals_up_to_norm(field(), bound)) t.set(fi.ideal, coefficient(fi.factors));
        return t;
    }

    /// Hecke eigenvalue eta(q) + psi(q) N(q)^(k-1) at a prime.
    Cyclo eigenvalue(const PrimeIdeal& q) const { return coefficient(Factorization{{q, 1}}); }

    /// Constant term c_lambda(0) at infinity, lambda indexing the narrow classes
    /// with representatives coprime to the level.
    Cyclo constant_term_infty(int lambda) const {
        auto narrow = class_groups(field(), m_).narrow;
        require(lambda >= 0 && static_cast<std::size_t>(lambda) < narrow->size(), ErrorKind::domain,
                "narrow class index out of range");
        return constant_term_infty_at(narrow->representatives()[static_cast<std::size_t>(lambda)]);
    }

    /// Constant term at infinity in the component of the narrow class of t.
    Cyclo constant_term_infty_at(const Ideal& t) const {
        const Rat two_d = rpow(Rat(2), -static_cast<long>(field().degree()));
        auto term = [&](const Character& x, const Character& y) {
            // x^-1(t) L(x^-1 y, 1 - k) for x of modulus O
            Character xi = x.inverse();
            return xi(t) * hecke_l_value(multiply(xi, y), k_).value;
        };
        Cyclo out(Rat(0));
        if (eta_.modulus().is_unit()) out = out + term(eta_, psi_);
        if (k_ == 1 && psi_.modulus().is_unit()) out = out + term(psi_, eta_);
        return out.scaled(two_d).simplified();
    }

    /// Character of modulus exactly m = ab made from x and y (the product as a
    /// character modulo m, not the lcm).
    static Character multiply_on(const Character& x, const Character& y, const Ideal& m) {
        Character a = lift(x, m), b = lift(y, m);
        IntVec e = a.exponents();
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += b.exponents()[j];
        return Character(a.group_ptr(), e);
    }

    /// Pieces of the cusp formulas that depend only on the series.
    struct CuspConstants {
        Cyclo K;          // 2^-d tau(eta psi^-1) / tau(psi^-1), both primitive
        Cyclo L;          // L(eta^-1 psi, 1 - k) for the primitive character
        Cyclo euler;      // prod over q | m, q not dividing f of (1 - (eta psi^-1)(q) / N(q)^k)
        Ideal f;          // conductor of eta^-1 psi
    };

    const CuspConstants& cusp_constants() const {
        std::call_once(cache_->once, [this] {
            const NumberField& fld = field();
            Character chi = primitive(multiply(eta_.inverse(), psi_)); // eta^-1 psi
            Character chib = chi.inverse();                           // eta psi^-1
            Cyclo tau_b = gauss_sum(psi_.inverse());
            require(!tau_b.is_zero(), ErrorKind::domain, "tau(psi^-1) vanishes; psi is not primitive");
            CuspConstants c;
            c.f = chi.modulus();
            c.K = (gauss_sum(chib) * tau_b.inverse()).scaled(rpow(Rat(2), -static_cast<long>(fld.degree())));
            c.L = hecke_l_value(chi, k_).value;
            Cyclo e(Rat(1));
            for (const auto& [Q, ex] : factor_ideal(m_)) {
                if (c.f.is_subset_of(Q.ideal)) continue;
                e = e * (Cyclo(Rat(1)) - chib(Q.ideal).scaled(rpow(Rat(Q.norm()), -k_)));
            }
            c.euler = e;
            cache_->consts = std::move(c);
        });
        return cache_->consts;
    }

private:
    std::optional<Rat> theta_eta(const PrimeIdeal& P) const { return eta_.theta(P.ideal); }
    std::optional<Rat> theta_psi(const PrimeIdeal& P) const { return psi_.theta(P.ideal); }

    struct Cache {
        std::once_flag once;
        CuspConstants consts;
    };

    Character eta_, psi_, phi_;
    long k_;
    Ideal m_;
    long n_ = 1;
    std::shared_ptr<Cache> cache_;
};

/// c(m, T(n) f) = sum over integral a containing m + n of phi(a) N(a)^(k-1) c(m n a^-2, f).
inline CoefficientTable hecke_apply(const Ideal& n, const CoefficientTable& table, const Character& phi, long k) {
    require(n.is_integral() && !n.is_zero(), ErrorKind::domain, "Hecke index must be a nonzero integral ideal");
    const NumberField& f = table.field();
    const long N = to_long(n.norm_int());
    const long out_bound = table.bound() / N;
    CoefficientTable out(f, out_bound);
    for (const auto& [m, v] : table.entries()) {
        if (m.norm_int() > out_bound) continue;
        Cyclo acc(Rat(0));
        for (const auto& a : divisors(f, factor_ideal(m + n))) {
            Cyclo pa = phi(a.ideal);
            if (pa.is_zero()) continue;
            Ideal idx = m * n / (a.ideal * a.ideal);
            acc = acc + (pa * table.at(idx)).scaled(rpow(Rat(a.norm()), k - 1));
        }
        out.set(m, acc.simplified());
    }
    return out;
}

/// c(n, f^(r)) = c(n r^-1, f), zero when r does not divide n.
inline CoefficientTable level_raise(const CoefficientTable& table, const Ideal& r) {
    require(r.is_integral() && !r.is_zero(), ErrorKind::domain, "level raise needs a nonzero integral ideal");
    const NumberField& f = table.field();
    const long R = to_long(r.norm_int());
    CoefficientTable out(f, table.bound() * R);
    for (const auto& fi : ideals_up_to_norm(f, table.bound() * R)) {
        if (fi.ideal.is_subset_of(r)) out.set(fi.ideal, table.at(fi.ideal / r));
        else out.set(fi.ideal, Cyclo(Rat(0)));
    }
    return out;
}

enum class Stabilizer { eta, psi };

/// E^delta = E - delta E^(p), delta in {eta(p), psi(p) N(p)^(k-1)}.
class StabilizedSeries {
public:
    StabilizedSeries(EisensteinSeries E, PrimeIdeal p, Stabilizer which)
        : E_(std::move(E)), p_(std::move(p)), which_(which) {
        require(!E_.level().is_subset_of(p_.ideal), ErrorKind::domain, "p divides the level");
        const Cyclo eta_p = E_.eta()(p_.ideal);
        const Cyclo psi_p = E_.psi()(p_.ideal).scaled(rpow(Rat(p_.norm()), E_.k() - 1));
        delta_ = which == Stabilizer::eta ? eta_p : psi_p;
        epsilon_ = which == Stabilizer::eta ? psi_p : eta_p;
    }

    const EisensteinSeries& base() const { return E_; }
    const PrimeIdeal& prime() const { return p_; }
    Stabilizer which() const { return which_; }
    const Cyclo& delta() const { return delta_; }
    const Cyclo& epsilon() const { return epsilon_; }
    Ideal level() const { return E_.level() * p_.ideal; }
    Character phi() const { return lift(E_.phi(), level()); }

    Cyclo coefficient(const Ideal& n) const {
        Cyclo c = E_.coefficient(n);
        if (n.is_subset_of(p_.ideal)) c = c - delta_ * E_.coefficient(n / p_.ideal);
        return c.simplified();
    }

    /// Constant term at infinity of E^delta: E^(p) sees the component of t p.
    Cyclo constant_term_infty(int lambda) const {
        auto narrow = class_groups(E_.field(), level()).narrow;
        require(lambda >= 0 && static_cast<std::size_t>(lambda) < narrow->size(), ErrorKind::domain,
                "narrow class index out of range");
        const Ideal& t = narrow->representatives()[static_cast<std::size_t>(lambda)];
        return (E_.constant_term_infty_at(t) - delta_ * E_.constant_term_infty_at(t * p_.ideal)).simplified();
    }

    CoefficientTable table(long bound) const {
        CoefficientTable base = E_.table(bound);
        CoefficientTable out(E_.field(), bound);
        for (const auto& [n, v] : base.entries()) {
            Cyclo c = v;
            if (n.is_subset_of(p_.ideal)) c = c - delta_ * base.at(n / p_.ideal);
            out.set(n, c.simplified());
        }
        return out;
    }

private:
    EisensteinSeries E_;
    PrimeIdeal p_;
    Stabilizer which_;
    Cyclo delta_, epsilon_;
};

enum class SeriesKind { base, raised, delta_eta, delta_psi };

/// Representative data for evaluating a series at cusps of a given level:
/// wide representatives c_i coprime to the level and narrow representatives
/// t_lambda = j_lambda (b d)^-1, j_lambda integral and coprime to the level,
/// so that b d t_lambda c_i is integral and coprime to m.
class CuspFrame {
public:
    CuspFrame(const EisensteinSeries& E, const Ideal& level) : level_(level) {
        const NumberField& f = E.field();
        auto cd = class_groups(f, level);
        wide_ = cd.wide;
        const Ideal bd = E.psi().modulus() * different(f);
        for (const auto& t0 : cd.narrow->representatives()) {
            const Ideal& j = cd.narrow->representatives()[static_cast<std::size_t>(cd.narrow->index_of(t0 * bd))];
            t_.push_back(j / bd);
        }
        for (const auto& t : t_)
            for (const auto& c : wide_->representatives()) {
                Ideal x = bd * t * c;
                if (!x.is_integral() || !x.is_coprime_to(E.level()))
                    fail(ErrorKind::configuration, "representative b d t c = " + x.to_string() +
                                                       " is not integral and coprime to the level");
            }
    }

    std::size_t narrow_count() const { return t_.size(); }
    const Ideal& t(int lambda) const { return t_.at(static_cast<std::size_t>(lambda)); }
    const ClassGroup& wide() const { return *wide_; }
    const Ideal& level() const { return level_; }

    CuspDatum datum(const FieldElement& alpha, const FieldElement& gamma, int lambda) const {
        require(lambda >= 0 && static_cast<std::size_t>(lambda) < t_.size(), ErrorKind::domain,
                "narrow class index out of range");
        return construct_cusp_matrix(alpha, gamma, lambda, t(lambda), *wide_);
    }

private:
    Ideal level_;
    std::shared_ptr<const ClassGroup> wide_;
    std::vector<Ideal> t_;
};

namespace detail {

/// sgn(x)^v, with sgn(0)^v = 1 only for v = 0.
inline int sign_power(const FieldElement& x, const std::vector<int>& v) {
    bool any = false;
    for (int e : v) any = any || e;
    if (x.is_zero()) return any ? 0 : 1;
    if (!any) return 1;
    const auto s = x.field()->signs(x);
    int out = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] && s[i] < 0) out = -out;
    return out;
}

} // namespace detail

/// Constant term c_lambda(0, S | A) for S in {E, E^(p), E^delta} at a finite cusp.
inline Cyclo constant_term_at_cusp(const EisensteinSeries& E, SeriesKind kind, const std::optional<PrimeIdeal>& p,
                                   const CuspDatum& x, SignConvention conv = SignConvention::theorem) {
    require(E.k() >= 2, ErrorKind::domain, "cusp constant terms are stated for k >= 2 only");
    require(!x.is_infinity(), ErrorKind::domain, "gamma = 0: use the constant term at infinity");
    const NumberField& f = E.field();
    const Ideal& a = E.eta().modulus();
    const Ideal& b = E.psi().modulus();
    const auto& cc = E.cusp_constants();
    const long k = E.k();
    const FieldElement g = conv == SignConvention::theorem ? -x.gamma : x.gamma;
    const int sq = detail::sign_power(g, E.eta().signature());
    const int sr = detail::sign_power(x.alpha, E.psi().signature());
    const Character psi_inv = E.psi().inverse();

    // Base series: Ozawa's formula.
    auto base_value = [&]() -> Cyclo {
        if (!x.n2.is_subset_of(b)) return Cyclo(Rat(0));
        Rat scale = rpow((b * x.c).norm() / cc.f.norm(), k) * sq * sr;
        return (cc.K * E.eta()(x.n2 / b) * psi_inv(x.n1) * cc.L * cc.euler).scaled(scale).simplified();
    };
    if (kind == SeriesKind::base) return base_value();

    require(p.has_value(), ErrorKind::domain, "a prime is required for raised and stabilized series");
    require(E.is_newform(), ErrorKind::domain, "raised constant terms need an Eisenstein newform");
    require(!E.level().is_subset_of(p->ideal), ErrorKind::domain, "p divides the level");
    const Ideal& P = p->ideal;
    const bool p_div_n2 = x.n2.is_subset_of(P);
    const Ideal gg = p_div_n2 ? P : Ideal::unit(f); // gcd(p, n2)
    const Ideal n2p = x.n2 / gg;
    const Ideal pp = P / gg;
    if (!n2p.is_subset_of(b)) return Cyclo(Rat(0));

    if (kind == SeriesKind::raised) {
        Rat scale = rpow(x.c.norm() / (a * pp).norm(), k) * sq * sr;
        return (cc.K * E.eta()(n2p / b) * psi_inv(x.n1 * pp) * cc.L).scaled(scale).simplified();
    }

    const Cyclo B = base_value();
    const Rat Np(p->norm());
    const Cyclo eta_p = E.eta()(P), psi_p = E.psi()(P);
    const Cyclo NK(rpow(Np, k)), NK1(rpow(Np, k - 1));
    if (kind == SeriesKind::delta_eta) {
        // Vanishes when p | n2. Otherwise B (psi(p) N(p)^k - eta(p)) / (psi(p) N(p)^k); the
        // printed corollary omits the psi(p) in the denominator, a root of unity.
        if (p_div_n2) return Cyclo(Rat(0));
        Cyclo den = psi_p * NK;
        return (B * (den - eta_p) * den.inverse()).simplified();
    }
    // delta = psi(p) N(p)^(k-1)
    if (p_div_n2) return (B * (eta_p - psi_p * NK1) * eta_p.inverse()).simplified();
    return B.scaled((Np - 1) / Np).simplified();
}

} // namespace eiscong
