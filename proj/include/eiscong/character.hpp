#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eiscong/cyclotomic.hpp"
#include "eiscong/rayclass.hpp"

namespace eiscong {

/// Angle t in [0, 1) standing for exp(2 pi i t).
inline Rat reduce_angle(const Rat& t) { return t - Rat(floor_rat(t)); }

inline Cyclo root_of_unity(const Rat& angle) {
    Rat t = reduce_angle(angle);
    return Cyclo::zeta(to_long(t.get_den()), to_long(t.get_num()));
}

class Character;
using ThetaFn = std::function<std::optional<Rat>(const Ideal&)>;

struct ConductorInfo {
    Ideal finite;
    std::vector<int> signature;
};

/// Narrow ray class character, stored as exponents against the SNF
/// invariants: chi(g_k) = exp(2 pi i a_k / d_k).
class Character {
public:
    Character() = default;
    Character(RayClassGroupPtr g, IntVec exps) : group_(std::move(g)), a_(std::move(exps)) {
        const auto& inv = group_->invariants();
        require(a_.size() == inv.size(), ErrorKind::structural, "character exponent vector has wrong length");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] = mod_pos(a_[k], inv[k]);
        cache_ = std::make_shared<Cache>();
    }

    static Character trivial(RayClassGroupPtr g) {
        IntVec z(g->invariants().size(), 0);
        return Character(std::move(g), z);
    }

    const RayClassGroup& group() const { return *group_; }
    const RayClassGroupPtr& group_ptr() const { return group_; }
    const Ideal& modulus() const { return group_->modulus(); }
    const NumberField& field() const { return group_->field(); }
    const IntVec& exponents() const { return a_; }

    bool is_trivial() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    /// Angle of the value on a group element in SNF coordinates.
    Rat theta_of(const IntVec& w) const {
        const auto& inv = group_->invariants();
        Rat t = 0;
        for (std::size_t k = 0; k < a_.size(); ++k) t += Rat(a_[k] * w[k]) / Rat(inv[k]);
        return reduce_angle(t);
    }

    /// Angle of chi(I), none when I is not coprime to the modulus.
    std::optional<Rat> theta(const Ideal& I) const {
        if (I.is_zero()) {
            if (modulus().is_unit()) return Rat(0);
            return std::nullopt;
        }
        auto w = group_->try_dlog(I);
        if (!w) return std::nullopt;
        return theta_of(*w);
    }

    Cyclo operator()(const Ideal& I) const {
        auto t = theta(I);
        if (!t) return Cyclo(Rat(0));
        return root_of_unity(*t);
    }

    /// Order of the character.
    long order() const {
        const auto& inv = group_->invariants();
        Int o = 1;
        for (std::size_t k = 0; k < a_.size(); ++k) o = lcm(o, inv[k] / gcd(inv[k], a_[k]));
        return to_long(o);
    }

    /// Conductor of the value field: values lie in Q(zeta_n).
    long value_conductor() const { return std::max<long>(1, group_->exponent()); }

    /// r_i = 1 when chi((alpha)) = -1 for alpha = 1 mod m negative only at embedding i.
    const std::vector<int>& signature() const {
        std::call_once(cache_->sig_once, [this] {
            const int d = field().degree();
            std::vector<int> r(d, 0);
            FieldElement one = field().one();
            for (int i = 0; i < d; ++i) {
                Rat t = theta_of(group_->dlog_residue(one, 1u << i));
                require(t == 0 || t == Rat(1, 2), ErrorKind::structural, "sign character is not quadratic");
                r[i] = t == 0 ? 0 : 1;
            }
            cache_->signature = r;
        });
        return cache_->signature;
    }

    /// Trivial on the image of {alpha : alpha = 1 mod f, alpha >> 0, alpha coprime to m}.
    bool factors_through(const Ideal& f) const {
        for (const auto& x : group_->unit_residues()) {
            if (!f.contains(x - field().one())) continue;
            if (theta_of(group_->dlog_residue(x, 0)) != 0) return false;
        }
        return true;
    }

    /// Finite conductor and infinite part (the signature).
    const ConductorInfo& conductor() const {
        std::call_once(cache_->cond_once, [this] {
            Ideal f = modulus();
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& [P, e] : factor_ideal(f)) {
                    Ideal g = f * P.inverse;
                    if (factors_through(g)) {
                        f = g;
                        changed = true;
                        break;
                    }
                }
            }
            cache_->cond = ConductorInfo{f, signature()};
        });
        return cache_->cond;
    }

    /// Finite conductor equals the modulus.
    bool is_primitive() const { return conductor().finite == modulus(); }

    /// Numerical character: chi(alpha O) sgn(alpha)^r.
    Cyclo numerical(const FieldElement& alpha) const {
        if (alpha.is_zero()) return Cyclo(Rat(0));
        auto t = theta(Ideal::principal(alpha));
        if (!t) return Cyclo(Rat(0));
        Cyclo v = root_of_unity(*t);
        const auto& r = signature();
        auto s = field().signs(alpha);
        int sign = 1;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] && s[i] < 0) sign = -sign;
        return sign < 0 ? -v : v;
    }

    Character inverse() const {
        IntVec b = a_;
        for (auto& x : b) x = -x;
        return Character(group_, b);
    }
    Character pow(long e) const {
        IntVec b = a_;
        for (auto& x : b) x *= e;
        return Character(group_, b);
    }

    /// Index in the lexicographic enumeration of the dual group.
    Int index() const {
        const auto& inv = group_->invariants();
        Int idx = 0;
        for (std::size_t k = 0; k < a_.size(); ++k) idx = idx * inv[k] + a_[k];
        return idx;
    }

    std::string label() const {
        if (modulus().is_unit() && is_trivial()) return "trivial";
        return "F:" + field().id() + "/m:" + modulus().digest() + "/idx:" + index().get_str();
    }

    friend bool operator==(const Character& x, const Character& y) {
        return x.group_ == y.group_ && x.a_ == y.a_;
    }

private:
    struct Cache {
        std::once_flag sig_once, cond_once;
        std::vector<int> signature;
        ConductorInfo cond;
    };

    RayClassGroupPtr group_;
    IntVec a_;
    std::shared_ptr<Cache> cache_;
};

/// All characters of the group, in index order.
inline std::vector<Character> characters_of(const RayClassGroupPtr& g) {
    std::vector<Character> out;
    for (const auto& e : g->presentation().elements()) out.emplace_back(g, e);
    return out;
}

inline Character character_by_index(const RayClassGroupPtr& g, const Int& idx) {
    const auto& inv = g->invariants();
    require(idx >= 0 && idx < g->order(), ErrorKind::parse, "character index out of range");
    IntVec a(inv.size());
    Int r = idx;
    for (std::size_t k = inv.size(); k-- > 0;) {
        a[k] = mod_pos(r, inv[k]);
        r = floor_div(r, inv[k]);
    }
    return Character(g, a);
}

/// Character of g defined by an angle function on ideals coprime to
/// modulus(g) * aux. The function must be a character of g.
inline Character character_from_theta(const RayClassGroupPtr& g, const ThetaFn& fn, const Ideal& aux) {
    const auto& pres = g->presentation();
    const Int total = pres.order();
    std::map<IntVec, Rat> span{{pres.zero(), Rat(0)}};
    const Ideal avoid = g->modulus() * aux;
    const NumberField& f = g->field();
    for (long B = 16; Int(static_cast<long>(span.size())) < total; B *= 2) {
        require(B <= (1L << 22), ErrorKind::resource, "character reconstruction search exhausted");
        for (const auto& fi : ideals_up_to_norm(f, B)) {
            if (Int(static_cast<long>(span.size())) >= total) break;
            if (!fi.ideal.is_coprime_to(avoid)) continue;
            IntVec w = g->dlog(fi.ideal);
            if (span.count(w)) continue;
            auto t = fn(fi.ideal);
            require(t.has_value(), ErrorKind::structural, "character undefined on a coprime ideal");
            // close the span under adding w
            std::vector<std::pair<IntVec, Rat>> base(span.begin(), span.end());
            IntVec cur = w;
            Rat tc = *t;
            while (!span.count(cur)) {
                for (const auto& [v, tv] : base) span[pres.add(v, cur)] = reduce_angle(tv + tc);
                cur = pres.add(cur, w);
                tc = reduce_angle(tc + *t);
            }
        }
    }
    const auto& inv = g->invariants();
    IntVec a(inv.size());
    for (std::size_t k = 0; k < inv.size(); ++k) {
        IntVec e = pres.zero();
        e[k] = 1;
        Rat ak = span.at(e) * Rat(inv[k]);
        require(ak.get_den() == 1, ErrorKind::structural, "function is not a character of the group");
        a[k] = ak.get_num();
    }
    return Character(g, a);
}

/// chi composed with Cl_m^+ -> Cl_{modulus(chi)}^+ for a multiple m of the modulus.
inline Character lift(const Character& chi, const Ideal& m) {
    require(m.is_subset_of(chi.modulus()), ErrorKind::domain, "lift target is not a multiple of the modulus");
    if (m == chi.modulus()) return chi;
    auto g = ray_class_group(chi.field(), m);
    return character_from_theta(g, [&](const Ideal& I) { return chi.theta(I); }, Ideal::unit(chi.field()));
}

/// The primitive character inducing chi (on the group of its finite conductor).
inline Character primitive(const Character& chi) {
    const Ideal& f = chi.conductor().finite;
    if (f == chi.modulus()) return chi;
    auto g = ray_class_group(chi.field(), f);
    return character_from_theta(g, [&](const Ideal& I) { return chi.theta(I); }, chi.modulus());
}

/// Product of characters of possibly different moduli, on the lcm modulus.
inline Character multiply(const Character& x, const Character& y) {
    Ideal m = x.modulus().intersect(y.modulus());
    Character a = lift(x, m), b = lift(y, m);
    IntVec e = a.exponents();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += b.exponents()[k];
    return Character(a.group_ptr(), e);
}

inline Character trivial_character(const NumberField& f) {
    return Character::trivial(ray_class_group(f, Ideal::unit(f)));
}

/// Coset representatives of L1 / L2 for fractional ideals L2 subset L1.
inline std::vector<FieldElement> coset_representatives(const Ideal& L1, const Ideal& L2) {
    require(L2.is_subset_of(L1), ErrorKind::domain, "sublattice is not contained in the lattice");
    const NumberField& f = L1.field();
    const int d = f.degree();
    auto B1 = L1.basis(), B2 = L2.basis();
    RatMatrix b1(d);
    for (int i = 0; i < d; ++i) b1[i] = B1[i].coords();
    RatMatrix inv = inverse(b1);
    IntMatrix M(d, IntVec(d));
    for (int i = 0; i < d; ++i) {
        RatVec c(d, 0);
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < d; ++t) c[t] += B2[i][j] * inv[j][t];
        for (int t = 0; t < d; ++t) {
            require(c[t].get_den() == 1, ErrorKind::structural, "sublattice coordinates are not integral");
            M[i][t] = c[t].get_num();
        }
    }
    IntMatrix H = hnf(M);
    std::vector<FieldElement> out{f.zero()};
    for (int i = 0; i < d; ++i) {
        std::vector<FieldElement> next;
        for (const auto& x : out)
            for (Int c = 0; c < H[i][i]; ++c) next.push_back(x + B1[i] * Rat(c));
        out = std::move(next);
    }
    return out;
}

/// Gauss sum sum_{x in (bd)^-1 / d^-1} sgn(x)^r psi(x b d) e(Tr x); an optional
/// shift function replaces each representative by another member of its coset.
inline Cyclo gauss_sum(const Character& psi,
                       const std::function<FieldElement(const FieldElement&)>& shift = nullptr) {
    const NumberField& f = psi.field();
    const Ideal& b = psi.modulus();
    const Ideal& dif = different(f);
    Ideal bd = b * dif;
    auto reps = coset_representatives(bd.inverse(), dif.inverse());
    const auto& r = psi.signature();
    // Accumulate in the group ring of Z/N before a single reduction.
    std::vector<std::pair<Rat, int>> terms;
    Int N = 1;
    for (auto x : reps) {
        if (shift) x = shift(x);
        Ideal I = x.is_zero() ? Ideal::zero(f) : Ideal::principal(x) * bd;
        auto t = psi.theta(I);
        if (!t) continue;
        int sign = 1;
        if (!x.is_zero()) {
            auto s = f.signs(x);
            for (std::size_t i = 0; i < r.size(); ++i)
                if (r[i] && s[i] < 0) sign = -sign;
        }
        Rat angle = reduce_angle(*t + f.trace(x));
        N = lcm(N, Int(angle.get_den()));
        terms.emplace_back(angle, sign);
    }
    const long n = to_long(N);
    RatVec ring(static_cast<std::size_t>(n), 0);
    for (const auto& [angle, sign] : terms) {
        Rat pos = angle * Rat(N);
        ring[static_cast<std::size_t>(to_long(pos.get_num()))] += sign;
    }
    Cyclo total = Cyclo::from_group_ring(n, std::move(ring));
    return total;
}

} // namespace eiscong
