#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <memory>
#include <vector>

#include "eiscong/classgroup.hpp"

namespace eiscong {

/// Narrow ray class group of modulus m (all real places included), built
/// from the exact sequence
///   ((O/m)^x x {+-}^d) / image(O^x)  ->  Cl_m^+  ->  Cl_F  ->  1.
class RayClassGroup {
public:
    RayClassGroup(const NumberField& f, const Ideal& m) : field_(&f), modulus_(m) {
        require(m.is_integral() && !m.is_zero(), ErrorKind::domain, "modulus must be a nonzero integral ideal");
        require(f.degree() <= 2, ErrorKind::capability, "ray class groups need unit data (degree <= 2)");
        d_ = f.degree();
        for (const auto& [P, e] : factor_ideal(m)) primes_.push_back(P);

        // Residues of O/m coprime to m.
        for (const auto& x : m.residues()) {
            bool unit = true;
            for (const auto& P : primes_)
                if (P.ideal.contains(x)) {
                    unit = false;
                    break;
                }
            if (!unit) continue;
            res_index_[x.int_coords()] = res_.size();
            res_.push_back(x);
        }
        const std::size_t masks = std::size_t(1) << d_;
        const std::size_t npre = res_.size() * masks;

        // Image of the global units.
        std::vector<std::size_t> unit_images;
        for (const auto& u : f.unit_generators()) unit_images.push_back(pre_index(u));
        std::vector<bool> inH(npre, false);
        std::vector<std::size_t> H{pre_index(f.one())};
        inH[H[0]] = true;
        for (std::size_t i = 0; i < H.size(); ++i)
            for (auto u : unit_images) {
                std::size_t e = pre_mul(H[i], u);
                if (!inH[e]) {
                    inH[e] = true;
                    H.push_back(e);
                }
            }

        // Cosets, identity first, then by smallest member.
        coset_of_.assign(npre, SIZE_MAX);
        auto add_coset = [&](std::size_t p) {
            const std::size_t id = coset_rep_.size();
            coset_rep_.push_back(p);
            for (auto h : H) coset_of_[pre_mul(p, h)] = id;
        };
        add_coset(H[0]);
        for (std::size_t p = 0; p < npre; ++p)
            if (coset_of_[p] == SIZE_MAX) add_coset(p);
        rprime_ = ExplicitGroup(coset_rep_.size(), [&](std::size_t a, std::size_t b) {
            return coset_of_[pre_mul(coset_rep_[a], coset_rep_[b])];
        });

        // Wide class group with representatives coprime to m.
        wide_ = class_groups(f, m).wide;
        const auto& winv = wide_->invariants();
        const std::size_t s = rprime_.invariants().size(), c = winv.size();
        IntMatrix rels;
        for (std::size_t j = 0; j < s; ++j) {
            IntVec r(s + c, 0);
            r[j] = rprime_.invariants()[j];
            rels.push_back(r);
        }
        for (std::size_t t = 0; t < c; ++t) {
            const Ideal& ct = wide_->representatives()[wide_->group().snf_generator(t)];
            const long ot = to_long(winv[t]);
            auto beta = principal_generator(ct.pow(ot));
            require(beta.has_value(), ErrorKind::structural, "class group relation not principal");
            IntVec w = rprime_dlog(*beta);
            IntVec r(s + c, 0);
            for (std::size_t j = 0; j < s; ++j) r[j] = -w[j];
            r[s + t] = ot;
            rels.push_back(r);
            class_gens_.push_back(ct);
            class_orders_.push_back(ot);
        }
        pres_ = AbelianPresentation(s + c, rels);
    }

    const NumberField& field() const { return *field_; }
    const Ideal& modulus() const { return modulus_; }
    const std::vector<PrimeIdeal>& modulus_primes() const { return primes_; }
    const AbelianPresentation& presentation() const { return pres_; }
    const std::vector<Int>& invariants() const { return pres_.invariants(); }
    Int order() const { return pres_.order(); }
    long exponent() const { return to_long(pres_.exponent()); }
    std::size_t rprime_size() const { return rprime_.size(); }

    bool coprime(const Ideal& a) const {
        if (a.is_zero()) return modulus_.is_unit();
        for (const auto& P : primes_)
            if (a.is_integral() ? a.is_subset_of(P.ideal) : valuation_any(a, P) != 0) return false;
        return true;
    }

    /// Memoised dlog, none when a is not coprime to m.
    std::optional<IntVec> try_dlog(const Ideal& a) const {
        require(!a.is_zero(), ErrorKind::domain, "discrete log of the zero ideal");
        auto key = std::make_pair(a.hnf_matrix(), a.den());
        {
            std::lock_guard<std::mutex> lock(*memo_mutex_);
            auto it = dlog_memo_.find(key);
            if (it != dlog_memo_.end()) return it->second;
        }
        std::optional<IntVec> v;
        if (coprime(a)) v = dlog(a);
        std::lock_guard<std::mutex> lock(*memo_mutex_);
        dlog_memo_.emplace(std::move(key), v);
        return v;
    }

    /// SNF coordinates of the class of a nonzero ideal coprime to m.
    IntVec dlog(const Ideal& a) const {
        require(!a.is_zero(), ErrorKind::domain, "discrete log of the zero ideal");
        if (!a.is_integral()) {
            // Through the factorization; every prime is coprime to m.
            IntVec acc = pres_.zero();
            for (const auto& [P, e] : factor_ideal(a)) acc = pres_.add(acc, pres_.scale(dlog(P.ideal), e));
            return acc;
        }
        require(coprime(a), ErrorKind::domain, "ideal not coprime to the modulus");
        const std::size_t s = rprime_.invariants().size();
        IntVec x = wide_->dlog(a);
        Ideal J = a;
        IntVec raw(s + class_gens_.size(), 0);
        for (std::size_t t = 0; t < class_gens_.size(); ++t) {
            long y = to_long(mod_pos(-x[t], Int(class_orders_[t])));
            if (y) J = J * class_gens_[t].pow(y);
            raw[s + t] = -y;
        }
        auto beta = principal_generator(J);
        require(beta.has_value(), ErrorKind::structural, "expected a principal ideal");
        IntVec w = rprime_dlog(*beta);
        for (std::size_t j = 0; j < s; ++j) raw[j] = w[j];
        return pres_.reduce(raw);
    }

    /// SNF coordinates of the image of (x mod m, sign mask) with x a unit mod m.
    IntVec dlog_residue(const FieldElement& x, unsigned mask) const {
        const std::size_t s = rprime_.invariants().size();
        IntVec raw(s + class_gens_.size(), 0);
        std::size_t coset = coset_of_[res_idx(x) * (std::size_t(1) << d_) + mask];
        const IntVec& w = rprime_.dlog(coset);
        for (std::size_t j = 0; j < s; ++j) raw[j] = w[j];
        return pres_.reduce(raw);
    }

    /// One integral ideal coprime to m per class, smallest norm first found,
    /// paired with its SNF coordinates. Ordered as presentation().elements().
    const std::vector<std::pair<IntVec, Ideal>>& class_representatives() const {
        std::call_once(*reps_->once, [this] {
            const auto elems = pres_.elements();
            std::map<IntVec, std::size_t> pos;
            for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = i;
            std::vector<std::optional<Ideal>> found(elems.size());
            std::size_t filled = 0;
            for (long B = 8; filled < elems.size(); B *= 2) {
                require(B <= 1 << 22, ErrorKind::resource, "ray class representative search exhausted");
                for (const auto& fi : ideals_up_to_norm(*field_, B)) {
                    auto w = try_dlog(fi.ideal);
                    if (!w) continue;
                    auto& slot = found[pos.at(*w)];
                    if (slot) continue;
                    slot = fi.ideal;
                    ++filled;
                }
            }
            for (std::size_t i = 0; i < elems.size(); ++i) reps_->table.emplace_back(elems[i], *found[i]);
        });
        return reps_->table;
    }

    /// Residues of O/m that are units, in canonical form.
    const std::vector<FieldElement>& unit_residues() const { return res_; }

    unsigned sign_mask(const FieldElement& x) const {
        unsigned mask = 0;
        auto s = field_->signs(x);
        for (int i = 0; i < d_; ++i)
            if (s[i] < 0) mask |= 1u << i;
        return mask;
    }

private:
    static int valuation_any(const Ideal& a, const PrimeIdeal& P) {
        for (const auto& [Q, e] : factor_ideal(a))
            if (Q == P) return e;
        return 0;
    }

    std::size_t res_idx(const FieldElement& x) const {
        FieldElement r = modulus_.reduce(x);
        auto it = res_index_.find(r.int_coords());
        require(it != res_index_.end(), ErrorKind::domain, "element is not a unit modulo the modulus");
        return it->second;
    }

    std::size_t pre_index(const FieldElement& x) const {
        return res_idx(x) * (std::size_t(1) << d_) + sign_mask(x);
    }

    std::size_t pre_mul(std::size_t a, std::size_t b) const {
        const std::size_t masks = std::size_t(1) << d_;
        FieldElement prod = res_[a / masks] * res_[b / masks];
        return res_idx(prod) * masks + ((a % masks) ^ (b % masks));
    }

    /// R' coordinates of an integral element coprime to m.
    IntVec rprime_dlog(const FieldElement& beta) const {
        return rprime_.dlog(coset_of_[pre_index(beta)]);
    }

    const NumberField* field_;
    Ideal modulus_;
    int d_ = 1;
    std::vector<PrimeIdeal> primes_;
    std::vector<FieldElement> res_;
    std::map<IntVec, std::size_t> res_index_;
    std::vector<std::size_t> coset_of_;
    std::vector<std::size_t> coset_rep_;
    ExplicitGroup rprime_;
    std::shared_ptr<const ClassGroup> wide_;
    std::vector<Ideal> class_gens_;
    std::vector<long> class_orders_;
    AbelianPresentation pres_;
    struct Reps {
        std::unique_ptr<std::once_flag> once = std::make_unique<std::once_flag>();
        std::vector<std::pair<IntVec, Ideal>> table;
    };
    std::shared_ptr<Reps> reps_ = std::make_shared<Reps>();
    std::shared_ptr<std::mutex> memo_mutex_ = std::make_shared<std::mutex>();
    mutable std::map<std::pair<IntMatrix, Int>, std::optional<IntVec>> dlog_memo_;
};

using RayClassGroupPtr = std::shared_ptr<const RayClassGroup>;

inline RayClassGroupPtr ray_class_group(const NumberField& f, const Ideal& m) {
    return f.memo<RayClassGroup>("ray:" + m.digest(), [&] { return RayClassGroup(f, m); });
}

} // namespace eiscong
