#pragma once

#include <functional>
#include <map>
#include <vector>

#include "eiscong/matrix.hpp"

namespace eiscong {

/// Finite abelian group Z^g / rowspace(R), put in Smith form.
/// SNF coordinates keep only the invariant factors greater than 1.
class AbelianPresentation {
public:
    AbelianPresentation() = default;

    AbelianPresentation(std::size_t generators, IntMatrix relations) : g_(generators) {
        if (g_ == 0) return;
        IntMatrix rel = std::move(relations);
        if (rel.size() < g_) rel.resize(g_, IntVec(g_, 0));
        for (const auto& row : rel)
            require(row.size() == g_, ErrorKind::structural, "relation has wrong length");
        SnfResult s = smith_normal_form(rel);
        for (std::size_t j = 0; j < g_; ++j) {
            Int dj = j < s.diagonal.size() ? s.diagonal[j] : Int(0);
            require(dj != 0, ErrorKind::structural, "presentation is not finite");
            if (dj != 1) {
                kept_.push_back(j);
                invariants_.push_back(dj);
            }
        }
        v_ = std::move(s.v);
        vinv_ = unimodular_inverse(v_);
    }

    std::size_t raw_generators() const { return g_; }
    const std::vector<Int>& invariants() const { return invariants_; }
    std::size_t rank() const { return invariants_.size(); }

    Int order() const {
        Int o = 1;
        for (const auto& d : invariants_) o *= d;
        return o;
    }
    Int exponent() const {
        Int e = 1;
        for (const auto& d : invariants_) e = lcm(e, d);
        return e;
    }

    /// Raw exponent vector -> reduced SNF coordinates.
    IntVec reduce(const IntVec& raw) const {
        require(raw.size() == g_, ErrorKind::structural, "raw vector has wrong length");
        IntVec out;
        if (g_ == 0) return out;
        IntVec w = vec_mat(raw, v_);
        for (std::size_t t = 0; t < kept_.size(); ++t) out.push_back(mod_pos(w[kept_[t]], invariants_[t]));
        return out;
    }

    /// Raw exponent vector of the j-th SNF generator.
    IntVec generator_raw(std::size_t j) const { return vinv_[kept_[j]]; }

    IntVec add(const IntVec& a, const IntVec& b) const {
        IntVec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod_pos(a[i] + b[i], invariants_[i]);
        return r;
    }
    IntVec scale(const IntVec& a, const Int& k) const {
        IntVec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod_pos(a[i] * k, invariants_[i]);
        return r;
    }
    IntVec zero() const { return IntVec(invariants_.size(), 0); }

    /// All elements in SNF coordinates, lexicographic.
    std::vector<IntVec> elements() const {
        std::vector<IntVec> out{IntVec{}};
        for (const auto& d : invariants_) {
            std::vector<IntVec> next;
            for (const auto& v : out)
                for (Int i = 0; i < d; ++i) {
                    IntVec w = v;
                    w.push_back(i);
                    next.push_back(std::move(w));
                }
            out = std::move(next);
        }
        return out;
    }

private:
    std::size_t g_ = 0;
    std::vector<std::size_t> kept_;
    std::vector<Int> invariants_;
    IntMatrix v_, vinv_;
};

/// Finite abelian group given by n elements 0..n-1 (0 the identity) and a
/// multiplication function. Greedy generators, then Smith form.
class ExplicitGroup {
public:
    ExplicitGroup() = default;

    ExplicitGroup(std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& mul) : n_(n) {
        require(n >= 1, ErrorKind::structural, "empty group");
        // span[e] = exponent vector over gens_ (lengths grow as gens are added)
        std::vector<IntVec> span(n);
        std::vector<bool> in(n, false);
        in[0] = true;
        std::vector<std::size_t> members{0};
        IntMatrix rels;
        while (members.size() < n) {
            std::size_t g = 0;
            while (in[g]) ++g;
            const std::size_t t = gens_.size();
            gens_.push_back(g);
            for (auto m : members) span[m].push_back(0);
            // order of g modulo the current span
            std::size_t x = g;
            long k = 1;
            std::vector<std::size_t> powers{0, g};
            while (!in[x]) {
                x = mul(x, g);
                powers.push_back(x);
                ++k;
            }
            IntVec rel = span[x];
            for (auto& c : rel) c = -c;
            rel[t] += k;
            rels.push_back(rel);
            std::vector<std::size_t> added;
            for (auto m : members)
                for (long j = 1; j < k; ++j) {
                    std::size_t e = mul(m, powers[static_cast<std::size_t>(j)]);
                    require(!in[e], ErrorKind::structural, "multiplication is not a group law");
                    span[e] = span[m];
                    span[e][t] = j;
                    added.push_back(e);
                }
            for (auto e : added) {
                in[e] = true;
                members.push_back(e);
            }
        }
        for (auto& r : rels) r.resize(gens_.size(), 0);
        raw_ = std::move(span);
        for (auto& r : raw_) r.resize(gens_.size(), 0);
        pres_ = AbelianPresentation(gens_.size(), rels);
        dlog_.resize(n);
        for (std::size_t e = 0; e < n; ++e) {
            dlog_[e] = pres_.reduce(raw_[e]);
            index_[dlog_[e]] = e;
        }
    }

    std::size_t size() const { return n_; }
    const AbelianPresentation& presentation() const { return pres_; }
    const std::vector<Int>& invariants() const { return pres_.invariants(); }
    const IntVec& dlog(std::size_t e) const { return dlog_[e]; }
    std::size_t element(const IntVec& coords) const {
        auto it = index_.find(coords);
        require(it != index_.end(), ErrorKind::structural, "coordinates outside the group");
        return it->second;
    }
    /// Element index of the j-th SNF generator.
    std::size_t snf_generator(std::size_t j) const {
        IntVec e = pres_.zero();
        e[j] = 1;
        return element(e);
    }

private:
    std::size_t n_ = 1;
    std::vector<std::size_t> gens_;
    std::vector<IntVec> raw_;
    AbelianPresentation pres_;
    std::vector<IntVec> dlog_;
    std::map<IntVec, std::size_t> index_;
};

} // namespace eiscong
