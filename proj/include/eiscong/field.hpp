#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/matrix.hpp"

namespace eiscong {

enum class FieldKind { rational, real_quadratic, table };

class NumberField;

/// Element of a totally real field in integral-basis coordinates.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const NumberField* f, RatVec coords) : field_(f), c_(std::move(coords)) {}

    const NumberField* field() const { return field_; }
    const RatVec& coords() const { return c_; }
    const Rat& operator[](std::size_t i) const { return c_[i]; }
    std::size_t size() const { return c_.size(); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_integral() const {
        for (const auto& x : c_)
            if (x.get_den() != 1) return false;
        return true;
    }
    /// Rational value when the element lies in Q (coordinate 0 only).
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    IntVec int_coords() const {
        IntVec out;
        for (const auto& x : c_) {
            require(x.get_den() == 1, ErrorKind::domain, "element is not integral");
            out.push_back(x.get_num());
        }
        return out;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
    friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.c_ < b.c_; }

    FieldElement operator-() const {
        FieldElement r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const Rat& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const Rat& s) { return a *= s; }
    friend FieldElement operator*(const Rat& s, FieldElement a) { return a *= s; }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ":";
            s += eiscong::to_string(c_[i]);
        }
        return s;
    }

private:
    const NumberField* field_ = nullptr;
    RatVec c_;
};

/// Rational interval [lo, hi].
struct Interval {
    Rat lo, hi;
};

/// Unit data of a real quadratic field.
struct UnitData {
    FieldElement fundamental;        // eps0 > 1 in the first embedding
    FieldElement totally_positive;   // generator of totally positive units
    int fundamental_norm = 0;        // +1 or -1
};

/// Ring of integers of a totally real field, given by an integral basis and
/// its multiplication table. Degree 1 and real quadratic fields are fully
/// supported; larger degrees accept an explicit table for element and ideal
/// arithmetic only.
class NumberField {
public:
    static std::shared_ptr<NumberField> rational() {
        auto f = std::shared_ptr<NumberField>(new NumberField());
        f->degree_ = 1;
        f->kind_ = FieldKind::rational;
        f->table_ = {{{Int(1)}}};
        f->id_ = "rational";
        f->finish();
        return f;
    }

    /// Q(sqrt D) with basis {1, w}, w = sqrt D or (1 + sqrt D)/2.
    static std::shared_ptr<NumberField> real_quadratic(const Int& D) {
        require(D > 1, ErrorKind::domain, "real quadratic field needs D > 1");
        require(is_squarefree(D), ErrorKind::domain, "D must be squarefree");
        auto f = std::shared_ptr<NumberField>(new NumberField());
        f->degree_ = 2;
        f->kind_ = FieldKind::real_quadratic;
        f->D_ = D;
        Int dm4 = mod_pos(D, 4);
        IntVec ww;
        if (dm4 == 1) ww = {(D - 1) / 4, 1}; // w^2 = w + (D-1)/4
        else ww = {D, 0};                     // w^2 = D
        f->table_ = {{{1, 0}, {0, 1}}, {{0, 1}, ww}};
        f->id_ = "rq" + D.get_str();
        f->finish();
        return f;
    }

    /// Experimental degree: explicit multiplication table, basis element 0 must be 1.
    static std::shared_ptr<NumberField> from_table(std::vector<std::vector<IntVec>> table,
                                                   std::string id) {
        const std::size_t d = table.size();
        require(d >= 1, ErrorKind::structural, "empty multiplication table");
        for (const auto& row : table) {
            require(row.size() == d, ErrorKind::structural, "multiplication table is not square");
            for (const auto& v : row)
                require(v.size() == d, ErrorKind::structural, "multiplication table entry has wrong length");
        }
        auto f = std::shared_ptr<NumberField>(new NumberField());
        f->degree_ = static_cast<int>(d);
        f->kind_ = FieldKind::table;
        f->table_ = std::move(table);
        f->id_ = std::move(id);
        for (std::size_t i = 0; i < d; ++i) {
            IntVec ei(d, 0);
            ei[i] = 1;
            require(f->table_[0][i] == ei && f->table_[i][0] == ei, ErrorKind::structural,
                    "basis element 0 must be the identity");
        }
        require(f->table_is_commutative_associative(), ErrorKind::structural,
                "multiplication table is not commutative and associative");
        f->finish();
        return f;
    }

    int degree() const { return degree_; }
    FieldKind kind() const { return kind_; }
    const Int& D() const { return D_; }
    const std::string& id() const { return id_; }
    const Int& discriminant() const { return disc_; }
    const std::vector<std::vector<IntVec>>& table() const { return table_; }

    FieldElement zero() const { return FieldElement(this, RatVec(degree_, 0)); }
    FieldElement one() const { return from_rational(1); }
    FieldElement from_rational(const Rat& r) const {
        RatVec v(degree_, 0);
        v[0] = r;
        return FieldElement(this, v);
    }
    FieldElement basis(int i) const {
        RatVec v(degree_, 0);
        v[i] = 1;
        return FieldElement(this, v);
    }
    FieldElement element(const RatVec& coords) const {
        require(static_cast<int>(coords.size()) == degree_, ErrorKind::structural,
                "coordinate vector has wrong length");
        return FieldElement(this, coords);
    }
    FieldElement element(const IntVec& coords) const {
        RatVec v(coords.begin(), coords.end());
        return element(v);
    }

    bool table_is_commutative_associative() const {
        const int d = degree_;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (table_[i][j] != table_[j][i]) return false;
                for (int k = 0; k < d; ++k) {
                    // (e_i e_j) e_k == e_i (e_j e_k)
                    FieldElement l = mul(basis(i), basis(j));
                    l = mul(l, basis(k));
                    FieldElement r = mul(basis(j), basis(k));
                    r = mul(basis(i), r);
                    if (l != r) return false;
                }
            }
        return true;
    }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const {
        RatVec out(degree_, 0);
        for (int i = 0; i < degree_; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < degree_; ++j) {
                if (y[j] == 0) continue;
                Rat p = x[i] * y[j];
                const IntVec& t = table_[i][j];
                for (int k = 0; k < degree_; ++k)
                    if (t[k] != 0) out[k] += p * t[k];
            }
        }
        return FieldElement(this, std::move(out));
    }

    /// Matrix R with y * R = coords(x * y) for row vectors y.
    RatMatrix regular_matrix(const FieldElement& x) const {
        RatMatrix r(degree_);
        for (int i = 0; i < degree_; ++i) r[i] = mul(x, basis(i)).coords();
        return r;
    }

    Rat trace(const FieldElement& x) const {
        RatMatrix r = regular_matrix(x);
        Rat t = 0;
        for (int i = 0; i < degree_; ++i) t += r[i][i];
        return t;
    }
    Rat norm(const FieldElement& x) const { return determinant(regular_matrix(x)); }
    RatVec charpoly(const FieldElement& x) const { return char_poly(regular_matrix(x)); }

    FieldElement inverse(const FieldElement& x) const {
        require(!x.is_zero(), ErrorKind::domain, "inverse of zero");
        RatVec one(degree_, 0);
        one[0] = 1;
        return FieldElement(this, solve_left(regular_matrix(x), one));
    }

    /// Nontrivial automorphism (real quadratic) or identity (Q).
    FieldElement conjugate(const FieldElement& x) const {
        require(degree_ <= 2, ErrorKind::capability, "conjugation needs degree <= 2");
        if (degree_ == 1) return x;
        // w + w' = trace(w)
        Rat tw = trace(basis(1));
        RatVec c = {x[0] + x[1] * tw, -x[1]};
        return FieldElement(this, c);
    }

    /// x = u + v sqrt(D) (real quadratic) or x = u (rational).
    std::pair<Rat, Rat> sqrt_form(const FieldElement& x) const {
        require(degree_ <= 2, ErrorKind::capability, "embeddings need degree <= 2");
        if (degree_ == 1) return {x[0], 0};
        if (mod_pos(D_, 4) == 1) return {x[0] + x[1] / 2, x[1] / 2};
        return {x[0], x[1]};
    }

    /// Interval containing sigma_i(x) of width at most `width`.
    Interval embedding_interval(const FieldElement& x, int i, const Rat& width) const {
        auto [u, v] = sqrt_form(x);
        if (degree_ == 1 || v == 0) return {u, u};
        if (i == 1) v = -v;
        Interval root = sqrt_interval(width / (abs(v) + 1));
        Rat a = u + v * root.lo, b = u + v * root.hi;
        if (a > b) std::swap(a, b);
        return {a, b};
    }

    /// Approximate sigma_i(x), for search bounds only.
    long double approx(const FieldElement& x, int i) const {
        Interval iv = embedding_interval(x, i, Rat(1, 1000000000));
        Rat mid = (iv.lo + iv.hi) / 2;
        return static_cast<long double>(mid.get_d());
    }

    /// Exact sign of sigma_i(x), decided by interval refinement.
    int sign(const FieldElement& x, int i) const {
        require(!x.is_zero(), ErrorKind::domain, "sign of zero");
        auto [u, v] = sqrt_form(x);
        if (degree_ == 1 || v == 0) return sgn(u);
        if (i == 1) v = -v;
        Interval root{Int(floor_sqrt_D()), Int(floor_sqrt_D()) + 1};
        for (;;) {
            Rat a = u + v * root.lo, b = u + v * root.hi;
            if (a > 0 && b > 0) return 1;
            if (a < 0 && b < 0) return -1;
            Rat mid = (root.lo + root.hi) / 2;
            if (mid * mid < D_) root.lo = mid;
            else root.hi = mid;
        }
    }

    std::vector<int> signs(const FieldElement& x) const {
        require(degree_ <= 2, ErrorKind::capability,
                "embedding signs need degree <= 2 for this field");
        std::vector<int> s;
        for (int i = 0; i < degree_; ++i) s.push_back(sign(x, i));
        return s;
    }

    bool is_totally_positive(const FieldElement& x) const {
        if (x.is_zero()) return false;
        for (int s : signs(x))
            if (s < 0) return false;
        return true;
    }

    /// Fundamental and totally positive units (real quadratic fields).
    const UnitData& units() const {
        require(kind_ == FieldKind::real_quadratic, ErrorKind::capability,
                "unit group available for real quadratic fields only");
        std::call_once(units_once_, [this] { compute_units(); });
        return *units_;
    }

    /// Generators of the unit group modulo torsion together with -1.
    std::vector<FieldElement> unit_generators() const {
        if (degree_ == 1) return {from_rational(-1)};
        require(kind_ == FieldKind::real_quadratic, ErrorKind::capability,
                "unit group unavailable for degree >= 3 without unit data");
        return {from_rational(-1), units().fundamental};
    }

    FieldElement totally_positive_unit() const {
        if (degree_ == 1) return one();
        return units().totally_positive;
    }

    /// Per-field memo table; `make` runs outside the lock and may recurse.
    template <class T, class Fn>
    std::shared_ptr<const T> memo(const std::string& key, Fn&& make) const {
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return std::static_pointer_cast<const T>(it->second);
        }
        std::shared_ptr<const T> value = std::make_shared<const T>(make());
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto [it, inserted] = memo_.emplace(key, value);
        return std::static_pointer_cast<const T>(it->second);
    }

private:
    NumberField() = default;

    static int sgn(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

    Int floor_sqrt_D() const {
        Int r;
        mpz_sqrt(r.get_mpz_t(), D_.get_mpz_t());
        return r;
    }

    Interval sqrt_interval(const Rat& width) const {
        Interval root{Int(floor_sqrt_D()), Int(floor_sqrt_D()) + 1};
        while (root.hi - root.lo > width) {
            Rat mid = (root.lo + root.hi) / 2;
            if (mid * mid < D_) root.lo = mid;
            else root.hi = mid;
        }
        return root;
    }

    void finish() {
        RatMatrix tr(degree_, RatVec(degree_));
        for (int i = 0; i < degree_; ++i)
            for (int j = 0; j < degree_; ++j) tr[i][j] = trace(mul(basis(i), basis(j)));
        Rat disc = determinant(tr);
        require(disc.get_den() == 1 && disc != 0, ErrorKind::structural,
                "trace form is degenerate or non-integral");
        disc_ = disc.get_num();
        if (degree_ >= 2 && kind_ == FieldKind::real_quadratic)
            require(disc_ > 0, ErrorKind::structural, "field is not totally real");
    }

    void compute_units() const {
        // Smallest b >= 1 with a unit a + b w; among those the smallest value > 1.
        const bool one_mod_four = mod_pos(D_, 4) == 1;
        for (Int b = 1;; ++b) {
            std::optional<FieldElement> best;
            for (int s : {-1, 1}) {
                Int t = one_mod_four ? D_ * b * b + 4 * s : D_ * b * b + s;
                Int root;
                if (!exact_sqrt(t, root)) continue;
                FieldElement e;
                if (one_mod_four) {
                    // (2a + b)/2 + (b/2) sqrt D with 2a + b = root
                    Int twice_a = root - b;
                    if (mod_pos(twice_a, 2) != 0) continue;
                    e = element(IntVec{twice_a / 2, b});
                } else {
                    e = element(IntVec{root, b});
                }
                if (!best || approx(e, 0) < approx(*best, 0)) best = e;
            }
            if (best) {
                UnitData u;
                u.fundamental = *best;
                Rat n = norm(*best);
                u.fundamental_norm = n > 0 ? 1 : -1;
                u.totally_positive = u.fundamental_norm == 1 ? *best : mul(*best, *best);
                units_ = std::make_unique<UnitData>(u);
                return;
            }
            require(b < Int(100000000), ErrorKind::resource, "fundamental unit search exceeded bound");
        }
    }

    int degree_ = 1;
    FieldKind kind_ = FieldKind::rational;
    Int D_ = 1;
    std::vector<std::vector<IntVec>> table_;
    Int disc_ = 1;
    std::string id_;

    mutable std::once_flag units_once_;
    mutable std::unique_ptr<UnitData> units_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::string, std::shared_ptr<const void>> memo_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

inline FieldElement& FieldElement::operator+=(const FieldElement& o) {
    require(field_ == o.field_, ErrorKind::structural, "elements of different fields");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

inline FieldElement& FieldElement::operator-=(const FieldElement& o) {
    require(field_ == o.field_, ErrorKind::structural, "elements of different fields");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require(a.field_ == b.field_ && a.field_ != nullptr, ErrorKind::structural,
            "elements of different fields");
    return a.field_->mul(a, b);
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    require(a.field_ == b.field_ && a.field_ != nullptr, ErrorKind::structural,
            "elements of different fields");
    return a.field_->mul(a, a.field_->inverse(b));
}

inline FieldElement pow(const FieldElement& x, long e) {
    const NumberField* f = x.field();
    if (e < 0) return pow(f->inverse(x), -e);
    FieldElement r = f->one(), b = x;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

} // namespace eiscong
