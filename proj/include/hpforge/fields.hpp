// Finite fields GF(p^e) and explicit tower extensions, with canonical element
// indices.  An element of a field with base B and degree e is the polynomial
// c0 + c1*x + ... + c_{e-1}*x^{e-1} (ci in B) and carries the index
// sum ci * |B|^i, so index 0 is zero and index 1 is one in every field.
// Moduli are the lexicographically smallest monic irreducibles, coefficient
// lists compared constant-term-first, which makes every field reproducible
// from (p, tower of degrees) alone.
#pragma once

#include "common.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace hpforge {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

class Field : public std::enable_shared_from_this<Field> {
  public:
    static constexpr std::uint64_t kMaxOrder = 1ULL << 20;

    // --- construction ----------------------------------------------------

    static FieldPtr prime(std::uint64_t p) {
        if (!detail::is_prime_u64(p))
            throw NonPrimeCharacteristic("characteristic " + std::to_string(p) + " is not prime");
        if (p > kMaxOrder) throw FieldTooLarge("prime field order exceeds 2^20");
        return finish(new Field(p));
    }

    // Degree-e extension with the canonical (lex-smallest) modulus.
    static FieldPtr extension(FieldPtr base, unsigned e) {
        check_ext_args(base, e);
        return finish(new Field(base, e, smallest_irreducible(*base, e)));
    }

    // Degree-e extension with an explicitly supplied monic irreducible
    // modulus (constant term first, length e+1).
    static FieldPtr extension(FieldPtr base, unsigned e, const std::vector<felem>& modulus) {
        check_ext_args(base, e);
        if (modulus.size() != e + 1 || modulus.back() != 1)
            throw Error("modulus must be monic of degree " + std::to_string(e));
        for (felem c : modulus)
            if (c >= base->order()) throw Error("modulus coefficient out of range");
        std::vector<felem> f(modulus.begin(), modulus.end() - 1);
        if (!is_irreducible(*base, f)) throw Error("supplied modulus is not irreducible");
        return finish(new Field(base, e, f));
    }

    // GF(p^e), optionally as an explicit extension of a given base field.
    static FieldPtr make(std::uint64_t p, unsigned e, FieldPtr base = nullptr) {
        if (base) {
            if (base->characteristic() != p)
                throw NotAnExtensionOverRequestedBase("base characteristic differs");
            return e == 1 && base->order() == p ? base : extension(base, e);
        }
        FieldPtr f = prime(p);
        return e == 1 ? f : extension(f, e);
    }

    // --- structure --------------------------------------------------------

    std::uint64_t order() const { return order_; }
    std::uint64_t characteristic() const { return p_; }
    unsigned degree() const { return deg_; }           // over base()
    const FieldPtr& base() const { return base_; }     // null for prime fields
    bool is_prime_field() const { return base_ == nullptr; }

    // Modulus as stored: coefficients c0..c_{e-1} (base-element indices);
    // the monic leading 1 is implicit.  full_modulus() appends it.
    const std::vector<felem>& modulus_low() const { return mod_; }
    std::vector<felem> full_modulus() const {
        std::vector<felem> m = mod_;
        m.push_back(1);
        return m;
    }

    // Degrees/moduli of every tower level, prime field upward.
    std::vector<unsigned> tower_degrees() const {
        std::vector<unsigned> d = base_ ? base_->tower_degrees() : std::vector<unsigned>{};
        d.push_back(base_ ? deg_ : 1u);
        return d;
    }
    std::vector<std::vector<felem>> tower_moduli() const {
        std::vector<std::vector<felem>> m = base_ ? base_->tower_moduli() : std::vector<std::vector<felem>>{};
        m.push_back(base_ ? full_modulus() : std::vector<felem>{0, 1});
        return m;
    }

    bool same_structure(const Field& o) const {
        if (this == &o) return true;
        return p_ == o.p_ && tower_degrees() == o.tower_degrees() && tower_moduli() == o.tower_moduli();
    }

    // --- arithmetic on canonical indices ---------------------------------

    felem add(felem a, felem b) const {
        if (!add_tab_.empty()) return add_tab_[a * order_ + b];
        if (!base_) return static_cast<felem>((std::uint64_t(a) + b) % p_);
        return add_generic(a, b);
    }

    felem neg(felem a) const { return neg_tab_[a]; }

    felem sub(felem a, felem b) const { return add(a, neg(b)); }

    felem mul(felem a, felem b) const {
        if (!mul_tab_.empty()) return mul_tab_[a * order_ + b];
        if (a == 0 || b == 0) return 0;
        if (!log_.empty()) {
            std::uint64_t s = std::uint64_t(log_[a]) + log_[b];
            if (s >= order_ - 1) s -= order_ - 1;
            return exp_[s];
        }
        if (!base_) return static_cast<felem>(std::uint64_t(a) * b % p_);
        return mul_generic(a, b);
    }

    felem inv(felem a) const {
        if (a == 0) throw DivisionByZero("inverse of zero");
        if (!inv_tab_.empty()) return inv_tab_[a];
        if (!log_.empty()) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
        if (!base_) return prime_inv(a);
        return inv_generic(a);
    }

    felem div(felem a, felem b) const { return mul(a, inv(b)); }

    felem pow(felem a, long long n) const {
        if (n < 0) {
            a = inv(a);  // throws on zero
            n = -n;
        }
        felem r = 1;
        while (n > 0) {
            if (n & 1) r = mul(r, a);
            a = mul(a, a);
            n >>= 1;
        }
        return r;
    }

    // --- coefficients over the base --------------------------------------

    // Little-endian coefficient vector over base(), length degree().
    // For prime fields this is the one-element vector {a}.
    std::vector<felem> coeffs(felem a) const {
        std::vector<felem> c(deg_);
        const std::uint64_t b = base_order();
        for (unsigned i = 0; i < deg_; ++i) {
            c[i] = static_cast<felem>(a % b);
            a = static_cast<felem>(a / b);
        }
        return c;
    }

    felem from_coeffs(const std::vector<felem>& c) const {
        if (c.size() > deg_) throw ArgumentOutOfRange("coefficient vector too long");
        const std::uint64_t b = base_order();
        std::uint64_t v = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i] >= b) throw ArgumentOutOfRange("coefficient out of range");
            v = v * b + c[i];
        }
        return static_cast<felem>(v);
    }

    // Index-preserving subfield embedding: valid when `from` is a tower
    // prefix of `to` (then low coefficients carry the value verbatim).
    static felem embed(const Field& from, const Field& to, felem a) {
        if (!to.has_tower_prefix(from))
            throw NotAnExtensionOverRequestedBase("target field does not extend the requested base");
        return a;
    }

    bool has_tower_prefix(const Field& sub) const {
        const Field* f = this;
        while (f) {
            if (f->same_structure(sub)) return true;
            f = f->base_.get();
        }
        return false;
    }

    // --- polynomial helpers over an arbitrary base (used by tests too) ---

    // Trial division by every monic polynomial of degree 1..deg(f)/2.
    // f is given by its low coefficients (monic leading 1 implicit).
    static bool is_irreducible(const Field& base, const std::vector<felem>& f_low);

  private:
    explicit Field(std::uint64_t p) : p_(p), deg_(1), order_(p) {}

    Field(FieldPtr base, unsigned e, std::vector<felem> mod)
        : p_(base->characteristic()), deg_(e), base_(std::move(base)), mod_(std::move(mod)) {
        order_ = 1;
        for (unsigned i = 0; i < deg_; ++i) {
            order_ *= base_->order();
            if (order_ > kMaxOrder) throw FieldTooLarge("field order exceeds 2^20");
        }
    }

    static void check_ext_args(const FieldPtr& base, unsigned e) {
        if (!base) throw Error("extension requires a base field");
        if (e < 1) throw ArgumentOutOfRange("extension degree must be >= 1");
    }

    std::uint64_t base_order() const { return base_ ? base_->order() : p_; }

    // Generic tower arithmetic via coefficient vectors.
    felem add_generic(felem a, felem b) const {
        const std::uint64_t bo = base_->order();
        std::uint64_t v = 0, m = 1;
        for (unsigned i = 0; i < deg_; ++i) {
            v += m * base_->add(a % bo, b % bo);
            a /= bo;
            b /= bo;
            m *= bo;
        }
        return static_cast<felem>(v);
    }

    felem mul_generic(felem a, felem b) const {
        const std::vector<felem> ca = coeffs(a), cb = coeffs(b);
        // Schoolbook product, then reduce modulo the monic modulus.
        std::vector<felem> pr(2 * deg_ - 1, 0);
        for (unsigned i = 0; i < deg_; ++i) {
            if (ca[i] == 0) continue;
            for (unsigned j = 0; j < deg_; ++j)
                pr[i + j] = base_->add(pr[i + j], base_->mul(ca[i], cb[j]));
        }
        for (std::size_t d = pr.size(); d-- > deg_;) {
            const felem lead = pr[d];
            if (lead == 0) continue;
            pr[d] = 0;
            for (unsigned j = 0; j < deg_; ++j)
                pr[d - deg_ + j] = base_->sub(pr[d - deg_ + j], base_->mul(lead, mod_[j]));
        }
        pr.resize(deg_);
        return from_coeffs(pr);
    }

    felem prime_inv(felem a) const {
        // Extended Euclid on (a, p).
        std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p_), nr = a;
        while (nr != 0) {
            const std::int64_t q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        if (t < 0) t += static_cast<std::int64_t>(p_);
        return static_cast<felem>(t);
    }

    felem inv_generic(felem a) const {
        // a^(order-2); fields are small enough that this is fine.
        felem r = 1, x = a;
        std::uint64_t n = order_ - 2;
        while (n > 0) {
            if (n & 1) r = mul_generic_or_fast(r, x);
            x = mul_generic_or_fast(x, x);
            n >>= 1;
        }
        return r;
    }

    felem mul_generic_or_fast(felem a, felem b) const {
        if (a == 0 || b == 0) return 0;
        return mul_generic(a, b);
    }

    // Table thresholds: full add/mul/inv tables for tiny fields, log/antilog
    // beyond that, pure coefficient arithmetic for the largest orders.
    static constexpr std::uint64_t kFullTableMax = 1024;
    static constexpr std::uint64_t kLogTableMax = 1ULL << 16;

    static FieldPtr finish(Field* raw) {
        FieldPtr f(raw);
        const_cast<Field*>(f.get())->build_tables();
        return f;
    }

    void build_tables() {
        neg_tab_.resize(order_);
        if (!base_) {
            for (std::uint64_t a = 0; a < order_; ++a)
                neg_tab_[a] = static_cast<felem>(a ? p_ - a : 0);
        } else {
            for (std::uint64_t a = 0; a < order_; ++a) {
                std::vector<felem> c = coeffs(static_cast<felem>(a));
                for (felem& x : c) x = base_->neg(x);
                neg_tab_[a] = from_coeffs(c);
            }
        }
        if (order_ <= kFullTableMax) {
            add_tab_.resize(order_ * order_);
            mul_tab_.resize(order_ * order_);
            inv_tab_.assign(order_, 0);
            for (std::uint64_t a = 0; a < order_; ++a)
                for (std::uint64_t b = 0; b < order_; ++b) {
                    const felem fa = static_cast<felem>(a), fb = static_cast<felem>(b);
                    add_tab_[a * order_ + b] = base_ ? add_generic(fa, fb)
                                                     : static_cast<felem>((a + b) % p_);
                    const felem m = base_ ? mul_generic_or_fast(fa, fb)
                                          : static_cast<felem>(a * b % p_);
                    mul_tab_[a * order_ + b] = m;
                    if (m == 1) inv_tab_[a] = fb;
                }
        } else if (order_ <= kLogTableMax) {
            build_log_tables();
        }
    }

    void build_log_tables() {
        log_.assign(order_, 0);
        exp_.assign(order_ - 1, 0);
        for (felem g = 2; g < order_; ++g) {
            felem x = 1;
            std::uint64_t n = 0;
            bool primitive = true;
            do {
                exp_[n] = x;
                log_[x] = static_cast<felem>(n);
                x = base_ ? mul_generic_or_fast(x, g)
                          : static_cast<felem>(std::uint64_t(x) * g % p_);
                ++n;
                if (x == 1) break;
                if (n >= order_ - 1) { primitive = false; break; }
            } while (true);
            if (primitive && n == order_ - 1) return;
        }
        throw Error("no primitive element found");  // unreachable for true fields
    }

    // Lex-smallest monic irreducible of degree e over base, coefficient
    // lists compared constant-term-first.
    static std::vector<felem> smallest_irreducible(const Field& base, unsigned e) {
        const std::uint64_t b = base.order();
        std::uint64_t total = 1;
        for (unsigned i = 0; i < e; ++i) {
            total *= b;
            if (total > kMaxOrder) throw FieldTooLarge("field order exceeds 2^20");
        }
        std::vector<felem> f(e);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            // Constant-term-first lex order: c0 is the most significant digit.
            std::uint64_t v = idx;
            for (unsigned i = e; i-- > 0;) {
                f[i] = static_cast<felem>(v % b);
                v /= b;
            }
            if (is_irreducible(base, f)) return f;
        }
        throw NoIrreducibleFound("no monic irreducible of degree " + std::to_string(e));
    }

    std::uint64_t p_;
    unsigned deg_;
    std::uint64_t order_;
    FieldPtr base_;
    std::vector<felem> mod_;  // low coefficients of the monic modulus

    std::vector<felem> neg_tab_, add_tab_, mul_tab_, inv_tab_;
    std::vector<felem> log_, exp_;
};

// --- polynomial trial division (also the irreducibility oracle's core) ----

namespace detail {

// Remainder of monic-or-not f by monic g, both little-endian over `base`.
inline std::vector<felem> poly_mod(const Field& base, std::vector<felem> f,
                                   const std::vector<felem>& g) {
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const felem lead = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        if (lead != 0)
            for (std::size_t j = 0; j < dg; ++j)
                f[shift + j] = base.sub(f[shift + j], base.mul(lead, g[j]));
        f.pop_back();
    }
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

}  // namespace detail

inline bool Field::is_irreducible(const Field& base, const std::vector<felem>& f_low) {
    const unsigned e = static_cast<unsigned>(f_low.size());
    if (e == 0) return false;
    std::vector<felem> f = f_low;
    f.push_back(1);  // monic
    if (e == 1) return true;
    if (f_low[0] == 0) return false;  // divisible by x
    const std::uint64_t b = base.order();
    for (unsigned d = 1; 2 * d <= e; ++d) {
        // All monic divisor candidates of degree d.
        std::uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= b;
        std::vector<felem> g(d + 1);
        g[d] = 1;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t v = idx;
            for (unsigned i = 0; i < d; ++i) {
                g[i] = static_cast<felem>(v % b);
                v /= b;
            }
            if (detail::poly_mod(base, f, g).empty()) return false;
        }
    }
    return true;
}

// --- checked element wrapper ----------------------------------------------

// Value-semantic element carrying its field; mixed-field operations throw.
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(FieldPtr f, felem v) : f_(std::move(f)), v_(v) {
        if (v_ >= f_->order()) throw ArgumentOutOfRange("element index out of range");
    }

    const FieldPtr& field() const { return f_; }
    felem value() const { return v_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        return {a.f_, a.match(b).add(a.v_, b.v_)};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        return {a.f_, a.match(b).sub(a.v_, b.v_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        return {a.f_, a.match(b).mul(a.v_, b.v_)};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        return {a.f_, a.match(b).div(a.v_, b.v_)};
    }
    FieldElement operator-() const { return {f_, f_->neg(v_)}; }
    FieldElement inverse() const { return {f_, f_->inv(v_)}; }
    FieldElement pow(long long n) const { return {f_, f_->pow(v_, n)}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.match(b), a.v_ == b.v_;
    }

  private:
    const Field& match(const FieldElement& o) const {
        if (f_.get() != o.f_.get() && !f_->same_structure(*o.f_))
            throw FieldMismatch("elements of different fields");
        return *f_;
    }

    FieldPtr f_;
    felem v_ = 0;
};

// --- shared cache ----------------------------------------------------------

// Constructions repeatedly ask for the same small fields; building tables
// once per structure keeps that cheap.  Keyed by (p, tower degrees) since
// canonical moduli are a function of those.
inline FieldPtr cached_field(std::uint64_t p, const std::vector<unsigned>& tower) {
    static std::map<std::pair<std::uint64_t, std::vector<unsigned>>, FieldPtr> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, tower);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    FieldPtr f = Field::prime(p);
    for (std::size_t i = 0; i < tower.size(); ++i) {
        if (i == 0 && tower[i] == 1) continue;
        f = Field::extension(f, tower[i]);
    }
    cache.emplace(std::move(key), f);
    return f;
}

// GF(q) for a prime power q (the common entry point: factors q = p^e itself).
inline FieldPtr gf(std::uint64_t q) {
    for (std::uint64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            unsigned e = 0;
            std::uint64_t v = q;
            while (v % p == 0) { v /= p; ++e; }
            if (v != 1)
                throw NonPrimeCharacteristic(std::to_string(q) + " is not a prime power");
            return cached_field(p, {e});
        }
    }
    return cached_field(q, {1});  // q itself prime
}

// GF(q^m) built as an explicit degree-m tower over GF(q).
inline FieldPtr gf_tower(std::uint64_t q, unsigned m) {
    FieldPtr base = gf(q);
    if (m == 1) return base;
    std::vector<unsigned> tower = base->tower_degrees();
    tower.push_back(m);
    return cached_field(base->characteristic(), tower);
}

}  // namespace hpforge
