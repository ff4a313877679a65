#pragma once

/**
 * @file polycore.hpp
 * @brief Exact sparse multivariate polynomials in the perturbation parameters.
 *
 * A Poly<C> is a sorted list of (monomial, coefficient) terms over a named
 * ring of variables. Terms are kept in descending order for the graded
 * order with lexicographic tie-break (grlex), so the first term is always
 * the initial monomial In(p). The coefficient type is a field: exact
 * rationals (Rational) or rational functions in pi (PiFrac, see pifield.hpp).
 *
 * The Gröbner data computed downstream (and every constant derived from it)
 * depends on this choice of order.
 */

#include "errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cyclebound {

using Rational = mpq_class;

inline bool is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool is_one(const Rational& c) { return c == 1; }
inline double to_double(const Rational& c) { return c.get_d(); }
inline double magnitude(const Rational& c) { return std::abs(c.get_d()); }
inline std::string coeff_to_string(const Rational& c) { return c.get_str(); }

/// n/d in lowest terms (mpq_class(n, d) alone does not reduce).
inline Rational ratio(long n, long d) {
    if (d == 0) throw InputError("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Parses "p/q", "-p", "p" into an exact rational; throws InputError.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InputError("empty rational literal");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool slash = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '/') {
            if (slash || i == start || i + 1 == s.size()) throw InputError("malformed rational '" + s + "'");
            slash = true;
        } else if (ch < '0' || ch > '9') {
            throw InputError("malformed rational '" + s + "'");
        }
    }
    if (start == s.size()) throw InputError("malformed rational '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw InputError("malformed rational '" + s + "'");
    if (slash && sgn(q.get_den()) == 0) throw InputError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

/// Upper limit on the number of ring variables (2(d+1) for d <= 6).
inline constexpr std::size_t kMaxVars = 15;

/**
 * @brief Exponent vector packed as bytes: [total degree, e_1, ..., e_15].
 *
 * Packing the total degree first makes byte-wise comparison coincide with
 * grlex, which keeps comparisons and hashing cheap in the inner loops.
 */
class Monomial {
public:
    Monomial() noexcept { bytes_.fill(0); }

    static Monomial from_exponents(std::span<const unsigned> exps) {
        if (exps.size() > kMaxVars) throw InputError("too many variables for a monomial");
        Monomial m;
        unsigned total = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            total += exps[i];
            if (exps[i] > 255 || total > 255) throw ComputationError("monomial degree exceeds 255");
            m.bytes_[i + 1] = static_cast<std::uint8_t>(exps[i]);
        }
        m.bytes_[0] = static_cast<std::uint8_t>(total);
        return m;
    }

    static Monomial variable(std::size_t index, unsigned power = 1) {
        if (index >= kMaxVars) throw InputError("variable index out of range");
        if (power > 255) throw ComputationError("monomial degree exceeds 255");
        Monomial m;
        m.bytes_[index + 1] = static_cast<std::uint8_t>(power);
        m.bytes_[0] = static_cast<std::uint8_t>(power);
        return m;
    }

    unsigned degree() const noexcept { return bytes_[0]; }
    unsigned operator[](std::size_t i) const noexcept { return bytes_[i + 1]; }
    bool is_one() const noexcept { return bytes_[0] == 0; }

    std::vector<unsigned> exponents(std::size_t nvars) const {
        std::vector<unsigned> e(nvars);
        for (std::size_t i = 0; i < nvars; ++i) e[i] = bytes_[i + 1];
        return e;
    }

    bool divides(const Monomial& other) const noexcept {
        if (bytes_[0] > other.bytes_[0]) return false;
        for (std::size_t i = 1; i <= kMaxVars; ++i)
            if (bytes_[i] > other.bytes_[i]) return false;
        return true;
    }

    bool coprime(const Monomial& other) const noexcept {
        for (std::size_t i = 1; i <= kMaxVars; ++i)
            if (bytes_[i] != 0 && other.bytes_[i] != 0) return false;
        return true;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        if (unsigned(a.bytes_[0]) + b.bytes_[0] > 255) throw ComputationError("monomial degree exceeds 255");
        Monomial m;
        for (std::size_t i = 0; i <= kMaxVars; ++i)
            m.bytes_[i] = static_cast<std::uint8_t>(a.bytes_[i] + b.bytes_[i]);
        return m;
    }

    /// Exact quotient; the divisor must divide *this.
    Monomial operator/(const Monomial& d) const {
        if (!d.divides(*this)) throw InternalError("monomial quotient of non-divisible pair");
        Monomial m;
        for (std::size_t i = 0; i <= kMaxVars; ++i)
            m.bytes_[i] = static_cast<std::uint8_t>(bytes_[i] - d.bytes_[i]);
        return m;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) noexcept {
        Monomial m;
        unsigned total = 0;
        for (std::size_t i = 1; i <= kMaxVars; ++i) {
            m.bytes_[i] = std::max(a.bytes_[i], b.bytes_[i]);
            total += m.bytes_[i];
        }
        m.bytes_[0] = static_cast<std::uint8_t>(std::min(total, 255u));
        return m;
    }

    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
        return std::memcmp(a.bytes_.data(), b.bytes_.data(), kMaxVars + 1) <=> 0;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
        return std::memcmp(a.bytes_.data(), b.bytes_.data(), kMaxVars + 1) == 0;
    }

    std::size_t hash() const noexcept {
        std::uint64_t lo, hi;
        std::memcpy(&lo, bytes_.data(), 8);
        std::memcpy(&hi, bytes_.data() + 8, 8);
        return std::hash<std::uint64_t>{}(lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL));
    }

private:
    std::array<std::uint8_t, kMaxVars + 1> bytes_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

enum class Ordering { less, equal, greater };

/**
 * @brief The monomial order: graded by total degree, ties broken
 * lexicographically (the first differing exponent decides, larger wins).
 *
 * So (2,0) > (1,1) > (0,2) within degree 2. It is a total order compatible
 * with addition: a <= a+b, and a1+b <= a2+b iff a1 <= a2.
 */
struct OrderSpec {
    static constexpr std::string_view name = "grlex";
};

inline Ordering order_compare(std::span<const unsigned> a, std::span<const unsigned> b,
                              const OrderSpec& = {}) {
    if (a.size() != b.size()) throw InputError("order_compare: exponent vectors of different length");
    unsigned long da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da < db ? Ordering::less : Ordering::greater;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? Ordering::less : Ordering::greater;
    return Ordering::equal;
}

/// Total degree with an explicit minus-infinity for the zero polynomial.
class Degree {
public:
    constexpr Degree(int value) : value_(value) {}
    static constexpr Degree minus_infinity() { return Degree(); }

    constexpr bool is_minus_infinity() const { return !value_.has_value(); }
    int value() const {
        if (!value_) throw DomainError("degree of the zero polynomial is -infinity");
        return *value_;
    }

    friend constexpr Degree operator+(Degree a, Degree b) {
        if (!a.value_ || !b.value_) return minus_infinity();
        return Degree(*a.value_ + *b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
        if (!a.value_ || !b.value_) return a.value_.has_value() <=> b.value_.has_value();
        return *a.value_ <=> *b.value_;
    }
    friend constexpr bool operator==(Degree a, Degree b) { return a.value_ == b.value_; }

    std::string to_string() const { return value_ ? std::to_string(*value_) : "-inf"; }

private:
    constexpr Degree() = default;
    std::optional<int> value_;
};

/// Ordered list of variable names shared by polynomials of one ring.
class Ring {
public:
    explicit Ring(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > kMaxVars) throw InputError("at most 15 ring variables are supported");
    }
    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view n) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return i;
        return std::nullopt;
    }
    friend bool operator==(const Ring&, const Ring&) = default;

private:
    std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> names) {
    return std::make_shared<const Ring>(std::move(names));
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Zero test found by argument-dependent lookup, usable inside Poly (whose
/// member is_zero() would hide the free functions).
template <class C>
bool coeff_is_zero(const C& c) {
    return is_zero(c);
}

template <class C>
concept Coefficient = requires(C a, C b) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { a / b } -> std::convertible_to<C>;
    { -a } -> std::convertible_to<C>;
    { is_zero(a) } -> std::convertible_to<bool>;
    { magnitude(a) } -> std::convertible_to<double>;
    { to_double(a) } -> std::convertible_to<double>;
    { coeff_to_string(a) } -> std::convertible_to<std::string>;
};

template <class C>
struct Term {
    Monomial mono;
    C coeff;
};

template <Coefficient C>
class Poly;

/// Hash-map accumulator used by products and bulk sums.
template <Coefficient C>
class PolyAccumulator {
public:
    void add_term(const Monomial& m, const C& c) {
        auto [it, inserted] = acc_.try_emplace(m, c);
        if (!inserted) it->second += c;
    }

    void add(const Poly<C>& p) {
        for (const auto& t : p.terms()) add_term(t.mono, t.coeff);
    }

    void add_scaled(const Poly<C>& p, const C& s) {
        for (const auto& t : p.terms()) add_term(t.mono, t.coeff * s);
    }

    void add_product(const Poly<C>& a, const Poly<C>& b) {
        acc_.reserve(acc_.size() + a.size() * b.size() / 2 + 1);
        for (const auto& ta : a.terms())
            for (const auto& tb : b.terms()) add_term(ta.mono * tb.mono, ta.coeff * tb.coeff);
    }

    bool empty() const { return acc_.empty(); }

    Poly<C> take(RingPtr ring) {
        std::vector<Term<C>> terms;
        terms.reserve(acc_.size());
        for (auto& [m, c] : acc_)
            if (!coeff_is_zero(c)) terms.push_back(Term<C>{m, std::move(c)});
        acc_.clear();
        std::sort(terms.begin(), terms.end(), [](const Term<C>& x, const Term<C>& y) { return x.mono > y.mono; });
        return Poly<C>::from_sorted_unique(std::move(ring), std::move(terms));
    }

private:
    std::unordered_map<Monomial, C, MonomialHash> acc_;
};

/**
 * @brief Sparse polynomial with exact coefficients, terms sorted by
 * descending grlex order, no zero coefficients stored.
 */
template <Coefficient C>
class Poly {
public:
    using coeff_type = C;

    Poly() = default;
    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly constant(RingPtr ring, const C& c) {
        Poly p(std::move(ring));
        if (!coeff_is_zero(c)) p.terms_.push_back(Term<C>{Monomial{}, c});
        return p;
    }

    static Poly variable(RingPtr ring, std::size_t index) {
        if (index >= ring->size()) throw InputError("variable index out of range");
        Poly p(std::move(ring));
        p.terms_.push_back(Term<C>{Monomial::variable(index), C(1)});
        return p;
    }

    static Poly variable(RingPtr ring, std::string_view name) {
        auto idx = ring->index_of(name);
        if (!idx) throw InputError("unknown variable '" + std::string(name) + "'");
        return variable(std::move(ring), *idx);
    }

    static Poly monomial(RingPtr ring, const Monomial& m, const C& c) {
        Poly p(std::move(ring));
        if (!coeff_is_zero(c)) p.terms_.push_back(Term<C>{m, c});
        return p;
    }

    /// Canonicalizes arbitrary terms: sorts, merges duplicates, drops zeros.
    static Poly from_terms(RingPtr ring, std::vector<Term<C>> terms) {
        PolyAccumulator<C> acc;
        for (auto& t : terms) acc.add_term(t.mono, t.coeff);
        return acc.take(std::move(ring));
    }

    static Poly from_sorted_unique(RingPtr ring, std::vector<Term<C>> terms) {
        Poly p(std::move(ring));
        p.terms_ = std::move(terms);
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    std::size_t nvars() const { return ring_ ? ring_->size() : 0; }
    const std::vector<Term<C>>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Degree degree() const {
        if (terms_.empty()) return Degree::minus_infinity();
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.mono.degree());
        return Degree(static_cast<int>(d));
    }

    bool is_homogeneous() const {
        for (const auto& t : terms_)
            if (t.mono.degree() != terms_.front().mono.degree()) return false;
        return true;
    }

    /// Initial term In(p); the zero polynomial has none.
    const Term<C>& leading() const {
        if (terms_.empty()) throw DomainError("the zero polynomial has no privileged exponent");
        return terms_.front();
    }

    C coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term<C>& t, const Monomial& key) { return t.mono > key; });
        if (it != terms_.end() && it->mono == m) return it->coeff;
        return C(0);
    }

    Poly& operator+=(const Poly& o) { return *this = merge(*this, o, false); }
    Poly& operator-=(const Poly& o) { return *this = merge(*this, o, true); }
    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        check_rings(a, b);
        RingPtr ring = a.ring_ ? a.ring_ : b.ring_;
        if (a.is_zero() || b.is_zero()) return Poly(ring);
        if (a.size() == 1) return b.mul_term(a.terms_[0].mono, a.terms_[0].coeff);
        if (b.size() == 1) return a.mul_term(b.terms_[0].mono, b.terms_[0].coeff);
        PolyAccumulator<C> acc;
        acc.add_product(a, b);
        return acc.take(ring);
    }

    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    /// Multiplication by a single term; order is preserved (grlex is monomial-compatible).
    Poly mul_term(const Monomial& m, const C& c) const {
        Poly r(ring_);
        if (coeff_is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back(Term<C>{t.mono * m, t.coeff * c});
        return r;
    }

    Poly scaled(const C& c) const { return mul_term(Monomial{}, c); }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        if (!a.terms_.empty() && !same_ring(a.ring_, b.ring_)) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        return true;
    }

    /// Evaluates at a point given as coefficient values.
    C evaluate(std::span<const C> point) const {
        if (point.size() != nvars()) throw InputError("evaluate: point has wrong dimension");
        C sum(0);
        for (const auto& t : terms_) {
            C v = t.coeff;
            for (std::size_t i = 0; i < point.size(); ++i)
                for (unsigned e = 0; e < t.mono[i]; ++e) v *= point[i];
            sum += v;
        }
        return sum;
    }

    double evaluate_double(std::span<const double> point) const {
        if (point.size() != nvars()) throw InputError("evaluate: point has wrong dimension");
        double sum = 0.0;
        for (const auto& t : terms_) {
            double v = to_double(t.coeff);
            for (std::size_t i = 0; i < point.size(); ++i)
                for (unsigned e = 0; e < t.mono[i]; ++e) v *= point[i];
            sum += v;
        }
        return sum;
    }

    /// Replaces variable i by images[i]; all images share one target ring.
    Poly substitute(std::span<const Poly> images) const {
        if (images.size() != nvars()) throw InputError("substitute: wrong number of images");
        RingPtr target = images.empty() ? ring_ : images.front().ring();
        std::vector<std::vector<Poly>> powers(images.size());
        auto power = [&](std::size_t i, unsigned e) -> const Poly& {
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(Poly::constant(target, C(1)));
            while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
            return cache[e];
        };
        PolyAccumulator<C> acc;
        for (const auto& t : terms_) {
            Poly v = Poly::constant(target, t.coeff);
            for (std::size_t i = 0; i < images.size(); ++i)
                if (t.mono[i] != 0) v = v * power(i, t.mono[i]);
            acc.add(v);
        }
        return acc.take(target);
    }

    /// Same terms, coefficients mapped through f (zeros dropped).
    template <Coefficient D, class F>
    Poly<D> map_coeffs(F&& f) const {
        std::vector<Term<D>> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            D c = f(t.coeff);
            if (!coeff_is_zero(c)) out.push_back(Term<D>{t.mono, std::move(c)});
        }
        return Poly<D>::from_sorted_unique(ring_, std::move(out));
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            std::string c = coeff_to_string(t.coeff);
            bool compound = c.find(" + ") != std::string::npos || c.find(" - ") != std::string::npos ||
                            c.find(')') != std::string::npos;
            bool negative = !compound && !c.empty() && c[0] == '-';
            if (!first) os << (negative ? " - " : " + ");
            else if (negative) os << "-";
            if (negative) c.erase(0, 1);
            bool need_coeff = !t.mono.is_one() ? (c != "1") : true;
            if (need_coeff) os << (compound ? "(" + c + ")" : c);
            bool star = need_coeff;
            for (std::size_t i = 0; i < nvars(); ++i) {
                unsigned e = t.mono[i];
                if (e == 0) continue;
                os << (star ? "*" : "") << ring_->name(i);
                if (e > 1) os << "^" << e;
                star = true;
            }
            first = false;
        }
        return os.str();
    }

private:
    static void check_rings(const Poly& a, const Poly& b) {
        if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_))
            throw InputError("polynomials over different variable sets");
    }

    static Poly merge(const Poly& a, const Poly& b, bool subtract) {
        check_rings(a, b);
        Poly r(a.ring_ ? a.ring_ : b.ring_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->mono > ib->mono)) {
                r.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->mono > ia->mono) {
                r.terms_.push_back(Term<C>{ib->mono, subtract ? C(-ib->coeff) : ib->coeff});
                ++ib;
            } else {
                C c = subtract ? C(ia->coeff - ib->coeff) : C(ia->coeff + ib->coeff);
                if (!coeff_is_zero(c)) r.terms_.push_back(Term<C>{ia->mono, std::move(c)});
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    RingPtr ring_;
    std::vector<Term<C>> terms_;
};

template <Coefficient C>
std::ostream& operator<<(std::ostream& os, const Poly<C>& p) {
    return os << p.to_string();
}

using ParamPoly = Poly<Rational>;

/// l1 coefficient norm, exact.
inline Rational norm(const ParamPoly& p) {
    Rational s = 0;
    for (const auto& t : p.terms()) s += abs(t.coeff);
    return s;
}

/// l1 coefficient norm of the real values of the coefficients.
template <Coefficient C>
double norm_value(const Poly<C>& p) {
    double s = 0.0;
    for (const auto& t : p.terms()) s += magnitude(t.coeff);
    return s;
}

template <Coefficient C>
Poly<C> pow(const Poly<C>& p, unsigned e) {
    Poly<C> result = Poly<C>::constant(p.ring(), C(1));
    Poly<C> base = p;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

/// Privileged exponent and initial coefficient, In(p).
template <Coefficient C>
std::pair<std::vector<unsigned>, C> privileged_exponent(const Poly<C>& p, const OrderSpec& = {}) {
    const auto& lt = p.leading();
    return {lt.mono.exponents(p.nvars()), lt.coeff};
}

} // namespace cyclebound
