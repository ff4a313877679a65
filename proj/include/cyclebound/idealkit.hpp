#pragma once

/**
 * @file idealkit.hpp
 * @brief Division by standard bases with norm tracking, Buchberger
 * completion with cofactors, ideal membership, the Bautin index and
 * phi-equivalence of coefficient sequences.
 *
 * Everything is templated on the coefficient field (Rational or PiFrac).
 */

#include "pifield.hpp"

#include <chrono>
#include <map>
#include <set>
#include <type_traits>

namespace cyclebound {

/// Exact norms for rational coefficients, doubles for Q(pi).
template <class C>
struct NormTraits {
    using type = double;
    static type abs(const C& c) { return magnitude(c); }
    static bool le(const type& a, const type& b) { return a <= b * (1 + 1e-9) + 1e-300; }
    static double to_double(const type& v) { return v; }
};

template <>
struct NormTraits<Rational> {
    using type = Rational;
    static type abs(const Rational& c) { return sgn(c) < 0 ? Rational(-c) : c; }
    static bool le(const type& a, const type& b) { return a <= b; }
    static double to_double(const type& v) { return v.get_d(); }
};

template <Coefficient C>
typename NormTraits<C>::type poly_norm(const Poly<C>& p) {
    typename NormTraits<C>::type s(0);
    for (const auto& t : p.terms()) s += NormTraits<C>::abs(t.coeff);
    return s;
}

/**
 * @brief The partition of N^D attached to a list of privileged exponents:
 * Delta_i holds the exponents divisible by exp(g_i) and by no earlier
 * exp(g_j); the complement is Delta-bar.
 */
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<Monomial> exps) : exps_(std::move(exps)) {}

    /// Index of the part containing alpha, or nullopt for Delta-bar.
    std::optional<std::size_t> locate(const Monomial& alpha) const {
        for (std::size_t i = 0; i < exps_.size(); ++i)
            if (exps_[i].divides(alpha)) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> locate(std::span<const unsigned> alpha) const {
        return locate(Monomial::from_exponents(alpha));
    }

    const std::vector<Monomial>& exps() const { return exps_; }

private:
    std::vector<Monomial> exps_;
};

enum class DivisionStrategy {
    leading_first,   ///< always treat the initial term (as in the existence proof)
    trailing_first,  ///< treat the smallest reducible monomial first
};

template <Coefficient C>
struct DivisionResult {
    using Norm = typename NormTraits<C>::type;
    std::vector<Poly<C>> quotients;
    Poly<C> remainder;
    std::size_t steps = 0;
    std::vector<double> growth;  ///< norm(f^(t+1)) / norm(f^(t)) per reduction step
    Norm C_const{0};             ///< max 1/|initial coefficient of g_j|
    Norm G_const{0};             ///< max norm(g_j)
    bool growth_ok = true;       ///< every step obeyed norm(f^(t+1)) <= (1 + CG) norm(f^(t))
};

template <Coefficient C>
typename NormTraits<C>::type division_C(const std::vector<Poly<C>>& gens) {
    using NT = NormTraits<C>;
    typename NT::type c(0);
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        auto inv = NT::abs(C(1) / g.leading().coeff);
        if (inv > c) c = inv;
    }
    return c;
}

template <Coefficient C>
typename NormTraits<C>::type division_G(const std::vector<Poly<C>>& gens) {
    typename NormTraits<C>::type G(0);
    for (const auto& g : gens) {
        auto n = poly_norm(g);
        if (n > G) G = n;
    }
    return G;
}

struct DivisionOptions {
    DivisionStrategy strategy = DivisionStrategy::leading_first;
    bool track_growth = true;
};

/**
 * @brief f = sum h_i g_i + h with supports respecting the partition.
 * Zero divisors are skipped (their quotient stays 0).
 */
template <Coefficient C>
DivisionResult<C> hironaka_divide(const Poly<C>& f, const std::vector<Poly<C>>& gens,
                                  const DivisionOptions& opt = {}) {
    using NT = NormTraits<C>;
    const RingPtr ring = f.ring() ? f.ring() : (gens.empty() ? RingPtr() : gens.front().ring());
    for (const auto& g : gens)
        if (g.ring() && ring && !same_ring(g.ring(), ring)) throw InputError("division over different rings");

    DivisionResult<C> out;
    out.quotients.assign(gens.size(), Poly<C>(ring));
    out.remainder = Poly<C>(ring);
    if (opt.track_growth) {
        out.C_const = division_C(gens);
        out.G_const = division_G(gens);
    }
    std::vector<Monomial> exps;
    std::vector<std::size_t> index;  // gens position of each partition entry
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!gens[i].is_zero()) {
            exps.push_back(gens[i].leading().mono);
            index.push_back(i);
        }
    Partition part(exps);

    using Work = std::map<Monomial, C, std::greater<Monomial>>;
    Work work;
    for (const auto& t : f.terms()) work.emplace(t.mono, t.coeff);
    typename NT::type current(0);
    if (opt.track_growth) current = poly_norm(f);
    const typename NT::type bound_factor = typename NT::type(1) + out.C_const * out.G_const;

    std::vector<std::vector<Term<C>>> qterms(gens.size());
    std::vector<Term<C>> rterms;

    auto pick = [&]() -> typename Work::iterator {
        if (opt.strategy == DivisionStrategy::leading_first) return work.begin();
        for (auto it = work.end(); it != work.begin();) {
            --it;
            if (part.locate(it->first)) return it;
        }
        return work.begin();  // nothing reducible: peel the leading term into the remainder
    };

    while (!work.empty()) {
        auto it = pick();
        Monomial alpha = it->first;
        C coeff = it->second;
        auto where = part.locate(alpha);
        if (!where) {
            rterms.push_back(Term<C>{alpha, coeff});
            if (opt.track_growth) current -= NT::abs(coeff);
            work.erase(it);
            continue;
        }
        std::size_t gi = index[*where];
        const Poly<C>& g = gens[gi];
        const auto& lt = g.leading();
        Monomial beta = alpha / lt.mono;
        C q = coeff / lt.coeff;
        qterms[gi].push_back(Term<C>{beta, q});
        typename NT::type before = current;
        for (const auto& t : g.terms()) {
            Monomial m = t.mono * beta;
            C delta = q * t.coeff;
            auto [w, inserted] = work.try_emplace(m, C(0));
            if (opt.track_growth) current -= NT::abs(w->second);
            w->second -= delta;
            if (coeff_is_zero(w->second)) {
                work.erase(w);
            } else if (opt.track_growth) {
                current += NT::abs(w->second);
            }
        }
        ++out.steps;
        if (opt.track_growth) {
            if (!NT::le(current, bound_factor * before)) out.growth_ok = false;
            double b = NT::to_double(before);
            out.growth.push_back(b > 0 ? NT::to_double(current) / b : 0.0);
        }
    }
    for (std::size_t i = 0; i < gens.size(); ++i) out.quotients[i] = Poly<C>::from_terms(ring, std::move(qterms[i]));
    out.remainder = Poly<C>::from_terms(ring, std::move(rterms));
    return out;
}

/// Sum h_i g_i + h - f, which must be zero.
template <Coefficient C>
Poly<C> division_defect(const Poly<C>& f, const std::vector<Poly<C>>& gens, const DivisionResult<C>& r) {
    PolyAccumulator<C> acc;
    for (std::size_t i = 0; i < gens.size(); ++i) acc.add_product(r.quotients[i], gens[i]);
    acc.add(r.remainder);
    acc.add_scaled(f, C(-1));
    return acc.take(f.ring());
}

/**
 * @brief A Gröbner basis of the ideal spanned by `inputs`, with the
 * change-of-basis matrix gens[j] = sum_l cofactors[j][l] * inputs[l].
 * When degree_bound is set the basis is complete only up to that degree
 * (exact for homogeneous inputs and targets of degree <= the bound).
 */
template <Coefficient C>
struct GrobnerBasis {
    RingPtr ring;
    std::vector<Poly<C>> inputs;
    std::vector<Poly<C>> gens;
    std::vector<std::vector<Poly<C>>> cofactors;
    std::optional<unsigned> degree_bound;
    std::size_t pairs_reduced = 0;
    std::size_t pairs_product = 0;
    std::size_t pairs_chain = 0;
    std::size_t pairs_over_bound = 0;

    std::vector<Monomial> exps() const {
        std::vector<Monomial> e;
        for (const auto& g : gens) e.push_back(g.leading().mono);
        return e;
    }
    bool has_cofactors() const { return !cofactors.empty() || gens.empty(); }

    /// max_j sum_l norm(cofactors[j][l]).
    double cofactor_norm() const {
        double M = 0.0;
        for (const auto& row : cofactors) {
            double s = 0.0;
            for (const auto& p : row) s += NormTraits<C>::to_double(poly_norm(p));
            M = std::max(M, s);
        }
        return M;
    }
};

struct BuchbergerOptions {
    std::optional<unsigned> degree_bound;
    bool track_cofactors = true;
    bool reduce = true;  ///< interreduce the final basis
    std::size_t max_basis = 5000;
    std::size_t max_pairs = 1'000'000;
    double max_seconds = 1800.0;
};

/**
 * @brief Incremental Buchberger completion: generators can be added after
 * a completion and the run continued. Pair selection is the normal
 * strategy (smallest lcm first), with the product and chain criteria.
 */
template <Coefficient C>
class BuchbergerEngine {
public:
    explicit BuchbergerEngine(RingPtr ring, BuchbergerOptions opt = {}) : ring_(std::move(ring)), opt_(opt) {}

    /// Adds an input generator; returns its input index.
    std::size_t add_generator(const Poly<C>& f) {
        if (f.ring() && !same_ring(f.ring(), ring_)) throw InputError("generator over a different ring");
        std::size_t l = inputs_.size();
        inputs_.push_back(f);
        for (auto& row : cof_) row.push_back(Poly<C>(ring_));
        if (f.is_zero()) return l;
        std::vector<Poly<C>> cof;
        if (opt_.track_cofactors) {
            cof.assign(inputs_.size(), Poly<C>(ring_));
            cof[l] = Poly<C>::constant(ring_, C(1));
        }
        insert(f, std::move(cof));
        return l;
    }

    void complete() {
        auto start = std::chrono::steady_clock::now();
        while (!pending_.empty()) {
            auto it = pending_.begin();
            Pair p = *it;
            pending_.erase(it);
            status_[key(p.i, p.j)] = Status::treated;
            if (opt_.degree_bound && p.lcm.degree() > *opt_.degree_bound) {
                ++over_bound_;
                status_[key(p.i, p.j)] = Status::over_bound;
                continue;
            }
            if (chain_skip(p)) {
                ++chain_;
                continue;
            }
            if (++reduced_ > opt_.max_pairs) throw ComputationError("Buchberger: pair limit exceeded");
            double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (elapsed > opt_.max_seconds) throw ComputationError("Buchberger: time limit exceeded");
            auto [s, scof] = spoly(p.i, p.j);
            auto [r, rcof] = reduce_full(s, std::move(scof));
            if (!r.is_zero()) {
                if (gens_.size() >= opt_.max_basis) throw ComputationError("Buchberger: basis size limit exceeded");
                insert(r, std::move(rcof));
            }
        }
    }

    /// Completed basis (call complete() first); interreduced if requested.
    GrobnerBasis<C> basis() const {
        if (!pending_.empty()) throw InternalError("basis requested before completion");
        GrobnerBasis<C> gb;
        gb.ring = ring_;
        gb.inputs = inputs_;
        gb.degree_bound = opt_.degree_bound;
        gb.pairs_reduced = reduced_;
        gb.pairs_product = product_;
        gb.pairs_chain = chain_;
        gb.pairs_over_bound = over_bound_;
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            bool redundant = false;
            for (std::size_t k = 0; k < gens_.size() && !redundant; ++k) {
                if (k == j) continue;
                const Monomial& mk = gens_[k].leading().mono;
                const Monomial& mj = gens_[j].leading().mono;
                if (mk.divides(mj) && (!(mk == mj) || k < j)) redundant = true;
            }
            if (!redundant || !opt_.reduce) keep.push_back(j);
        }
        for (std::size_t j : keep) {
            gb.gens.push_back(gens_[j]);
            if (opt_.track_cofactors) gb.cofactors.push_back(cof_[j]);
        }
        if (opt_.reduce) {
            // Tail-reduce each element by the others, then make it monic.
            for (std::size_t j = 0; j < gb.gens.size(); ++j) {
                std::vector<Poly<C>> others;
                for (std::size_t k = 0; k < gb.gens.size(); ++k)
                    others.push_back(k == j ? Poly<C>(ring_) : gb.gens[k]);
                auto div = hironaka_divide(gb.gens[j], others, {DivisionStrategy::leading_first, false});
                // The leading term is irreducible by the others, so it survives in the remainder.
                Poly<C> r = div.remainder;
                C inv = C(1) / r.leading().coeff;
                if (opt_.track_cofactors) {
                    auto row = gb.cofactors[j];
                    for (std::size_t k = 0; k < gb.gens.size(); ++k) {
                        if (div.quotients[k].is_zero()) continue;
                        for (std::size_t l = 0; l < row.size(); ++l)
                            row[l] -= div.quotients[k] * gb.cofactors[k][l];
                    }
                    for (auto& p : row) p = p.scaled(inv);
                    gb.cofactors[j] = std::move(row);
                }
                gb.gens[j] = r.scaled(inv);
            }
        }
        return gb;
    }

    const std::vector<Poly<C>>& current_gens() const { return gens_; }

private:
    enum class Status { pending, treated, over_bound };
    struct Pair {
        Monomial lcm;
        std::size_t i, j;
        friend bool operator<(const Pair& a, const Pair& b) {
            if (!(a.lcm == b.lcm)) return a.lcm < b.lcm;
            if (a.j != b.j) return a.j < b.j;
            return a.i < b.i;
        }
    };

    static std::uint64_t key(std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(i) << 32) | j;
    }

    void insert(const Poly<C>& g, std::vector<Poly<C>> cof) {
        std::size_t n = gens_.size();
        gens_.push_back(g);
        cof_.push_back(std::move(cof));
        const Monomial& ln = g.leading().mono;
        for (std::size_t i = 0; i < n; ++i) {
            const Monomial& li = gens_[i].leading().mono;
            if (li.coprime(ln)) {
                ++product_;
                status_[key(i, n)] = Status::treated;
                continue;
            }
            pending_.insert(Pair{Monomial::lcm(li, ln), i, n});
            status_[key(i, n)] = Status::pending;
        }
    }

    bool treated(std::size_t a, std::size_t b) const {
        auto it = status_.find(key(a, b));
        return it != status_.end() && it->second == Status::treated;
    }

    bool chain_skip(const Pair& p) const {
        for (std::size_t k = 0; k < gens_.size(); ++k) {
            if (k == p.i || k == p.j) continue;
            if (!gens_[k].leading().mono.divides(p.lcm)) continue;
            if (treated(p.i, k) && treated(p.j, k)) return true;
        }
        return false;
    }

    std::pair<Poly<C>, std::vector<Poly<C>>> spoly(std::size_t i, std::size_t j) const {
        const auto& ti = gens_[i].leading();
        const auto& tj = gens_[j].leading();
        Monomial l = Monomial::lcm(ti.mono, tj.mono);
        Monomial mi = l / ti.mono, mj = l / tj.mono;
        C ci = C(1) / ti.coeff, cj = C(-1) / tj.coeff;
        Poly<C> s = gens_[i].mul_term(mi, ci) + gens_[j].mul_term(mj, cj);
        std::vector<Poly<C>> cof;
        if (opt_.track_cofactors) {
            cof.assign(inputs_.size(), Poly<C>(ring_));
            for (std::size_t l2 = 0; l2 < inputs_.size(); ++l2)
                cof[l2] = cof_[i][l2].mul_term(mi, ci) + cof_[j][l2].mul_term(mj, cj);
        }
        return {s, cof};
    }

    std::pair<Poly<C>, std::vector<Poly<C>>> reduce_full(const Poly<C>& s, std::vector<Poly<C>> cof) const {
        auto div = hironaka_divide(s, gens_, {DivisionStrategy::leading_first, false});
        if (div.remainder.is_zero() || !opt_.track_cofactors) return {div.remainder, std::move(cof)};
        for (std::size_t k = 0; k < gens_.size(); ++k) {
            if (div.quotients[k].is_zero()) continue;
            for (std::size_t l = 0; l < inputs_.size(); ++l)
                if (!cof_[k][l].is_zero()) cof[l] -= div.quotients[k] * cof_[k][l];
        }
        C inv = C(1) / div.remainder.leading().coeff;
        for (auto& p : cof) p = p.scaled(inv);
        return {div.remainder.scaled(inv), std::move(cof)};
    }

    RingPtr ring_;
    BuchbergerOptions opt_;
    std::vector<Poly<C>> inputs_;
    std::vector<Poly<C>> gens_;
    std::vector<std::vector<Poly<C>>> cof_;
    std::set<Pair> pending_;
    std::map<std::uint64_t, Status> status_;
    std::size_t reduced_ = 0, product_ = 0, chain_ = 0, over_bound_ = 0;
};

template <Coefficient C>
GrobnerBasis<C> buchberger(const std::vector<Poly<C>>& gens, const BuchbergerOptions& opt = {}) {
    bool any = false;
    RingPtr ring;
    for (const auto& g : gens) {
        if (!ring) ring = g.ring();
        any = any || !g.is_zero();
    }
    if (!any) throw InputError("Buchberger needs at least one nonzero generator");
    BuchbergerEngine<C> engine(ring, opt);
    for (const auto& g : gens) engine.add_generator(g);
    engine.complete();
    return engine.basis();
}

template <Coefficient C>
struct Membership {
    bool member = false;
    DivisionResult<C> division;
    /// f = sum_l input_cofactors[l] * inputs[l] (filled for members when cofactors are tracked).
    std::vector<Poly<C>> input_cofactors;
};

template <Coefficient C>
Membership<C> ideal_member(const Poly<C>& f, const GrobnerBasis<C>& gb) {
    if (gb.degree_bound && f.degree() > Degree(static_cast<int>(*gb.degree_bound)))
        throw InputError("membership test above the degree bound of a truncated basis");
    Membership<C> m;
    m.division = hironaka_divide(f, gb.gens);
    m.member = m.division.remainder.is_zero();
    if (!division_defect(f, gb.gens, m.division).is_zero()) throw InternalError("division does not reconstruct f");
    if (m.member && !gb.cofactors.empty()) {
        m.input_cofactors.assign(gb.inputs.size(), Poly<C>(gb.ring));
        for (std::size_t j = 0; j < gb.gens.size(); ++j) {
            if (m.division.quotients[j].is_zero()) continue;
            for (std::size_t l = 0; l < gb.inputs.size(); ++l)
                if (!gb.cofactors[j][l].is_zero()) m.input_cofactors[l] += m.division.quotients[j] * gb.cofactors[j][l];
        }
        PolyAccumulator<C> acc;
        for (std::size_t l = 0; l < gb.inputs.size(); ++l) acc.add_product(m.input_cofactors[l], gb.inputs[l]);
        acc.add_scaled(f, C(-1));
        if (!acc.take(gb.ring).is_zero()) throw InternalError("membership certificate does not reconstruct f");
    }
    return m;
}

/// Largest degree among a list of polynomials (0 if all are zero).
template <Coefficient C>
unsigned max_degree(const std::vector<Poly<C>>& ps) {
    unsigned d = 0;
    for (const auto& p : ps)
        if (!p.is_zero()) d = std::max(d, static_cast<unsigned>(p.degree().value()));
    return d;
}

template <Coefficient C>
bool all_homogeneous(const std::vector<Poly<C>>& ps) {
    for (const auto& p : ps)
        if (!p.is_homogeneous()) return false;
    return true;
}

struct IndexResult {
    unsigned k0 = 0;
    unsigned truncation = 0;          ///< K: only L_first..L_K were examined
    bool identically_center = false;  ///< every examined coefficient vanished
    std::vector<unsigned> new_generators;  ///< orders k with L_k outside the ideal of the earlier ones
    std::vector<unsigned> members;         ///< orders k with L_k inside it
    std::string caveat;
};

/**
 * @brief Minimal k0 such that L_k lies in ideal(L_first..L_k0) for every
 * k0 < k <= K. coeffs[i] is L_{first+i}.
 */
template <Coefficient C>
IndexResult bautin_index(const std::vector<Poly<C>>& coeffs, unsigned first, BuchbergerOptions opt = {}) {
    if (coeffs.empty()) throw InputError("bautin_index needs at least one coefficient");
    IndexResult res;
    res.truncation = first + static_cast<unsigned>(coeffs.size()) - 1;
    res.k0 = first;
    res.caveat = "index relative to the coefficients up to order " + std::to_string(res.truncation) +
                 "; the full ideal uses all orders";
    RingPtr ring;
    for (const auto& c : coeffs)
        if (c.ring()) ring = c.ring();
    if (!opt.degree_bound && all_homogeneous(coeffs)) opt.degree_bound = max_degree(coeffs);
    opt.track_cofactors = false;
    BuchbergerEngine<C> engine(ring, opt);
    bool any = false;
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        unsigned k = first + static_cast<unsigned>(idx);
        const Poly<C>& L = coeffs[idx];
        bool member = L.is_zero();
        if (!member && any) member = hironaka_divide(L, engine.current_gens(), {DivisionStrategy::leading_first, false})
                                         .remainder.is_zero();
        if (member) {
            res.members.push_back(k);
            continue;
        }
        res.new_generators.push_back(k);
        res.k0 = k;
        any = true;
        engine.add_generator(L);
        engine.complete();
    }
    res.identically_center = !any;
    if (!any) res.k0 = first;
    return res;
}

struct PhiReport {
    bool equivalent = true;
    std::vector<bool> per_order;  ///< per index: difference lies in the ideal of the earlier Phi
    std::optional<std::size_t> first_failure;
};

/**
 * @brief Phi ~ Psi up to K: for each k < K, Phi_k - Psi_k lies in
 * ideal(Phi_0..Phi_{k-1}) (the zero ideal for k = 0).
 */
template <Coefficient C>
PhiReport phi_equivalent(const std::vector<Poly<C>>& Phi, const std::vector<Poly<C>>& Psi, std::size_t K,
                         BuchbergerOptions opt = {}) {
    if (Phi.size() < K || Psi.size() < K) throw InputError("phi_equivalent: sequences shorter than K");
    PhiReport rep;
    RingPtr ring;
    for (std::size_t k = 0; k < K; ++k) {
        if (Phi[k].ring()) ring = Phi[k].ring();
        if (Psi[k].ring()) ring = Psi[k].ring();
    }
    std::vector<Poly<C>> diffs, all;
    for (std::size_t k = 0; k < K; ++k) {
        diffs.push_back(Phi[k] - Psi[k]);
        all.push_back(Phi[k]);
        all.push_back(diffs.back());
    }
    if (!opt.degree_bound && all_homogeneous(all)) opt.degree_bound = max_degree(all);
    opt.track_cofactors = false;
    BuchbergerEngine<C> engine(ring, opt);
    bool any = false;
    for (std::size_t k = 0; k < K; ++k) {
        bool ok = diffs[k].is_zero();
        if (!ok && any)
            ok = hironaka_divide(diffs[k], engine.current_gens(), {DivisionStrategy::leading_first, false})
                     .remainder.is_zero();
        rep.per_order.push_back(ok);
        if (!ok && !rep.first_failure) rep.first_failure = k;
        rep.equivalent = rep.equivalent && ok;
        bool redundant = Phi[k].is_zero() ||
                         (any && hironaka_divide(Phi[k], engine.current_gens(), {DivisionStrategy::leading_first, false})
                                     .remainder.is_zero());
        if (!redundant) {
            engine.add_generator(Phi[k]);
            engine.complete();
            any = true;
        }
    }
    return rep;
}

/**
 * @brief Empirical C1 from a set of divisions: the smallest C1 >= 1 with
 * max(|h_i|, |h|) <= C * C1^k * |f| on every instance (k = deg f).
 */
template <Coefficient C>
double fit_C1(const std::vector<std::pair<Poly<C>, DivisionResult<C>>>& runs) {
    double c1 = 1.0;
    for (const auto& [f, r] : runs) {
        if (f.is_zero()) continue;
        double Cc = std::max(NormTraits<C>::to_double(r.C_const), 1e-300);
        double nf = NormTraits<C>::to_double(poly_norm(f));
        double h = NormTraits<C>::to_double(poly_norm(r.remainder));
        for (const auto& q : r.quotients) h = std::max(h, NormTraits<C>::to_double(poly_norm(q)));
        int k = f.degree().value();
        double ratio = h / (Cc * nf);
        if (k == 0 || ratio <= 1.0) continue;
        c1 = std::max(c1, std::pow(ratio, 1.0 / k));
    }
    return c1;
}

} // namespace cyclebound
