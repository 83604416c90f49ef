#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "icheb/norm.hpp"
#include "icheb/poly.hpp"
#include "icheb/rational.hpp"

namespace icheb {

/// Product of knowledge-base factors: (factor id, exponent) pairs.
struct FactoredPoly {
    std::vector<std::pair<std::string, unsigned long>> factors;
};

struct IcpEntry {
    int n = 0;
    FactoredPoly p;
    std::string t_printed;  // decimal string as recorded
};

/// Knowledge base: the named factors h_i and the recorded integer Chebyshev
/// polynomials (best-known minimal polynomials per degree).
class FactorKB {
  public:
    void add_factor(const std::string& id, IntPoly p) {
        if (p.is_zero()) throw std::invalid_argument("FactorKB: zero factor " + id);
        factors_.insert_or_assign(id, std::move(p));
    }

    bool has_factor(const std::string& id) const { return factors_.count(id) != 0; }

    const IntPoly& factor(const std::string& id) const {
        auto it = factors_.find(id);
        if (it == factors_.end()) throw std::out_of_range("FactorKB: unknown factor id " + id);
        return it->second;
    }

    const std::map<std::string, IntPoly>& factors() const { return factors_; }

    void add_icp(IcpEntry e) { icps_.insert_or_assign(e.n, std::move(e)); }
    bool has_icp(int n) const { return icps_.count(n) != 0; }
    const IcpEntry& icp(int n) const {
        auto it = icps_.find(n);
        if (it == icps_.end()) throw std::out_of_range("FactorKB: no recorded polynomial of degree " + std::to_string(n));
        return it->second;
    }
    const std::map<int, IcpEntry>& icps() const { return icps_; }

  private:
    std::map<std::string, IntPoly> factors_;
    std::map<int, IcpEntry> icps_;
};

inline long factored_degree(const FactoredPoly& f, const FactorKB& kb) {
    long deg = 0;
    for (const auto& [id, e] : f.factors) deg += static_cast<long>(e) * kb.factor(id).degree();
    return deg;
}

/// Fully expanded product with exact integer coefficients.
inline IntPoly expand(const FactoredPoly& f, const FactorKB& kb) {
    IntPoly p = IntPoly::one();
    for (const auto& [id, e] : f.factors) p = p * kb.factor(id).pow(e);
    return p;
}

/// Factor list viewed for product-form norm evaluation. The views reference
/// polynomials owned by the knowledge base.
inline std::vector<FactorRef> factor_refs(const FactoredPoly& f, const FactorKB& kb) {
    std::vector<FactorRef> refs;
    refs.reserve(f.factors.size());
    for (const auto& [id, e] : f.factors) refs.push_back(FactorRef{&kb.factor(id), e});
    return refs;
}

// ---------------------------------------------------------------------------
// JSON persistence. Rationals are "num/den" strings; coefficients low-to-high.

inline void load_factors_json(FactorKB& kb, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open factor DB: " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("schema", "") != "icheb-factor-db-v1") throw std::runtime_error("bad factor DB schema in " + path);
    for (const auto& f : j.at("factors")) {
        std::vector<Int> coeffs;
        for (const auto& c : f.at("coeffs")) coeffs.emplace_back(c.get<std::string>());
        kb.add_factor(f.at("id").get<std::string>(), IntPoly(std::move(coeffs)));
    }
}

inline void load_icps_json(FactorKB& kb, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ICP DB: " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("schema", "") != "icheb-icp-db-v1") throw std::runtime_error("bad ICP DB schema in " + path);
    for (const auto& e : j.at("entries")) {
        IcpEntry entry;
        entry.n = e.at("n").get<int>();
        for (const auto& fe : e.at("factors")) entry.p.factors.emplace_back(fe.at(0).get<std::string>(), fe.at(1).get<unsigned long>());
        entry.t_printed = e.at("t").get<std::string>();
        for (const auto& [id, ex] : entry.p.factors) {
            (void)ex;
            if (!kb.has_factor(id)) throw std::runtime_error("ICP DB references unknown factor " + id);
        }
        kb.add_icp(std::move(entry));
    }
}

// ---------------------------------------------------------------------------
// Initial upper bound c_n = min_k ||p_k p_{n-k}|| over recorded polynomials.

struct UpperBound {
    Rat c_n;    // certified upper enclosure of the best product norm
    int split;  // the k achieving it
};

inline std::optional<UpperBound> try_upper_bound_cn(int n, const FactorKB& kb, const Rat& rel_tol = default_rel_tol()) {
    std::optional<UpperBound> best;
    for (int k = 1; 2 * k <= n; ++k) {
        if (!kb.has_icp(k) || !kb.has_icp(n - k)) continue;
        std::vector<FactorRef> refs = factor_refs(kb.icp(k).p, kb);
        std::vector<FactorRef> more = factor_refs(kb.icp(n - k).p, kb);
        refs.insert(refs.end(), more.begin(), more.end());
        NormEnclosure e = sup_norm(refs, unit_interval(), rel_tol);
        if (!best || e.hi < best->c_n) best = UpperBound{e.hi, k};
    }
    return best;
}

inline UpperBound upper_bound_cn(int n, const FactorKB& kb, const Rat& rel_tol = default_rel_tol()) {
    auto b = try_upper_bound_cn(n, kb, rel_tol);
    if (!b) throw std::runtime_error("upper_bound_cn: no usable splits for degree " + std::to_string(n));
    return *b;
}

// ---------------------------------------------------------------------------
// Forced-factor deduction: if c_n < |F(b/a)| / a^g then the integer resultant
// a^g G(b/a) has absolute value < 1, hence vanishes, so (ax - b) divides G.

struct FactorState {
    IntPoly F = IntPoly::one();  // product of forced factors
    long g = 0;                  // degree of the unknown factor
    Rat c_n;                     // valid upper bound on ||F*G|| over the interval
    Interval interval = unit_interval();
};

struct ForcedFactor {
    Int a, b;
};

/// Default candidate points b/a, denominators up to `max_den`, within I.
inline std::vector<ForcedFactor> default_deduction_candidates(const Interval& I, long max_den = 8) {
    std::vector<ForcedFactor> out;
    for (long a = 1; a <= max_den; ++a)
        for (long b = 0; b <= a; ++b) {
            Rat x = make_rat(b, a);
            if (x >= I.lo && x <= I.hi) out.push_back(ForcedFactor{Int(a), Int(b)});
        }
    return out;
}

/// Runs the resultant test over the candidates to a fixed point. Strict
/// inequality c_n < |F(b/a)|/a^g is required to force the factor.
inline FactorState deduce_forced_factors(FactorState state, const std::vector<ForcedFactor>& candidates) {
    for (const auto& c : candidates) {
        if (c.a < 1) throw std::invalid_argument("deduce_forced_factors: a must be >= 1");
        Rat x = make_rat(c.b, c.a);
        if (x < state.interval.lo || x > state.interval.hi) throw std::invalid_argument("deduce_forced_factors: candidate outside interval");
    }
    bool fired = true;
    while (fired) {
        fired = false;
        for (const auto& c : candidates) {
            if (state.g == 0) return state;
            Rat fval = abs_rat(state.F.eval_fraction(c.b, c.a));
            Rat rhs = fval / Rat(pow_int(c.a, static_cast<unsigned long>(state.g)));
            if (state.c_n < rhs) {
                if (state.g <= 0) throw std::runtime_error("deduce_forced_factors: unknown degree exhausted");
                state.F = state.F * IntPoly::linear(c.a, c.b);
                state.g -= 1;
                fired = true;
            }
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Knowledge-base verification.

struct VerifyRow {
    int n = 0;
    bool degree_ok = false;
    bool t_ok = false;
    std::string printed;
    Rat t_lo, t_hi;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_ok = true;
};

/// Expands every recorded polynomial, audits its degree, recomputes the
/// normalized norm on [0,1] and compares with the printed value to `abs_tol`.
inline VerifyReport verify_table(const FactorKB& kb, const Rat& abs_tol = make_rat(Int(5), pow_int(10, 9)),
                                 const Rat& rel_tol = default_rel_tol()) {
    VerifyReport report;
    for (const auto& [n, entry] : kb.icps()) {
        VerifyRow row;
        row.n = n;
        row.printed = entry.t_printed;
        IntPoly p = expand(entry.p, kb);
        row.degree_ok = (p.degree() == n) && (factored_degree(entry.p, kb) == n);
        RatInterval t = normalized_t(p, unit_interval(), rel_tol);
        row.t_lo = t.lo;
        row.t_hi = t.hi;
        Rat printed = parse_rat(entry.t_printed);
        row.t_ok = abs_rat(t.lo - printed) <= abs_tol && abs_rat(t.hi - printed) <= abs_tol;
        report.all_ok = report.all_ok && row.degree_ok && row.t_ok;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace icheb
