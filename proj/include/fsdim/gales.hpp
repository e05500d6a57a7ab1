#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fsdim/measures.hpp"
#include "fsdim/symbols.hpp"

namespace fsdim {

// Deterministic automaton whose states carry exact rational betting
// distributions over the alphabet.
class FiniteStateGambler {
public:
    FiniteStateGambler(uint32_t k, std::vector<std::vector<uint32_t>> delta,
                       uint32_t start,
                       std::vector<std::vector<Rational>> bets);

    uint32_t alphabet_size() const { return k_; }
    uint32_t state_count() const { return static_cast<uint32_t>(delta_.size()); }
    uint32_t start_state() const { return start_; }
    bool nonvanishing() const { return nonvanishing_; }

    uint32_t next_state(uint32_t q, Sym a) const { return delta_[q][a]; }
    const Rational& bet(uint32_t q, Sym a) const { return bets_[q][a]; }
    double bet_log2(uint32_t q, Sym a) const { return bet_log2_[q][a]; }
    const std::vector<std::vector<uint32_t>>& transitions() const { return delta_; }
    const std::vector<std::vector<Rational>>& bets() const { return bets_; }

    uint32_t walk(const SymbolString& w, uint32_t from) const;
    uint32_t walk(const SymbolString& w) const { return walk(w, start_); }

private:
    uint32_t k_;
    std::vector<std::vector<uint32_t>> delta_;
    uint32_t start_;
    std::vector<std::vector<Rational>> bets_;
    std::vector<std::vector<double>> bet_log2_;
    bool nonvanishing_ = true;
};

// Capital value in linear and log2 form; zero capital carries log2 = -inf.
struct GaleValue {
    double value = 1.0;
    double log2 = 0.0;
};

// d_G: start at 1, multiply by k * bet(state, symbol) per step.
GaleValue martingale_eval(const FiniteStateGambler& g, const SymbolString& w);
Rational martingale_eval_exact(const FiniteStateGambler& g,
                               const SymbolString& w);

// d with payoff exponent s priced by beta: (mu(w) / beta(w)^s) * d_G(w),
// computed as log2 d_G(w) - |w| log2 k + s * I_beta(w).
GaleValue gale_eval(const FiniteStateGambler& g, const ProbabilityMeasure& beta,
                    double s, const SymbolString& w);

struct RationalExponent {
    int64_t num = 1;
    int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const RationalExponent& other) const = default;
};

// Capital functions of the product form coeff(w) * base(w)^(-expo), where
// coeff(w) is the product of gambler bets along w times optional per-symbol
// rational factors. Martingales are the (uniform, 1) case; the s-beta-gale of
// a gambler is the (beta, s) case. Keeping this structure explicit is what
// lets the betting law be verified in exact arithmetic: the irrational powers
// cancel symbolically.
class GaleForm {
public:
    static GaleForm martingale(FiniteStateGambler g);
    static GaleForm gale(FiniteStateGambler g, ProbabilityMeasure base,
                         RationalExponent expo);

    // Change-of-measure transform: multiplies by alpha(w)^s / beta(w)^t,
    // turning a capital function lawful for (alpha, s) into one lawful for
    // (beta, t). Exact whenever (alpha, s) equals this form's (base, expo);
    // otherwise each per-symbol correction alpha(a)^s * base(a)^(-expo) must
    // be rational, or nothing is returned.
    std::optional<GaleForm> transformed(const ProbabilityMeasure& alpha,
                                        const RationalExponent& s,
                                        ProbabilityMeasure beta,
                                        RationalExponent t) const;

    Rational coeff(const SymbolString& w) const;
    GaleValue eval(const SymbolString& w) const;

    const FiniteStateGambler& gambler() const { return gambler_; }
    const ProbabilityMeasure& base() const { return base_; }
    const RationalExponent& expo() const { return expo_; }
    const Rational& symbol_factor(Sym a) const { return symbol_factor_[a]; }

private:
    GaleForm(FiniteStateGambler g, ProbabilityMeasure base,
             RationalExponent expo);

    FiniteStateGambler gambler_;
    ProbabilityMeasure base_;
    RationalExponent expo_;
    std::vector<Rational> symbol_factor_;
};

struct GaleConditionReport {
    bool exact = false;   // exact arithmetic was applicable and used
    bool holds = true;
    std::optional<SymbolString> first_violation;  // shortlex-first failing node
    double max_rel_violation = 0.0;
    size_t nodes = 0;
};

// Verifies the betting law d(w) = sum_a d(wa) * alpha(a)^s at every node with
// |w| < depth. The GaleForm overload clears the common irrational factor and
// compares exact rationals whenever alpha(a)^s * base(a)^(-expo) is rational
// for every a, falling back to floats otherwise.
GaleConditionReport gale_condition_check(const GaleForm& d,
                                         const ProbabilityMeasure& alpha,
                                         const RationalExponent& s,
                                         size_t depth);
GaleConditionReport gale_condition_check(
    const std::function<double(const SymbolString&)>& d,
    const ProbabilityMeasure& alpha, double s, size_t depth);

// Pointwise transform of an arbitrary evaluator: d(w) * alpha(w)^s / beta(w)^t.
double gale_transform_eval(const std::function<double(const SymbolString&)>& d,
                           const ProbabilityMeasure& alpha, double s,
                           const ProbabilityMeasure& beta, double t,
                           const SymbolString& w);

struct GaleTrace {
    std::vector<size_t> grid;         // prefix lengths, increasing
    std::vector<double> log2_values;  // log2 capital at each grid point
    std::vector<uint32_t> states;     // automaton state at each grid point
    double tail_max = 0.0;            // over the last half of the grid
    double tail_min = 0.0;
};

// log2 capital of the s-beta-gale of G along prefixes of S, sampled at the
// grid. Zero bets make the trace -inf from that point on.
GaleTrace success_trace(const FiniteStateGambler& g,
                        const ProbabilityMeasure& beta, double s,
                        const SymbolString& S, std::vector<size_t> grid);

}  // namespace fsdim
