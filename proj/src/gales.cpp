#include "fsdim/gales.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace fsdim {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

void check_positive(const ProbabilityMeasure& beta, const char* what) {
    if (!beta.is_positive())
        fail("NonPositiveMeasure", std::string(what) + " requires a positive measure");
}

GaleValue from_log2(double log2v) {
    return GaleValue{std::exp2(log2v), log2v};
}

}  // namespace

FiniteStateGambler::FiniteStateGambler(uint32_t k,
                                       std::vector<std::vector<uint32_t>> delta,
                                       uint32_t start,
                                       std::vector<std::vector<Rational>> bets)
    : k_(k), delta_(std::move(delta)), start_(start), bets_(std::move(bets)) {
    if (k_ == 0 || k_ > kMaxAlphabet) fail("AlphabetMismatch", "bad alphabet size");
    if (delta_.empty()) fail("EmptyInput", "gambler needs at least one state");
    if (bets_.size() != delta_.size())
        fail("MalformedFile", "transition and bet tables disagree on the state count");
    if (start_ >= delta_.size()) fail("MalformedFile", "start state out of range");
    nonvanishing_ = true;
    bet_log2_.resize(bets_.size());
    for (size_t q = 0; q < delta_.size(); ++q) {
        if (delta_[q].size() != k_ || bets_[q].size() != k_)
            fail("MalformedFile", "state row does not cover the alphabet");
        Rational sum = 0;
        bet_log2_[q].reserve(k_);
        for (Sym a = 0; a < k_; ++a) {
            if (delta_[q][a] >= delta_.size())
                fail("MalformedFile", "transition target out of range");
            const Rational& b = bets_[q][a];
            if (b < 0) fail("NonPositiveMeasure", "negative bet " + format_rational(b));
            if (b == 0) nonvanishing_ = false;
            sum += b;
            bet_log2_[q].push_back(b == 0 ? kNegInf : log2_rational(b));
        }
        if (sum != 1)
            fail("NonNormalizedMeasure",
                 "bets at state " + std::to_string(q) + " sum to " + format_rational(sum));
    }
}

uint32_t FiniteStateGambler::walk(const SymbolString& w, uint32_t from) const {
    uint32_t q = from;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= k_) fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        q = delta_[q][w[i]];
    }
    return q;
}

GaleValue martingale_eval(const FiniteStateGambler& g, const SymbolString& w) {
    double log2k = std::log2(static_cast<double>(g.alphabet_size()));
    double acc = 0.0;
    uint32_t q = g.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= g.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        acc += log2k + g.bet_log2(q, a);
        q = g.next_state(q, a);
    }
    return from_log2(acc);
}

Rational martingale_eval_exact(const FiniteStateGambler& g, const SymbolString& w) {
    Rational v = 1;
    uint32_t q = g.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= g.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        v *= Rational(g.alphabet_size()) * g.bet(q, a);
        q = g.next_state(q, a);
    }
    return v;
}

GaleValue gale_eval(const FiniteStateGambler& g, const ProbabilityMeasure& beta,
                    double s, const SymbolString& w) {
    check_positive(beta, "gale evaluation");
    double acc = 0.0;
    uint32_t q = g.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= g.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        // the step's payoff factor log2(k * bet) minus log2 k from the
        // uniform measure cancels to bet_log2; the pricing adds s * I_beta
        acc += g.bet_log2(q, a) - s * beta.log2_probability(a);
        q = g.next_state(q, a);
    }
    return from_log2(acc);
}

GaleForm::GaleForm(FiniteStateGambler g, ProbabilityMeasure base, RationalExponent expo)
    : gambler_(std::move(g)), base_(std::move(base)), expo_(expo),
      symbol_factor_(gambler_.alphabet_size(), Rational(1)) {
    if (base_.alphabet_size() != gambler_.alphabet_size())
        fail("AlphabetMismatch", "pricing measure and gambler alphabets differ");
    if (!base_.is_positive())
        fail("NonPositiveMeasure", "pricing measure must be positive");
    if (expo_.den <= 0) fail("MalformedFile", "exponent denominator must be positive");
}

GaleForm GaleForm::martingale(FiniteStateGambler g) {
    uint32_t k = g.alphabet_size();
    return GaleForm(std::move(g), ProbabilityMeasure::uniform(k), RationalExponent{1, 1});
}

GaleForm GaleForm::gale(FiniteStateGambler g, ProbabilityMeasure base,
                        RationalExponent expo) {
    return GaleForm(std::move(g), std::move(base), expo);
}

std::optional<GaleForm> GaleForm::transformed(const ProbabilityMeasure& alpha,
                                              const RationalExponent& s,
                                              ProbabilityMeasure beta,
                                              RationalExponent t) const {
    if (alpha.alphabet_size() != gambler_.alphabet_size() ||
        beta.alphabet_size() != gambler_.alphabet_size())
        fail("AlphabetMismatch", "transform measures must match the gambler's alphabet");
    if (!alpha.is_positive() || !beta.is_positive())
        fail("NonPositiveMeasure", "transform measures must be positive");
    if (s.den <= 0 || t.den <= 0) fail("MalformedFile", "exponent denominator must be positive");

    uint32_t k = gambler_.alphabet_size();
    std::vector<Rational> factors(k);
    bool same_base = alpha == base_;
    for (Sym a = 0; a < k; ++a) {
        // fold alpha(a)^s * base(a)^(-expo) into the per-symbol coefficient
        std::optional<Rational> r;
        if (same_base) {
            int64_t num = s.num * expo_.den - expo_.num * s.den;
            r = pow_rational_exact(alpha.weight(a), num, s.den * expo_.den);
        } else {
            auto up = pow_rational_exact(alpha.weight(a), s.num, s.den);
            auto down = pow_rational_exact(base_.weight(a), -expo_.num, expo_.den);
            if (up && down) r = *up * *down;
        }
        if (!r) return std::nullopt;
        factors[a] = symbol_factor_[a] * *r;
    }
    GaleForm out(gambler_, std::move(beta), t);
    out.symbol_factor_ = std::move(factors);
    return out;
}

Rational GaleForm::coeff(const SymbolString& w) const {
    Rational c = 1;
    uint32_t q = gambler_.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= gambler_.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        c *= gambler_.bet(q, a) * symbol_factor_[a];
        q = gambler_.next_state(q, a);
    }
    return c;
}

GaleValue GaleForm::eval(const SymbolString& w) const {
    double acc = 0.0;
    double e = expo_.value();
    uint32_t q = gambler_.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= gambler_.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the gambler's alphabet");
        double f = symbol_factor_[a] == 1 ? 0.0 : log2_rational(symbol_factor_[a]);
        acc += gambler_.bet_log2(q, a) + f - e * base_.log2_probability(a);
        q = gambler_.next_state(q, a);
    }
    return from_log2(acc);
}

GaleConditionReport gale_condition_check(const GaleForm& d,
                                         const ProbabilityMeasure& alpha,
                                         const RationalExponent& s, size_t depth) {
    if (alpha.alphabet_size() != d.gambler().alphabet_size())
        fail("AlphabetMismatch", "check measure must match the gambler's alphabet");
    uint32_t k = d.gambler().alphabet_size();

    // per-symbol correction alpha(a)^s * base(a)^(-expo); if every entry is
    // rational the law reduces to a per-state rational identity
    std::vector<Rational> h(k);
    bool exact = true;
    bool same_base = alpha == d.base();
    const RationalExponent& e = d.expo();
    for (Sym a = 0; a < k && exact; ++a) {
        std::optional<Rational> r;
        if (same_base) {
            int64_t num = s.num * e.den - e.num * s.den;
            r = pow_rational_exact(alpha.weight(a), num, s.den * e.den);
        } else if (alpha.weight(a) > 0) {
            auto up = pow_rational_exact(alpha.weight(a), s.num, s.den);
            auto down = pow_rational_exact(d.base().weight(a), -e.num, e.den);
            if (up && down) r = *up * *down;
        } else if (s.num > 0) {
            r = Rational(0);
        }
        if (r)
            h[a] = *r;
        else
            exact = false;
    }

    GaleConditionReport report;
    report.exact = exact;

    if (exact) {
        // the law at w reduces to sum_a bet(q_w, a) * factor(a) * h(a) = 1
        // whenever coeff(w) != 0, so it only depends on the reachable state
        struct Node {
            SymbolString w;
            uint32_t q;
            bool alive;  // coeff nonzero so far
        };
        std::queue<Node> todo;
        todo.push({SymbolString(k), d.gambler().start_state(), true});
        std::vector<int> state_ok(d.gambler().state_count(), -1);
        while (!todo.empty()) {
            Node node = std::move(todo.front());
            todo.pop();
            if (node.w.size() >= depth) continue;
            ++report.nodes;
            if (node.alive) {
                if (state_ok[node.q] < 0) {
                    Rational sum = 0;
                    for (Sym a = 0; a < k; ++a)
                        sum += d.gambler().bet(node.q, a) * d.symbol_factor(a) * h[a];
                    state_ok[node.q] = sum == 1 ? 1 : 0;
                    if (sum != 1) {
                        double rel = std::abs(rational_to_double(sum - 1));
                        if (rel > report.max_rel_violation) report.max_rel_violation = rel;
                    }
                }
                if (state_ok[node.q] == 0 && !report.first_violation) {
                    report.holds = false;
                    report.first_violation = node.w;
                }
            }
            for (Sym a = 0; a < k; ++a) {
                SymbolString wa = node.w;
                wa.push_back(a);
                bool alive = node.alive && d.gambler().bet(node.q, a) != 0;
                todo.push({std::move(wa), d.gambler().next_state(node.q, a), alive});
            }
        }
        return report;
    }

    auto eval = [&](const SymbolString& w) { return d.eval(w).value; };
    return gale_condition_check(eval, alpha, s.value(), depth);
}

GaleConditionReport gale_condition_check(
    const std::function<double(const SymbolString&)>& d,
    const ProbabilityMeasure& alpha, double s, size_t depth) {
    uint32_t k = alpha.alphabet_size();
    std::vector<double> pow_s(k);
    for (Sym a = 0; a < k; ++a) pow_s[a] = std::pow(alpha.probability(a), s);

    GaleConditionReport report;
    report.exact = false;
    std::queue<SymbolString> todo;
    todo.push(SymbolString(k));
    const double tolerance = 1e-9;
    while (!todo.empty()) {
        SymbolString w = std::move(todo.front());
        todo.pop();
        if (w.size() >= depth) continue;
        ++report.nodes;
        double lhs = d(w);
        double rhs = 0.0;
        for (Sym a = 0; a < k; ++a) {
            SymbolString wa = w;
            wa.push_back(a);
            rhs += d(wa) * pow_s[a];
            todo.push(std::move(wa));
        }
        double scale = std::abs(lhs);
        double rel = scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(rhs);
        if (rel > report.max_rel_violation) report.max_rel_violation = rel;
        if (rel > tolerance && !report.first_violation) {
            report.holds = false;
            report.first_violation = w;
        }
    }
    return report;
}

double gale_transform_eval(const std::function<double(const SymbolString&)>& d,
                           const ProbabilityMeasure& alpha, double s,
                           const ProbabilityMeasure& beta, double t,
                           const SymbolString& w) {
    check_positive(alpha, "the gale transform");
    check_positive(beta, "the gale transform");
    double shift = -s * self_information_bits(alpha, w) + t * self_information_bits(beta, w);
    return d(w) * std::exp2(shift);
}

GaleTrace success_trace(const FiniteStateGambler& g, const ProbabilityMeasure& beta,
                        double s, const SymbolString& S, std::vector<size_t> grid) {
    check_positive(beta, "the success trace");
    if (beta.alphabet_size() != g.alphabet_size())
        fail("AlphabetMismatch", "pricing measure must match the gambler's alphabet");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) fail("MalformedFile", "trace grid must be increasing");
    if (!grid.empty() && grid.back() > S.size())
        fail("InsufficientPrefix", "trace grid exceeds the string length");

    GaleTrace trace;
    trace.grid = std::move(grid);
    trace.log2_values.reserve(trace.grid.size());
    trace.states.reserve(trace.grid.size());

    double acc = 0.0;
    uint32_t q = g.start_state();
    size_t next = 0;
    for (size_t i = 0; i <= S.size() && next < trace.grid.size(); ++i) {
        if (i == trace.grid[next]) {
            trace.log2_values.push_back(acc);
            trace.states.push_back(q);
            ++next;
        }
        if (i == S.size()) break;
        Sym a = S[i];
        acc += g.bet_log2(q, a) - s * beta.log2_probability(a);
        q = g.next_state(q, a);
    }

    if (!trace.log2_values.empty()) {
        size_t start = trace.log2_values.size() / 2;
        trace.tail_max = trace.log2_values[start];
        trace.tail_min = trace.log2_values[start];
        for (size_t i = start; i < trace.log2_values.size(); ++i) {
            trace.tail_max = std::max(trace.tail_max, trace.log2_values[i]);
            trace.tail_min = std::min(trace.tail_min, trace.log2_values[i]);
        }
    }
    return trace;
}

}  // namespace fsdim
