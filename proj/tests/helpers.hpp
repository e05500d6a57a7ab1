#pragma once

#include <string>
#include <vector>

#include "fsdim/compressors.hpp"
#include "fsdim/gales.hpp"
#include "fsdim/measures.hpp"
#include "fsdim/streams.hpp"

namespace testhelp {

using namespace fsdim;

// measure with random positive integer weights over a common denominator
inline ProbabilityMeasure random_measure(SplitMix64& rng, uint32_t k,
                                         bool allow_zero = false) {
    std::vector<Rational> w(k);
    BigInt total = 0;
    std::vector<uint64_t> raw(k);
    for (uint32_t a = 0; a < k; ++a) {
        raw[a] = 1 + rng.next() % 16;
        if (allow_zero && rng.next() % 4 == 0 && a + 1 != k) raw[a] = 0;
        total += raw[a];
    }
    if (total == 0) {
        raw[0] = 1;
        total = 1;
    }
    for (uint32_t a = 0; a < k; ++a) w[a] = Rational(BigInt(raw[a]), total);
    return ProbabilityMeasure::exact(std::move(w));
}

inline FiniteStateGambler random_gambler(SplitMix64& rng, uint32_t k,
                                         uint32_t states,
                                         bool allow_zero_bets = false) {
    std::vector<std::vector<uint32_t>> delta(states, std::vector<uint32_t>(k));
    std::vector<std::vector<Rational>> bets(states, std::vector<Rational>(k));
    for (uint32_t q = 0; q < states; ++q) {
        for (Sym a = 0; a < k; ++a)
            delta[q][a] = static_cast<uint32_t>(rng.next() % states);
        ProbabilityMeasure m = random_measure(rng, k, allow_zero_bets);
        for (Sym a = 0; a < k; ++a) bets[q][a] = m.weight(a);
    }
    return FiniteStateGambler(k, std::move(delta), 0, std::move(bets));
}

// lossless by construction: within each state the k outputs are distinct
// codewords of one shared width, so outputs decode symbol by symbol
inline FiniteStateCompressor random_il_compressor(SplitMix64& rng, uint32_t k,
                                                  uint32_t states) {
    uint32_t base_width = 1;
    while ((1u << base_width) < k) ++base_width;
    std::vector<std::vector<uint32_t>> delta(states, std::vector<uint32_t>(k));
    std::vector<std::vector<std::string>> out(states);
    for (uint32_t q = 0; q < states; ++q) {
        uint32_t width = base_width + rng.next() % 2;
        for (Sym a = 0; a < k; ++a) {
            delta[q][a] = static_cast<uint32_t>(rng.next() % states);
            std::string code;
            for (uint32_t b = width; b-- > 0;)
                code.push_back((a >> b) & 1 ? '1' : '0');
            out[q].push_back(std::move(code));
        }
    }
    return FiniteStateCompressor(k, std::move(delta), 0, std::move(out));
}

inline SymbolString random_string(SplitMix64& rng, uint32_t k, size_t len) {
    SymbolString s(k);
    for (size_t i = 0; i < len; ++i)
        s.push_back(static_cast<Sym>(rng.next() % k));
    return s;
}

// log2 d >= wlen log2 k - bits - m (wlen/l + l), cleared of logarithms by
// raising both sides to the l-th power: d^l 2^(l bits + m wlen + m l^2) >= k^(l wlen)
inline bool capital_bound_holds(const Rational& d, uint32_t k, size_t wlen,
                                uint64_t bits, int64_t m, size_t l) {
    namespace mp = boost::multiprecision;
    BigInt lhs = mp::pow(mp::numerator(d), static_cast<unsigned>(l));
    lhs <<= l * bits + static_cast<uint64_t>(m) * wlen +
            static_cast<uint64_t>(m) * l * l;
    BigInt rhs = mp::pow(mp::denominator(d), static_cast<unsigned>(l)) *
                 mp::pow(BigInt(k), static_cast<unsigned>(l * wlen));
    return lhs >= rhs;
}

// bits <= (1 + 2/l) wlen log2 k - log2 d, likewise cleared:
// d^l 2^(l bits) <= k^((l+2) wlen)
inline bool code_length_bound_holds(uint64_t bits, const Rational& d, uint32_t k,
                                    size_t wlen, size_t l) {
    namespace mp = boost::multiprecision;
    BigInt lhs = mp::pow(mp::numerator(d), static_cast<unsigned>(l));
    lhs <<= l * bits;
    BigInt rhs = mp::pow(mp::denominator(d), static_cast<unsigned>(l)) *
                 mp::pow(BigInt(k), static_cast<unsigned>((l + 2) * wlen));
    return lhs <= rhs;
}

}  // namespace testhelp
