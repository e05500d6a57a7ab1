#pragma once

#include <cstdint>
#include <vector>

#include "fsdim/measures.hpp"
#include "fsdim/symbols.hpp"

namespace fsdim {

// The project-wide generator. All sampling draws one next() per symbol from
// SplitMix64(seed); independent jobs derive seeds via substream_seed.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next();

private:
    uint64_t state_;
};

// splitmix finalizer
uint64_t mix64(uint64_t x);

// Stream-split rule: substream i of a root seed.
uint64_t substream_seed(uint64_t root, uint64_t index);

// Aligned block statistics of the first n length-l blocks of a prefix,
// as a probability measure on the packed block space.
struct EmpiricalBlockMeasure {
    uint32_t k = 2;
    size_t block_len = 1;
    size_t blocks = 0;             // n, equals the sum of counts
    std::vector<uint64_t> counts;  // indexed by packed block

    double entropy_bits() const;
    Rational frequency(uint64_t block_index) const;
    ProbabilityMeasure as_measure() const;
};

// n symbols drawn IID from alpha; deterministic in (alpha, n, seed).
// Thresholds are exact cumulative rationals scaled to 2^64, compared against
// the raw 64-bit draws, so category boundaries never suffer float rounding.
SymbolString iid_sample(const ProbabilityMeasure& alpha, size_t n,
                        uint64_t seed);

// First n symbols of the base-k sequence listing all strings of length 1,
// then length 2, ... in lexicographic order ("010001 11..." for k=2).
SymbolString champernowne(uint32_t k, size_t n);

// Aligned, non-overlapping occurrences of w among the |x|/|w| blocks of x.
uint64_t block_count(const SymbolString& w, const SymbolString& x);

EmpiricalBlockMeasure block_frequencies(const SymbolString& S, size_t l,
                                        size_t n);

// Exact letter-frequency measure count/|S| of a nonempty string.
ProbabilityMeasure letter_frequencies(const SymbolString& S);

// I_beta(w)/|w| - (H(alpha) + D(alpha||beta)). Algebraically this equals
// sum_a (freq_a(w) - alpha(a)) * log2(1/beta(a)); it is evaluated in that
// form with the rational coefficients grouped by equal beta weights, so the
// cases where the algebra cancels exactly return exactly 0.0.
double frequency_divergence_residual(const ProbabilityMeasure& alpha,
                                     const ProbabilityMeasure& beta,
                                     const SymbolString& w);

// The rational coefficients freq_a(w) - alpha(a) of the residual expansion.
std::vector<Rational> frequency_residual_coefficients(
    const ProbabilityMeasure& alpha, const SymbolString& w);

}  // namespace fsdim
