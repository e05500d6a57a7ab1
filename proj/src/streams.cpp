#include "fsdim/streams.hpp"

#include <cmath>
#include <map>

namespace fsdim {

namespace {

namespace mp = boost::multiprecision;

void check_positive(const ProbabilityMeasure& beta, const char* what) {
    if (!beta.is_positive())
        fail("NonPositiveMeasure", std::string(what) + " requires a positive measure");
}

}  // namespace

uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
}

uint64_t mix64(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t substream_seed(uint64_t root, uint64_t index) {
    return mix64(root ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

double EmpiricalBlockMeasure::entropy_bits() const {
    if (blocks == 0) return 0.0;
    double sum = 0.0;  // sum of c * log2(c) over nonzero cells
    for (uint64_t c : counts)
        if (c > 0) sum += static_cast<double>(c) * std::log2(static_cast<double>(c));
    double n = static_cast<double>(blocks);
    double h = std::log2(n) - sum / n;
    return h < 0.0 ? 0.0 : h;
}

Rational EmpiricalBlockMeasure::frequency(uint64_t block_index) const {
    if (block_index >= counts.size())
        fail("SymbolOutOfRange", "block index outside k^l");
    if (blocks == 0) fail("EmptyInput", "no blocks counted");
    return Rational(counts[block_index], blocks);
}

ProbabilityMeasure EmpiricalBlockMeasure::as_measure() const {
    if (blocks == 0) fail("EmptyInput", "no blocks counted");
    std::vector<Rational> weights;
    weights.reserve(counts.size());
    for (uint64_t c : counts) weights.emplace_back(c, blocks);
    return ProbabilityMeasure::exact(std::move(weights));
}

SymbolString iid_sample(const ProbabilityMeasure& alpha, size_t n, uint64_t seed) {
    uint32_t k = alpha.alphabet_size();
    // thresholds: floor(cumulative * 2^64), exact; a draw r selects the first
    // category with r < threshold
    std::vector<unsigned __int128> thresholds(k);
    Rational cum = 0;
    for (Sym a = 0; a < k; ++a) {
        cum += alpha.weight(a);
        BigInt scaled = (mp::numerator(cum) << 64) / mp::denominator(cum);
        uint64_t hi = static_cast<uint64_t>(scaled >> 64);
        uint64_t lo = static_cast<uint64_t>(scaled & BigInt(~0ull));
        thresholds[a] = (static_cast<unsigned __int128>(hi) << 64) | lo;
    }

    SplitMix64 rng(seed);
    std::vector<Sym> data;
    data.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        unsigned __int128 r = rng.next();
        Sym a = 0;
        while (a + 1u < k && r >= thresholds[a]) ++a;
        data.push_back(a);
    }
    return SymbolString(k, std::move(data));
}

SymbolString champernowne(uint32_t k, size_t n) {
    if (k < 2) fail("AlphabetMismatch", "the enumeration sequence needs k >= 2");
    std::vector<Sym> data;
    data.reserve(n);
    for (size_t len = 1; data.size() < n; ++len) {
        std::vector<Sym> word(len, 0);
        for (;;) {
            for (Sym a : word) {
                if (data.size() == n) break;
                data.push_back(a);
            }
            if (data.size() == n) break;
            // lexicographic successor of the current word
            size_t i = len;
            while (i > 0 && word[i - 1] == k - 1) word[--i] = 0;
            if (i == 0) break;
            ++word[i - 1];
        }
    }
    return SymbolString(k, std::move(data));
}

uint64_t block_count(const SymbolString& w, const SymbolString& x) {
    if (w.empty()) fail("EmptyBlock", "occurrence counting needs a nonempty block");
    if (w.alphabet_size() != x.alphabet_size())
        fail("AlphabetMismatch", "block and string alphabets differ");
    size_t l = w.size();
    uint64_t count = 0;
    for (size_t m = 0; (m + 1) * l <= x.size(); ++m) {
        bool match = true;
        for (size_t i = 0; i < l; ++i)
            if (x[m * l + i] != w[i]) {
                match = false;
                break;
            }
        if (match) ++count;
    }
    return count;
}

EmpiricalBlockMeasure block_frequencies(const SymbolString& S, size_t l, size_t n) {
    if (l == 0) fail("EmptyBlock", "block length must be at least 1");
    if (n == 0) fail("EmptyInput", "need at least one block");
    if (S.size() < n * l)
        fail("InsufficientPrefix", "need " + std::to_string(n * l) + " symbols, have " +
                                       std::to_string(S.size()));
    uint64_t space = block_space(S.alphabet_size(), l);
    EmpiricalBlockMeasure m;
    m.k = S.alphabet_size();
    m.block_len = l;
    m.blocks = n;
    m.counts.assign(space, 0);
    for (size_t b = 0; b < n; ++b) ++m.counts[pack_block(S, b * l, l)];
    return m;
}

ProbabilityMeasure letter_frequencies(const SymbolString& S) {
    if (S.empty()) fail("EmptyInput", "letter frequencies of an empty string");
    std::vector<uint64_t> counts = letter_counts(S);
    std::vector<Rational> weights;
    weights.reserve(counts.size());
    for (uint64_t c : counts) weights.emplace_back(c, S.size());
    return ProbabilityMeasure::exact(std::move(weights));
}

std::vector<Rational> frequency_residual_coefficients(const ProbabilityMeasure& alpha,
                                                      const SymbolString& w) {
    if (w.empty()) fail("EmptyInput", "residual of an empty string");
    if (alpha.alphabet_size() != w.alphabet_size())
        fail("AlphabetMismatch", "measure and string alphabets differ");
    std::vector<uint64_t> counts = letter_counts(w);
    std::vector<Rational> r(counts.size());
    for (size_t a = 0; a < counts.size(); ++a)
        r[a] = Rational(counts[a], w.size()) - alpha.weight(a);
    return r;
}

double frequency_divergence_residual(const ProbabilityMeasure& alpha,
                                     const ProbabilityMeasure& beta,
                                     const SymbolString& w) {
    check_positive(beta, "the frequency residual");
    if (alpha.alphabet_size() != beta.alphabet_size())
        fail("AlphabetMismatch", "measures on different alphabets");
    std::vector<Rational> coeff = frequency_residual_coefficients(alpha, w);
    // group coefficients by equal reference weights; a group whose rational
    // sum vanishes contributes nothing, so full cancellations yield exactly 0
    std::map<Rational, Rational> groups;
    for (size_t a = 0; a < coeff.size(); ++a) groups[beta.weight(a)] += coeff[a];
    double residual = 0.0;
    for (const auto& [weight, sum] : groups) {
        if (sum == 0) continue;
        residual -= rational_to_double(sum) * log2_rational(weight);
    }
    return residual;
}

}  // namespace fsdim
