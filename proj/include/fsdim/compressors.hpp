#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsdim/gales.hpp"
#include "fsdim/symbols.hpp"

namespace fsdim {

// Deterministic transducer from the k-ary alphabet to binary output strings
// (possibly empty per step). Whether it is information-lossless is a property
// checked by il_check, not enforced by the type: deliberately lossy coders
// are legal values here.
class FiniteStateCompressor {
public:
    FiniteStateCompressor(uint32_t k, std::vector<std::vector<uint32_t>> delta,
                          uint32_t start,
                          std::vector<std::vector<std::string>> out);

    uint32_t alphabet_size() const { return k_; }
    uint32_t state_count() const { return static_cast<uint32_t>(delta_.size()); }
    uint32_t start_state() const { return start_; }

    uint32_t next_state(uint32_t q, Sym a) const { return delta_[q][a]; }
    const std::string& output(uint32_t q, Sym a) const { return out_[q][a]; }
    const std::vector<std::vector<uint32_t>>& transitions() const { return delta_; }
    const std::vector<std::vector<std::string>>& outputs() const { return out_; }

    uint32_t walk(const SymbolString& w, uint32_t from) const;
    uint32_t walk(const SymbolString& w) const { return walk(w, start_); }

private:
    uint32_t k_;
    std::vector<std::vector<uint32_t>> delta_;
    uint32_t start_;
    std::vector<std::vector<std::string>> out_;
};

// Identity-style coder: one state, each symbol emitted as its
// ceil(log2 k)-bit binary code.
FiniteStateCompressor verbatim_coder(uint32_t k);

// C(w): concatenated step outputs; prefix-monotone in w by construction.
std::string compress(const FiniteStateCompressor& c, const SymbolString& w);
uint64_t compressed_length(const FiniteStateCompressor& c,
                           const SymbolString& w);

struct ILCheckResult {
    bool lossless = true;
    // The shortlex-first pair of distinct inputs with equal (output, state),
    // when not lossless.
    SymbolString first;
    SymbolString second;
};

// Exhaustively tests injectivity of w -> (C(w), final state) over all strings
// of length <= max_len.
ILCheckResult il_check(const FiniteStateCompressor& c, size_t max_len);

// Gambler built from a lossless compressor: states are (compressor state at
// the current block boundary, buffer of < block_len pending symbols); block
// bets are proportional to 2^-|output of the block|, leftover mass spread
// uniformly. The capital satisfies, for every input w,
//   log2 d_G(w) >= |w| log2 k - |C(w)| - correction * (|w|/block_len + block_len)
// with correction certified by exact enumeration: block_defect bounds the
// per-block capital loss, tail_defect the one partial block at end of input.
struct GamblerFromCompressor {
    FiniteStateGambler gambler;
    size_t block_len = 1;
    int64_t correction = 0;    // the certified constant in the bound above
    int64_t block_defect = 0;  // max per-block loss, bits, rounded up
    int64_t tail_defect = 0;   // max partial-block loss, bits, rounded up
    FiniteStateCompressor source;
    std::vector<uint32_t> block_start_states;  // source states reachable by whole blocks
};

GamblerFromCompressor fsg_from_ilfsc(const FiniteStateCompressor& c,
                                     size_t block_len);

// Same states and transitions, bets mixed with uniform: B' = retain * B +
// (1 - retain) * uniform. retain is the smallest 62-bit dyadic rational at or
// above k^-delta, so d_G'(w) >= retain^|w| * d_G(w) >= k^(-delta |w|) d_G(w),
// the first inequality exact in rationals. Every bet of G' is positive.
struct SmoothedGambler {
    FiniteStateGambler gambler;
    double delta = 0.0;
    Rational retain;  // rational lower bound actually used for k^-delta
};

SmoothedGambler nonvanishing_smooth(const FiniteStateGambler& g, double delta);

// Per-block prefix code table of one block-start state.
struct BlockCodeTable {
    uint32_t state = 0;                 // gambler state opening the block
    std::vector<std::string> codeword;  // indexed by packed block
    std::vector<uint32_t> next_state;   // gambler state after the block
};

// Compressor built from a nonvanishing gambler: states are (block-start
// gambler state, buffer of < block_len pending symbols). Completing a block b
// emits a canonical prefix-free codeword whose length starts at
// ceil(log2(1/p(b))), p(b) = product of bets along b, and is then greedily
// shortened (most probable block first) while the exact Kraft sum stays <= 1.
// Buffered tail symbols are never emitted; they are recoverable from the
// final state. For every input w,
//   |C(w)| <= (1 + 2/block_len) |w| log2 k - log2 d_G(w).
struct CompressorFromGambler {
    FiniteStateCompressor compressor;
    size_t block_len = 1;
    std::vector<BlockCodeTable> tables;        // aligned with block_start_states
    std::vector<uint32_t> block_start_states;  // gambler states reachable by whole blocks
    FiniteStateGambler source;

    // Inverse of compress given the final compressor state: replays the
    // prefix-free block codes, then appends the buffered tail.
    SymbolString decode(const std::string& bits, uint32_t final_state) const;

    // Pending symbols encoded in a compressor state's buffer component.
    SymbolString buffered_tail(uint32_t state) const;
};

CompressorFromGambler ilfsc_from_fsg(const FiniteStateGambler& g,
                                     size_t block_len);

// |C(w)| / I_beta(w) for nonempty w; the quantity whose liminf over prefixes
// lower-bounds how well any finite-state coder prices w against beta.
double compression_ratio(const FiniteStateCompressor& c,
                         const ProbabilityMeasure& beta,
                         const SymbolString& w);

}  // namespace fsdim
