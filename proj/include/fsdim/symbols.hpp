#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsdim/errors.hpp"

namespace fsdim {

using Sym = uint16_t;

inline constexpr uint32_t kMaxAlphabet = 1u << 16;

// Finite word over the alphabet {0, ..., k-1}. Indexing is 0-based, leftmost
// symbol first. File I/O elsewhere restricts k to 10; in memory any k up to
// kMaxAlphabet works.
class SymbolString {
public:
    explicit SymbolString(uint32_t k = 2);
    SymbolString(uint32_t k, std::vector<Sym> symbols);

    // One ASCII digit per symbol, '0'..'9'; requires k <= 10.
    static SymbolString from_digits(uint32_t k, std::string_view digits);

    uint32_t alphabet_size() const { return k_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    Sym operator[](size_t i) const { return data_[i]; }
    const std::vector<Sym>& data() const { return data_; }

    void push_back(Sym a);
    void append(const SymbolString& tail);
    SymbolString prefix(size_t n) const;
    SymbolString substr(size_t pos, size_t len) const;

    std::string digits() const;  // inverse of from_digits, k <= 10 only

    bool operator==(const SymbolString& other) const = default;

private:
    uint32_t k_;
    std::vector<Sym> data_;
};

// Per-symbol occurrence counts, indexed 0..k-1.
std::vector<uint64_t> letter_counts(const SymbolString& w);

// Packed base-k index of the length-l block starting at pos. Lexicographic
// order of blocks equals numeric order of packed indices.
uint64_t pack_block(const SymbolString& s, size_t pos, size_t l);
SymbolString unpack_block(uint32_t k, size_t l, uint64_t index);

// k^l, guarded: throws BlockTooLarge when the result would exceed cap.
uint64_t block_space(uint32_t k, size_t l, uint64_t cap = 1ull << 22);

}  // namespace fsdim
