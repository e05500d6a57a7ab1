#include "fsdim/symbols.hpp"

#include <string>

namespace fsdim {

namespace {

void check_alphabet(uint32_t k) {
    if (k == 0) fail("AlphabetMismatch", "alphabet size must be at least 1");
    if (k > kMaxAlphabet) fail("AlphabetMismatch", "alphabet size exceeds " + std::to_string(kMaxAlphabet));
}

}  // namespace

SymbolString::SymbolString(uint32_t k) : k_(k) { check_alphabet(k); }

SymbolString::SymbolString(uint32_t k, std::vector<Sym> symbols)
    : k_(k), data_(std::move(symbols)) {
    check_alphabet(k);
    for (Sym a : data_)
        if (a >= k_)
            fail("SymbolOutOfRange",
                 "symbol " + std::to_string(a) + " not below " + std::to_string(k_));
}

SymbolString SymbolString::from_digits(uint32_t k, std::string_view digits) {
    check_alphabet(k);
    if (k > 10) fail("AlphabetMismatch", "digit strings support k <= 10");
    std::vector<Sym> data;
    data.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9')
            fail("SymbolOutOfRange", std::string("character '") + c + "' is not a digit");
        Sym a = static_cast<Sym>(c - '0');
        if (a >= k)
            fail("SymbolOutOfRange",
                 "digit " + std::to_string(a) + " not below " + std::to_string(k));
        data.push_back(a);
    }
    return SymbolString(k, std::move(data));
}

void SymbolString::push_back(Sym a) {
    if (a >= k_)
        fail("SymbolOutOfRange",
             "symbol " + std::to_string(a) + " not below " + std::to_string(k_));
    data_.push_back(a);
}

void SymbolString::append(const SymbolString& tail) {
    if (tail.k_ != k_) fail("AlphabetMismatch", "appending across alphabets");
    data_.insert(data_.end(), tail.data_.begin(), tail.data_.end());
}

SymbolString SymbolString::prefix(size_t n) const {
    if (n > data_.size()) fail("InsufficientPrefix", "prefix longer than the string");
    return SymbolString(k_, std::vector<Sym>(data_.begin(), data_.begin() + n));
}

SymbolString SymbolString::substr(size_t pos, size_t len) const {
    if (pos > data_.size() || len > data_.size() - pos)
        fail("InsufficientPrefix", "substring outside the string");
    return SymbolString(k_, std::vector<Sym>(data_.begin() + pos, data_.begin() + pos + len));
}

std::string SymbolString::digits() const {
    if (k_ > 10) fail("AlphabetMismatch", "digit strings support k <= 10");
    std::string out;
    out.reserve(data_.size());
    for (Sym a : data_) out += static_cast<char>('0' + a);
    return out;
}

std::vector<uint64_t> letter_counts(const SymbolString& w) {
    std::vector<uint64_t> counts(w.alphabet_size(), 0);
    for (size_t i = 0; i < w.size(); ++i) ++counts[w[i]];
    return counts;
}

uint64_t pack_block(const SymbolString& s, size_t pos, size_t l) {
    if (pos > s.size() || l > s.size() - pos)
        fail("InsufficientPrefix", "block extends past the end of the string");
    uint64_t k = s.alphabet_size();
    uint64_t idx = 0;
    for (size_t i = 0; i < l; ++i) {
        if (idx > (~0ull - s[pos + i]) / k) fail("BlockTooLarge", "packed block exceeds 64 bits");
        idx = idx * k + s[pos + i];
    }
    return idx;
}

SymbolString unpack_block(uint32_t k, size_t l, uint64_t index) {
    std::vector<Sym> data(l);
    for (size_t i = l; i-- > 0;) {
        data[i] = static_cast<Sym>(index % k);
        index /= k;
    }
    if (index != 0) fail("SymbolOutOfRange", "block index too large for k^l");
    return SymbolString(k, std::move(data));
}

uint64_t block_space(uint32_t k, size_t l, uint64_t cap) {
    check_alphabet(k);
    uint64_t space = 1;
    for (size_t i = 0; i < l; ++i) {
        if (space > cap / k)
            fail("BlockTooLarge", "k^l exceeds the enumeration cap of " + std::to_string(cap));
        space *= k;
    }
    return space;
}

}  // namespace fsdim
