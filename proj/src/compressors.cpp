#include "fsdim/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

namespace fsdim {

namespace {

namespace mp = boost::multiprecision;

// prefix tree of the strings of length < l: node(u) = offset[|u|] + packed(u)
struct BlockTree {
    uint32_t k = 2;
    size_t l = 1;
    uint64_t space = 1;            // k^l
    std::vector<uint64_t> offset;  // offset[d] = number of nodes of depth < d

    uint64_t nodes() const { return offset[l]; }

    size_t depth_of(uint64_t node) const {
        size_t d = 0;
        while (d + 1 < offset.size() && node >= offset[d + 1]) ++d;
        return d;
    }
};

BlockTree make_tree(uint32_t k, size_t l) {
    BlockTree t;
    t.k = k;
    t.l = l;
    t.space = block_space(k, l);
    t.offset.resize(l + 1);
    uint64_t level = 1;
    t.offset[0] = 0;
    for (size_t d = 0; d < l; ++d) {
        t.offset[d + 1] = t.offset[d] + level;
        level *= k;
    }
    return t;
}

// states reachable from q0 by whole blocks of length l; index 0 is q0
std::vector<uint32_t> block_start_closure(const std::vector<std::vector<uint32_t>>& delta,
                                          uint32_t k, uint32_t q0, size_t l) {
    std::vector<uint32_t> starts;
    std::vector<char> seen(delta.size(), 0);
    std::queue<uint32_t> todo;
    seen[q0] = 1;
    starts.push_back(q0);
    todo.push(q0);
    while (!todo.empty()) {
        uint32_t q = todo.front();
        todo.pop();
        std::vector<char> level(delta.size(), 0);
        level[q] = 1;
        for (size_t step = 0; step < l; ++step) {
            std::vector<char> next(delta.size(), 0);
            for (uint32_t p = 0; p < delta.size(); ++p)
                if (level[p])
                    for (Sym a = 0; a < k; ++a) next[delta[p][a]] = 1;
            level.swap(next);
        }
        for (uint32_t p = 0; p < delta.size(); ++p)
            if (level[p] && !seen[p]) {
                seen[p] = 1;
                starts.push_back(p);
                todo.push(p);
            }
    }
    return starts;
}

Rational pow2(int64_t e) { return pow_rational(Rational(2), e); }

std::string render_code(const BigInt& value, int64_t width) {
    std::string bits(static_cast<size_t>(width), '0');
    for (int64_t j = 0; j < width; ++j)
        if (mp::bit_test(value, static_cast<unsigned>(width - 1 - j))) bits[j] = '1';
    return bits;
}

}  // namespace

FiniteStateCompressor::FiniteStateCompressor(uint32_t k,
                                             std::vector<std::vector<uint32_t>> delta,
                                             uint32_t start,
                                             std::vector<std::vector<std::string>> out)
    : k_(k), delta_(std::move(delta)), start_(start), out_(std::move(out)) {
    if (k_ == 0 || k_ > kMaxAlphabet) fail("AlphabetMismatch", "bad alphabet size");
    if (delta_.empty()) fail("EmptyInput", "compressor needs at least one state");
    if (out_.size() != delta_.size())
        fail("MalformedFile", "transition and output tables disagree on the state count");
    if (start_ >= delta_.size()) fail("MalformedFile", "start state out of range");
    for (size_t q = 0; q < delta_.size(); ++q) {
        if (delta_[q].size() != k_ || out_[q].size() != k_)
            fail("MalformedFile", "state row does not cover the alphabet");
        for (Sym a = 0; a < k_; ++a) {
            if (delta_[q][a] >= delta_.size())
                fail("MalformedFile", "transition target out of range");
            for (char c : out_[q][a])
                if (c != '0' && c != '1')
                    fail("MalformedFile", "output strings must be binary");
        }
    }
}

uint32_t FiniteStateCompressor::walk(const SymbolString& w, uint32_t from) const {
    uint32_t q = from;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= k_) fail("SymbolOutOfRange", "symbol outside the compressor's alphabet");
        q = delta_[q][w[i]];
    }
    return q;
}

FiniteStateCompressor verbatim_coder(uint32_t k) {
    if (k == 0 || k > kMaxAlphabet) fail("AlphabetMismatch", "bad alphabet size");
    int64_t width = 0;
    while ((1ull << width) < k) ++width;
    std::vector<std::string> outputs(k);
    for (uint32_t a = 0; a < k; ++a) outputs[a] = render_code(BigInt(a), width);
    return FiniteStateCompressor(k, {std::vector<uint32_t>(k, 0)}, 0, {outputs});
}

std::string compress(const FiniteStateCompressor& c, const SymbolString& w) {
    std::string bits;
    uint32_t q = c.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= c.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the compressor's alphabet");
        bits += c.output(q, a);
        q = c.next_state(q, a);
    }
    return bits;
}

uint64_t compressed_length(const FiniteStateCompressor& c, const SymbolString& w) {
    uint64_t bits = 0;
    uint32_t q = c.start_state();
    for (size_t i = 0; i < w.size(); ++i) {
        Sym a = w[i];
        if (a >= c.alphabet_size())
            fail("SymbolOutOfRange", "symbol outside the compressor's alphabet");
        bits += c.output(q, a).size();
        q = c.next_state(q, a);
    }
    return bits;
}

ILCheckResult il_check(const FiniteStateCompressor& c, size_t max_len) {
    struct Entry {
        std::string output;
        uint32_t state;
        SymbolString input;
    };
    // key: output bits plus the final state; values keep the first owner
    std::map<std::pair<std::string, uint32_t>, SymbolString> seen;
    std::optional<std::pair<SymbolString, SymbolString>> empty_collision;

    SymbolString lambda(c.alphabet_size());
    seen.emplace(std::make_pair(std::string(), c.start_state()), lambda);

    std::queue<Entry> todo;
    todo.push({std::string(), c.start_state(), lambda});
    while (!todo.empty()) {
        Entry cur = std::move(todo.front());
        todo.pop();
        if (cur.input.size() >= max_len) continue;
        for (Sym a = 0; a < c.alphabet_size(); ++a) {
            Entry next;
            next.output = cur.output + c.output(cur.state, a);
            next.state = c.next_state(cur.state, a);
            next.input = cur.input;
            next.input.push_back(a);
            auto [it, inserted] =
                seen.emplace(std::make_pair(next.output, next.state), next.input);
            if (!inserted) {
                if (it->second.empty()) {
                    // a collision with the empty input is reported only if no
                    // pair of nonempty inputs collides anywhere in range; the
                    // colliding input takes over the slot so that a later hit
                    // yields a nonempty pair
                    if (!empty_collision) empty_collision = {it->second, next.input};
                    it->second = next.input;
                } else {
                    return ILCheckResult{false, it->second, next.input};
                }
            }
            todo.push(std::move(next));
        }
    }
    if (empty_collision)
        return ILCheckResult{false, empty_collision->first, empty_collision->second};
    return ILCheckResult{true, lambda, lambda};
}

GamblerFromCompressor fsg_from_ilfsc(const FiniteStateCompressor& c, size_t block_len) {
    if (block_len == 0) fail("EmptyBlock", "block length must be at least 1");
    uint32_t k = c.alphabet_size();
    BlockTree tree = make_tree(k, block_len);

    ILCheckResult il = il_check(c, block_len);
    if (!il.lossless) {
        std::string detail = "two inputs share output and state";
        if (k <= 10)
            detail = "inputs '" + il.first.digits() + "' and '" + il.second.digits() +
                     "' share output and state";
        fail("NotInformationLossless", detail);
    }

    std::vector<uint32_t> starts =
        block_start_closure(c.transitions(), k, c.start_state(), block_len);
    std::vector<uint32_t> start_index(c.state_count(), 0);
    for (uint32_t i = 0; i < starts.size(); ++i) start_index[starts[i]] = i;

    uint64_t per_start = tree.nodes();
    uint32_t gambler_states = static_cast<uint32_t>(starts.size() * per_start);
    std::vector<std::vector<uint32_t>> delta(gambler_states, std::vector<uint32_t>(k, 0));
    std::vector<std::vector<Rational>> bets(gambler_states, std::vector<Rational>(k));

    int64_t block_defect = 0;
    int64_t tail_defect = 0;

    for (uint32_t i = 0; i < starts.size(); ++i) {
        uint32_t q0 = starts[i];
        // outputs and successor states along every string of length <= l
        std::vector<std::vector<uint64_t>> out_len(block_len + 1);
        std::vector<std::vector<uint32_t>> state(block_len + 1);
        out_len[0] = {0};
        state[0] = {q0};
        for (size_t d = 0; d < block_len; ++d) {
            size_t width = out_len[d].size();
            out_len[d + 1].resize(width * k);
            state[d + 1].resize(width * k);
            for (size_t u = 0; u < width; ++u)
                for (Sym a = 0; a < k; ++a) {
                    out_len[d + 1][u * k + a] = out_len[d][u] + c.output(state[d][u], a).size();
                    state[d + 1][u * k + a] = c.next_state(state[d][u], a);
                }
        }

        Rational kraft = 0;
        for (uint64_t b = 0; b < tree.space; ++b)
            kraft += pow2(-static_cast<int64_t>(out_len[block_len][b]));

        // block masses: 2^-|output|, renormalized down when the Kraft sum
        // exceeds 1, topped up uniformly when it falls short
        std::vector<std::vector<Rational>> mass(block_len + 1);
        mass[block_len].resize(tree.space);
        if (kraft > 1) {
            for (uint64_t b = 0; b < tree.space; ++b)
                mass[block_len][b] =
                    pow2(-static_cast<int64_t>(out_len[block_len][b])) / kraft;
            block_defect = std::max(block_defect, ceil_log2(kraft));
        } else {
            Rational top_up = (1 - kraft) / tree.space;
            for (uint64_t b = 0; b < tree.space; ++b)
                mass[block_len][b] =
                    pow2(-static_cast<int64_t>(out_len[block_len][b])) + top_up;
        }
        for (size_t d = block_len; d-- > 0;) {
            mass[d].resize(out_len[d].size());
            for (size_t u = 0; u < mass[d].size(); ++u) {
                Rational sum = 0;
                for (Sym a = 0; a < k; ++a) sum += mass[d + 1][u * k + a];
                mass[d][u] = sum;
            }
        }

        // worst capital shortfall inside a partial block, in bits
        for (size_t d = 0; d < block_len; ++d)
            for (size_t u = 0; u < mass[d].size(); ++u) {
                Rational ratio = pow2(-static_cast<int64_t>(out_len[d][u])) / mass[d][u];
                tail_defect = std::max(tail_defect, std::max<int64_t>(0, ceil_log2(ratio)));
            }

        for (size_t d = 0; d < block_len; ++d) {
            uint64_t base = i * per_start + tree.offset[d];
            for (uint64_t u = 0; u < mass[d].size(); ++u) {
                uint32_t g = static_cast<uint32_t>(base + u);
                for (Sym a = 0; a < k; ++a) {
                    bets[g][a] = mass[d + 1][u * k + a] / mass[d][u];
                    if (d + 1 < block_len) {
                        delta[g][a] =
                            static_cast<uint32_t>(i * per_start + tree.offset[d + 1] + u * k + a);
                    } else {
                        uint32_t next_start = start_index[state[block_len][u * k + a]];
                        delta[g][a] = static_cast<uint32_t>(next_start * per_start);
                    }
                }
            }
        }
    }

    int64_t l = static_cast<int64_t>(block_len);
    int64_t m = std::max(block_defect, (tail_defect + l - 1) / l);

    GamblerFromCompressor result{
        FiniteStateGambler(k, std::move(delta), 0, std::move(bets)),
        block_len,
        m,
        block_defect,
        tail_defect,
        c,
        std::move(starts)};
    return result;
}

SmoothedGambler nonvanishing_smooth(const FiniteStateGambler& g, double delta) {
    if (!(delta > 0.0)) fail("NonPositiveMeasure", "smoothing rate must be positive");
    double d_eff = std::max(delta, 1e-9);
    uint32_t k = g.alphabet_size();
    if (k == 1) return SmoothedGambler{g, d_eff, Rational(1)};

    // smallest 62-bit dyadic at or above k^-delta; the +2 covers the rounding
    // of the long double evaluation, so retain >= k^-delta is certain
    long double y = exp2l(-static_cast<long double>(d_eff) *
                          log2l(static_cast<long double>(k)));
    uint64_t j = static_cast<uint64_t>(ceill(y * 0x1p62L)) + 2;
    Rational retain(BigInt(j), BigInt(1) << 62);
    Rational spread = (1 - retain) / k;

    std::vector<std::vector<Rational>> bets(g.state_count(), std::vector<Rational>(k));
    for (uint32_t q = 0; q < g.state_count(); ++q)
        for (Sym a = 0; a < k; ++a) bets[q][a] = retain * g.bet(q, a) + spread;

    return SmoothedGambler{
        FiniteStateGambler(k, g.transitions(), g.start_state(), std::move(bets)),
        d_eff, retain};
}

CompressorFromGambler ilfsc_from_fsg(const FiniteStateGambler& g, size_t block_len) {
    if (block_len == 0) fail("EmptyBlock", "block length must be at least 1");
    if (!g.nonvanishing()) fail("VanishingBets", "code lengths need positive bets everywhere");
    uint32_t k = g.alphabet_size();
    BlockTree tree = make_tree(k, block_len);

    std::vector<uint32_t> starts =
        block_start_closure(g.transitions(), k, g.start_state(), block_len);
    std::vector<uint32_t> start_index(g.state_count(), 0);
    for (uint32_t i = 0; i < starts.size(); ++i) start_index[starts[i]] = i;

    std::vector<BlockCodeTable> tables(starts.size());
    for (uint32_t i = 0; i < starts.size(); ++i) {
        uint32_t q0 = starts[i];
        std::vector<Rational> prob(tree.space);
        std::vector<uint32_t> state(tree.space);
        {
            std::vector<Rational> p = {Rational(1)};
            std::vector<uint32_t> st = {q0};
            for (size_t d = 0; d < block_len; ++d) {
                std::vector<Rational> pn(p.size() * k);
                std::vector<uint32_t> sn(p.size() * k);
                for (size_t u = 0; u < p.size(); ++u)
                    for (Sym a = 0; a < k; ++a) {
                        pn[u * k + a] = p[u] * g.bet(st[u], a);
                        sn[u * k + a] = g.next_state(st[u], a);
                    }
                p.swap(pn);
                st.swap(sn);
            }
            prob = std::move(p);
            state = std::move(st);
        }

        std::vector<int64_t> len(tree.space);
        Rational kraft = 0;
        for (uint64_t b = 0; b < tree.space; ++b) {
            len[b] = std::max<int64_t>(1, ceil_log2_inverse(prob[b]));
            kraft += pow2(-len[b]);
        }

        // spend the remaining Kraft slack on the most probable blocks
        auto heavier = [&](uint64_t a, uint64_t b) {
            if (prob[a] != prob[b]) return prob[a] < prob[b];
            return a > b;
        };
        std::priority_queue<uint64_t, std::vector<uint64_t>, decltype(heavier)> order(heavier);
        for (uint64_t b = 0; b < tree.space; ++b) order.push(b);
        while (!order.empty()) {
            uint64_t b = order.top();
            order.pop();
            if (len[b] <= 1) continue;
            Rational grow = pow2(-len[b]);
            if (kraft + grow > 1) continue;
            kraft += grow;
            --len[b];
            order.push(b);
        }

        // canonical assignment: shortest lengths first, heavier blocks first
        std::vector<uint64_t> blocks(tree.space);
        for (uint64_t b = 0; b < tree.space; ++b) blocks[b] = b;
        std::sort(blocks.begin(), blocks.end(), [&](uint64_t a, uint64_t b) {
            if (len[a] != len[b]) return len[a] < len[b];
            if (prob[a] != prob[b]) return prob[a] > prob[b];
            return a < b;
        });

        BlockCodeTable table;
        table.state = q0;
        table.codeword.resize(tree.space);
        table.next_state.resize(tree.space);
        BigInt code = 0;
        for (size_t rank = 0; rank < blocks.size(); ++rank) {
            uint64_t b = blocks[rank];
            if (rank > 0) {
                code += 1;
                code <<= static_cast<unsigned>(len[b] - len[blocks[rank - 1]]);
            }
            if (code >> static_cast<unsigned>(len[b]) != 0)
                throw std::logic_error("canonical code exceeded its width");
            table.codeword[b] = render_code(code, len[b]);
            table.next_state[b] = state[b];
        }
        tables[i] = std::move(table);
    }

    uint64_t per_start = tree.nodes();
    uint32_t comp_states = static_cast<uint32_t>(starts.size() * per_start);
    std::vector<std::vector<uint32_t>> delta(comp_states, std::vector<uint32_t>(k, 0));
    std::vector<std::vector<std::string>> out(comp_states, std::vector<std::string>(k));
    for (uint32_t i = 0; i < starts.size(); ++i)
        for (size_t d = 0; d < block_len; ++d) {
            uint64_t width = tree.offset[d + 1] - tree.offset[d];
            for (uint64_t u = 0; u < width; ++u) {
                uint32_t s = static_cast<uint32_t>(i * per_start + tree.offset[d] + u);
                for (Sym a = 0; a < k; ++a) {
                    if (d + 1 < block_len) {
                        delta[s][a] =
                            static_cast<uint32_t>(i * per_start + tree.offset[d + 1] + u * k + a);
                    } else {
                        uint64_t b = u * k + a;  // the completed block
                        out[s][a] = tables[i].codeword[b];
                        uint32_t next_start = start_index[tables[i].next_state[b]];
                        delta[s][a] = static_cast<uint32_t>(next_start * per_start);
                    }
                }
            }
        }

    CompressorFromGambler result{
        FiniteStateCompressor(k, std::move(delta), 0, std::move(out)),
        block_len,
        std::move(tables),
        std::move(starts),
        g};
    return result;
}

SymbolString CompressorFromGambler::decode(const std::string& bits,
                                           uint32_t final_state) const {
    uint32_t k = source.alphabet_size();
    BlockTree tree = make_tree(k, block_len);
    std::vector<uint32_t> start_index(source.state_count(), 0);
    for (uint32_t i = 0; i < block_start_states.size(); ++i)
        start_index[block_start_states[i]] = i;

    std::vector<std::map<std::string, uint64_t>> decode_maps(tables.size());
    for (size_t i = 0; i < tables.size(); ++i)
        for (uint64_t b = 0; b < tree.space; ++b)
            decode_maps[i].emplace(tables[i].codeword[b], b);

    SymbolString result(k);
    uint32_t i = 0;  // the automaton starts at the first block-start state
    size_t pos = 0;
    while (pos < bits.size()) {
        uint64_t block = tree.space;
        size_t len = 0;
        for (len = 1; pos + len <= bits.size(); ++len) {
            auto it = decode_maps[i].find(bits.substr(pos, len));
            if (it != decode_maps[i].end()) {
                block = it->second;
                break;
            }
        }
        if (block == tree.space)
            fail("MalformedFile", "code bits end inside a codeword");
        pos += len;
        result.append(unpack_block(k, block_len, block));
        i = start_index[tables[i].next_state[block]];
    }

    uint64_t per_start = tree.nodes();
    if (final_state / per_start != i)
        fail("MalformedFile", "final state does not match the decoded bits");
    result.append(buffered_tail(final_state));
    return result;
}

SymbolString CompressorFromGambler::buffered_tail(uint32_t state) const {
    uint32_t k = source.alphabet_size();
    BlockTree tree = make_tree(k, block_len);
    uint64_t node = state % tree.nodes();
    size_t d = tree.depth_of(node);
    return unpack_block(k, d, node - tree.offset[d]);
}

double compression_ratio(const FiniteStateCompressor& c, const ProbabilityMeasure& beta,
                         const SymbolString& w) {
    if (w.empty()) fail("EmptyInput", "compression ratio of an empty string");
    if (!beta.is_positive())
        fail("NonPositiveMeasure", "the pricing measure must be positive");
    double info = self_information_bits(beta, w);
    if (info == 0.0) fail("DegenerateFormula", "self-information is zero");
    return static_cast<double>(compressed_length(c, w)) / info;
}

}  // namespace fsdim
