#include "fsdim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "fsdim/version.hpp"

namespace fsdim {

namespace {

std::vector<size_t> halving_grid(size_t n_max, size_t points) {
    std::vector<size_t> grid;
    if (points == 0) points = 1;
    for (size_t i = points; i-- > 0;) {
        size_t n = n_max >> i;
        if (n == 0) continue;
        if (grid.empty() || n > grid.back()) grid.push_back(n);
    }
    return grid;
}

std::vector<size_t> grid_for_block_len(const SymbolString& S, size_t l,
                                       const EstimatorOptions& opt) {
    size_t n_max = S.size() / l;
    if (n_max == 0)
        fail("InsufficientPrefix",
             "no complete block of length " + std::to_string(l));
    if (!opt.prefix_grid) return halving_grid(n_max, opt.grid_points);
    std::vector<size_t> grid;
    for (size_t prefix : *opt.prefix_grid) {
        size_t n = std::min(prefix, S.size()) / l;
        if (n == 0) continue;
        if (grid.empty() || n > grid.back()) grid.push_back(n);
    }
    if (grid.empty())
        fail("InsufficientPrefix", "prefix grid yields no complete blocks");
    return grid;
}

// run one job per block length, at most opt.threads at a time, results in
// block-length order regardless of completion order
template <typename Fn>
auto per_block_len(size_t l_max, size_t threads, Fn&& fn)
    -> std::vector<decltype(fn(size_t{1}))> {
    using Result = decltype(fn(size_t{1}));
    std::vector<Result> results;
    results.reserve(l_max);
    if (threads <= 1) {
        for (size_t l = 1; l <= l_max; ++l) results.push_back(fn(l));
        return results;
    }
    for (size_t base = 1; base <= l_max; base += threads) {
        std::vector<std::future<Result>> batch;
        for (size_t l = base; l <= l_max && l < base + threads; ++l)
            batch.push_back(std::async(std::launch::async, fn, l));
        for (auto& f : batch) results.push_back(f.get());
    }
    return results;
}

// gambler over the prefix tree of blocks whose completed-block distribution
// is exactly the empirical one; unseen branches bet uniformly
FiniteStateGambler fitted_block_gambler(const EmpiricalBlockMeasure& pi) {
    uint32_t k = pi.k;
    size_t l = pi.block_len;
    std::vector<uint64_t> offset(l + 1);
    uint64_t level = 1;
    for (size_t d = 0; d < l; ++d) {
        offset[d + 1] = offset[d] + level;
        level *= k;
    }

    // subtree counts: how many counted blocks pass through each node
    std::vector<std::vector<uint64_t>> through(l + 1);
    through[l] = pi.counts;
    for (size_t d = l; d-- > 0;) {
        through[d].resize(d == 0 ? 1 : through[d + 1].size() / k);
        for (size_t u = 0; u < through[d].size(); ++u) {
            uint64_t sum = 0;
            for (Sym a = 0; a < k; ++a) sum += through[d + 1][u * k + a];
            through[d][u] = sum;
        }
    }

    uint32_t states = static_cast<uint32_t>(offset[l]);
    std::vector<std::vector<uint32_t>> delta(states, std::vector<uint32_t>(k, 0));
    std::vector<std::vector<Rational>> bets(states, std::vector<Rational>(k));
    for (size_t d = 0; d < l; ++d)
        for (uint64_t u = 0; u < through[d].size(); ++u) {
            uint32_t s = static_cast<uint32_t>(offset[d] + u);
            for (Sym a = 0; a < k; ++a) {
                if (through[d][u] == 0)
                    bets[s][a] = Rational(1, k);
                else
                    bets[s][a] = Rational(through[d + 1][u * k + a], through[d][u]);
                delta[s][a] = d + 1 < l
                                  ? static_cast<uint32_t>(offset[d + 1] + u * k + a)
                                  : 0;
            }
        }
    return FiniteStateGambler(k, std::move(delta), 0, std::move(bets));
}

void fill_tail(BlockEntropyTrace& trace) {
    if (trace.rates.empty()) return;
    size_t start = trace.rates.size() / 2;
    trace.tail_min = trace.rates[start];
    trace.tail_max = trace.rates[start];
    for (size_t i = start; i < trace.rates.size(); ++i) {
        trace.tail_min = std::min(trace.tail_min, trace.rates[i]);
        trace.tail_max = std::max(trace.tail_max, trace.rates[i]);
    }
}

}  // namespace

BlockEntropyTrace block_entropy_rate(const SymbolString& S, size_t l,
                                     std::vector<size_t> n_grid) {
    if (l == 0) fail("EmptyBlock", "block length must be at least 1");
    if (n_grid.empty()) fail("EmptyInput", "empty block-count grid");
    for (size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) fail("MalformedFile", "grid must be increasing");
    if (n_grid.front() == 0) fail("EmptyInput", "grid needs at least one block");
    if (S.size() < n_grid.back() * l)
        fail("InsufficientPrefix", "need " + std::to_string(n_grid.back() * l) +
                                       " symbols, have " + std::to_string(S.size()));

    uint64_t space = block_space(S.alphabet_size(), l);
    double log_norm = l * std::log2(static_cast<double>(S.alphabet_size()));

    BlockEntropyTrace trace;
    trace.block_len = l;
    trace.grid = std::move(n_grid);
    trace.entropy_bits.reserve(trace.grid.size());
    trace.rates.reserve(trace.grid.size());

    std::vector<uint64_t> counts(space, 0);
    size_t blocks = 0;
    for (size_t n : trace.grid) {
        for (; blocks < n; ++blocks) ++counts[pack_block(S, blocks * l, l)];
        double sum = 0.0;
        for (uint64_t c : counts)
            if (c > 0) sum += static_cast<double>(c) * std::log2(static_cast<double>(c));
        double nn = static_cast<double>(n);
        double h = std::log2(nn) - sum / nn;
        if (h < 0.0) h = 0.0;
        trace.entropy_bits.push_back(h);
        trace.rates.push_back(log_norm > 0.0 ? h / log_norm : 0.0);
    }
    fill_tail(trace);
    return trace;
}

DimensionEstimate fs_dimension_estimate(const SymbolString& S, size_t l_max,
                                        const EstimatorOptions& opt) {
    if (l_max == 0) fail("EmptyBlock", "need at least block length 1");
    if (S.empty()) fail("EmptyInput", "cannot estimate from an empty string");

    DimensionEstimate est;
    est.per_block_len = per_block_len(l_max, opt.threads, [&](size_t l) {
        return block_entropy_rate(S, l, grid_for_block_len(S, l, opt));
    });
    est.lower = est.per_block_len.front().tail_min;
    est.upper = est.per_block_len.front().tail_max;
    for (const BlockEntropyTrace& t : est.per_block_len) {
        est.lower = std::min(est.lower, t.tail_min);
        est.upper = std::min(est.upper, t.tail_max);
    }
    return est;
}

BetaDimensionEstimate fs_beta_dimension_estimate(const SymbolString& S,
                                                 const ProbabilityMeasure& beta,
                                                 size_t l_max, BetaRoute route,
                                                 const EstimatorOptions& opt) {
    if (S.empty()) fail("EmptyInput", "cannot estimate from an empty string");
    if (beta.alphabet_size() != S.alphabet_size())
        fail("AlphabetMismatch", "pricing measure must match the string's alphabet");
    if (!beta.is_positive())
        fail("NonPositiveMeasure", "pricing measure must be positive");

    double logk = std::log2(static_cast<double>(S.alphabet_size()));

    BetaDimensionEstimate est{
        route,
        fs_dimension_estimate(S, l_max, opt),
        letter_frequencies(S),
    };
    double h = entropy_bits(est.alpha_hat);
    double d = kl_divergence_bits(est.alpha_hat, beta);
    if (h == 0.0 && d == 0.0)
        fail("DegenerateFormula", "empirical entropy and divergence are both zero");
    est.denominator = (h + d) / logk;
    est.entropy_route_lower = est.fs_dim.lower / est.denominator;
    est.entropy_route_upper = est.fs_dim.upper / est.denominator;

    double info = self_information_bits(beta, S);
    est.compression_per_block_len =
        per_block_len(l_max, opt.threads, [&](size_t l) {
            EmpiricalBlockMeasure pi = block_frequencies(S, l, S.size() / l);
            SmoothedGambler smooth =
                nonvanishing_smooth(fitted_block_gambler(pi), opt.smooth_delta);
            CompressorFromGambler code = ilfsc_from_fsg(smooth.gambler, l);
            CompressionRouteEntry entry;
            entry.block_len = l;
            entry.compressed_bits = compressed_length(code.compressor, S);
            entry.ratio = static_cast<double>(entry.compressed_bits) / info;
            return entry;
        });
    est.compression_route = est.compression_per_block_len.front().ratio;
    for (const CompressionRouteEntry& e : est.compression_per_block_len)
        est.compression_route = std::min(est.compression_route, e.ratio);
    return est;
}

DimensionReport verify_divergence(const ProbabilityMeasure& alpha,
                                  const ProbabilityMeasure& beta, size_t n,
                                  uint64_t seed, size_t l_max,
                                  const EstimatorOptions& opt,
                                  const VerifyTolerances& tol) {
    if (n == 0) fail("EmptyInput", "need a nonempty sample");
    InfoSummary info = info_summary(alpha, beta);
    SymbolString S = iid_sample(alpha, n, seed);

    DimensionReport report{
        kVersion,
        alpha.alphabet_size(),
        alpha,
        beta,
        n,
        seed,
        l_max,
        opt.grid_points,
        "iid",
        info,
        fs_beta_dimension_estimate(S, beta, l_max, BetaRoute::entropy, opt),
    };
    report.dimension_gap_lower = std::abs(report.estimate.fs_dim.lower - info.entropy_base_k);
    report.dimension_gap_upper = std::abs(report.estimate.fs_dim.upper - info.entropy_base_k);
    report.frequency_residual = frequency_divergence_residual(alpha, beta, S);
    report.tol = tol;

    double prediction = info.formula_value;
    report.pass_entropy_route =
        std::abs(report.estimate.entropy_route_lower - prediction) <= tol.entropy_route &&
        std::abs(report.estimate.entropy_route_upper - prediction) <= tol.entropy_route;
    report.pass_dimension_gap =
        report.dimension_gap_lower <= tol.dimension_gap &&
        report.dimension_gap_upper <= tol.dimension_gap;
    report.pass_residual = std::abs(report.frequency_residual) <= tol.residual;
    report.pass_cross_route =
        std::abs(report.estimate.compression_route - report.estimate.entropy_route_lower) <=
        tol.cross_route;
    report.pass = report.pass_entropy_route && report.pass_dimension_gap &&
                  report.pass_residual && report.pass_cross_route;
    return report;
}

}  // namespace fsdim
