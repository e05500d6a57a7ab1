#include <CLI11.hpp>

#include <bit>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fsdim/estimators.hpp"
#include "fsdim/io.hpp"
#include "fsdim/version.hpp"

namespace {

using namespace fsdim;

size_t env_threads() {
    const char* env = std::getenv("FSDIM_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) return 1;
    return std::min<unsigned long>(v, 64);
}

std::vector<size_t> halving_grid(size_t n, size_t points) {
    std::vector<size_t> grid;
    for (size_t i = points; i-- > 0;) {
        size_t m = n >> i;
        if (m == 0) continue;
        if (grid.empty() || m > grid.back()) grid.push_back(m);
    }
    return grid;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct GenArgs {
    std::string measure, out;
    bool champ = false;
    uint32_t k = 2;
    size_t n = 0;
    uint64_t seed = 1;
};

struct GaleRunArgs {
    std::string fsg, measure, s = "1", seq, grid = "log", list;
    size_t points = 16;
    bool json = false;
};

struct CompressArgs {
    std::string ilfsc, seq, out, measure;
    bool flush = false, report = false;
};

struct ConvertArgs {
    std::string from_fsg, from_ilfsc, out;
    size_t l = 0;
    double smooth = -1.0;
};

struct IlCheckArgs {
    std::string ilfsc;
    size_t depth = 8;
};

struct EstimateArgs {
    std::string seq, beta, route = "entropy";
    size_t l_max = 4, points = 4;
    bool json = false;
};

struct VerifyArgs {
    std::string alpha, beta, out, csv;
    size_t n = 0, l_max = 8, points = 4;
    uint64_t seed = 1;
    VerifyTolerances tol;
};

int run_gen(const GenArgs& a) {
    if (a.measure.empty() == !a.champ)
        throw CLI::ValidationError("gen", "need exactly one of --measure and --champernowne");
    SymbolString s(2);
    if (a.champ) {
        s = champernowne(a.k, a.n);
    } else {
        ProbabilityMeasure alpha = load_measure(a.measure);
        s = iid_sample(alpha, a.n, a.seed);
    }
    emit(s.digits() + "\n", a.out);
    return 0;
}

int run_gale_run(const GaleRunArgs& a) {
    FiniteStateGambler g = load_gambler(a.fsg);
    ProbabilityMeasure beta = a.measure.empty()
                                  ? ProbabilityMeasure::uniform(g.alphabet_size())
                                  : load_measure(a.measure);
    double s = rational_to_double(parse_rational(a.s));
    SymbolString S = load_sequence(a.seq, g.alphabet_size());

    std::vector<size_t> grid;
    if (a.grid == "log") {
        grid = halving_grid(S.size(), a.points);
    } else if (a.grid == "lin") {
        for (size_t i = 1; i <= a.points; ++i) {
            size_t m = S.size() * i / a.points;
            if (m == 0) continue;
            if (grid.empty() || m > grid.back()) grid.push_back(m);
        }
    } else if (a.grid == "list") {
        std::string token;
        for (char ch : a.list + ",") {
            if (ch == ',') {
                if (!token.empty()) grid.push_back(std::stoull(token));
                token.clear();
            } else {
                token.push_back(ch);
            }
        }
    } else {
        throw CLI::ValidationError("gale-run", "--grid must be log, lin, or list");
    }

    GaleTrace t = success_trace(g, beta, s, S, std::move(grid));
    if (a.json) {
        std::cout << trace_to_json(t).dump(2) << "\n";
    } else {
        for (size_t i = 0; i < t.grid.size(); ++i)
            std::cout << t.grid[i] << " " << t.log2_values[i] << " " << t.states[i]
                      << "\n";
        std::cout << "tail_min " << t.tail_min << "\ntail_max " << t.tail_max << "\n";
    }
    return 0;
}

int run_compress(const CompressArgs& a) {
    StoredCompressor stored = load_compressor(a.ilfsc);
    const FiniteStateCompressor& c = stored.compressor;
    SymbolString S = load_sequence(a.seq, c.alphabet_size());
    std::string bits = compress(c, S);
    uint32_t final_state = c.walk(S);

    size_t flushed = 0;
    if (a.flush) {
        if (!stored.block_len || stored.tails.size() != c.state_count())
            throw CLI::ValidationError(
                "compress", "--flush needs a compressor file with block metadata");
        SymbolString tail =
            SymbolString::from_digits(c.alphabet_size(), stored.tails[final_state]);
        uint32_t width = c.alphabet_size() > 1
                             ? std::bit_width(c.alphabet_size() - 1u)
                             : 0;
        for (size_t i = 0; i < tail.size(); ++i)
            for (uint32_t b = width; b-- > 0;)
                bits.push_back((tail[i] >> b) & 1 ? '1' : '0');
        flushed = tail.size() * width;
    }

    if (a.report) {
        Json j;
        j["input_symbols"] = S.size();
        j["output_bits"] = bits.size();
        j["flushed_bits"] = flushed;
        j["final_state"] = final_state;
        if (!a.measure.empty())
            j["ratio"] = compression_ratio(c, load_measure(a.measure), S);
        std::cout << j.dump(2) << "\n";
        if (!a.out.empty()) write_text_file(a.out, bits + "\n");
    } else {
        emit(bits + "\n", a.out);
    }
    return 0;
}

int run_convert(const ConvertArgs& a) {
    if (a.from_fsg.empty() == a.from_ilfsc.empty())
        throw CLI::ValidationError("convert",
                                   "need exactly one of --from-fsg and --from-ilfsc");
    if (a.out.empty()) throw CLI::ValidationError("convert", "--out is required");

    if (!a.from_fsg.empty()) {
        if (a.l == 0) throw CLI::ValidationError("convert", "--l is required");
        FiniteStateGambler g = load_gambler(a.from_fsg);
        if (a.smooth >= 0.0) g = nonvanishing_smooth(g, a.smooth).gambler;
        CompressorFromGambler code = ilfsc_from_fsg(g, a.l);
        save_compressor(code, a.out);
        std::cout << "coder states " << code.compressor.state_count()
                  << " block_len " << code.block_len << "\n";
        return 0;
    }

    if (a.smooth >= 0.0)
        throw CLI::ValidationError("convert", "--smooth only applies to --from-fsg");
    StoredCompressor stored = load_compressor(a.from_ilfsc);
    size_t l = a.l != 0 ? a.l : stored.block_len.value_or(0);
    if (l == 0)
        throw CLI::ValidationError("convert",
                                   "--l is required (file carries no block length)");
    GamblerFromCompressor conv = fsg_from_ilfsc(stored.compressor, l);
    save_gambler(conv.gambler, a.out);
    std::cout << "gambler states " << conv.gambler.state_count() << " block_len "
              << conv.block_len << " correction " << conv.correction
              << " block_defect " << conv.block_defect << " tail_defect "
              << conv.tail_defect << "\n";
    return 0;
}

int run_il_check(const IlCheckArgs& a) {
    StoredCompressor stored = load_compressor(a.ilfsc);
    ILCheckResult res = il_check(stored.compressor, a.depth);
    if (res.lossless) {
        std::cout << "information lossless for all inputs of length <= " << a.depth
                  << "\n";
        return 0;
    }
    std::cerr << "NotInformationLossless: inputs '";
    if (stored.compressor.alphabet_size() <= 10)
        std::cerr << res.first.digits() << "' and '" << res.second.digits();
    else
        std::cerr << "<len " << res.first.size() << ">' and '<len "
                  << res.second.size() << ">";
    std::cerr << "' share output and final state\n";
    return 1;
}

int run_estimate(const EstimateArgs& a) {
    SymbolString S = load_sequence(a.seq);
    ProbabilityMeasure beta = a.beta.empty()
                                  ? ProbabilityMeasure::uniform(S.alphabet_size())
                                  : load_measure(a.beta);
    EstimatorOptions opt;
    opt.grid_points = a.points;
    opt.threads = env_threads();
    BetaRoute route =
        a.route == "compression" ? BetaRoute::compression : BetaRoute::entropy;
    if (a.route != "entropy" && a.route != "compression")
        throw CLI::ValidationError("estimate", "--route must be entropy or compression");
    BetaDimensionEstimate est =
        fs_beta_dimension_estimate(S, beta, a.l_max, route, opt);
    if (a.json) {
        std::cout << beta_estimate_to_json(est).dump(2) << "\n";
    } else {
        std::cout << "dimension_lower " << est.fs_dim.lower << "\n"
                  << "dimension_upper " << est.fs_dim.upper << "\n"
                  << "entropy_route " << est.entropy_route_lower << "\n"
                  << "compression_route " << est.compression_route << "\n"
                  << "value " << est.value() << "\n";
    }
    return 0;
}

int run_verify(const VerifyArgs& a) {
    ProbabilityMeasure alpha = load_measure(a.alpha);
    ProbabilityMeasure beta = a.beta.empty()
                                  ? ProbabilityMeasure::uniform(alpha.alphabet_size())
                                  : load_measure(a.beta);
    EstimatorOptions opt;
    opt.grid_points = a.points;
    opt.threads = env_threads();
    DimensionReport report =
        verify_divergence(alpha, beta, a.n, a.seed, a.l_max, opt, a.tol);
    Json j = report_to_json(report);
    if (!a.out.empty())
        save_json(j, a.out);
    else
        std::cout << j.dump(2) << "\n";
    if (!a.csv.empty()) write_text_file(a.csv, report_to_csv(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-state dimension toolkit"};
    app.set_version_flag("--version", std::string(fsdim::kVersion));
    app.require_subcommand(1);
    int rc = 0;

    GenArgs gen;
    CLI::App* sub = app.add_subcommand("gen", "sample or construct a sequence");
    sub->add_option("--measure", gen.measure, "measure file for iid sampling");
    sub->add_flag("--champernowne", gen.champ, "base-k normal concatenation instead");
    sub->add_option("--k", gen.k, "alphabet size for --champernowne");
    sub->add_option("--n", gen.n, "length in symbols")->required();
    sub->add_option("--seed", gen.seed, "prng seed");
    sub->add_option("--out", gen.out, "output path, stdout if omitted");
    sub->callback([&] { rc = run_gen(gen); });

    GaleRunArgs gale;
    sub = app.add_subcommand("gale-run", "trace gale capital along a sequence");
    sub->add_option("--fsg", gale.fsg, "gambler file")->required();
    sub->add_option("--measure", gale.measure, "pricing measure, uniform if omitted");
    sub->add_option("--s", gale.s, "payoff exponent, rational");
    sub->add_option("--seq", gale.seq, "sequence file")->required();
    sub->add_option("--grid", gale.grid, "log, lin, or list");
    sub->add_option("--points", gale.points, "grid size for log/lin");
    sub->add_option("--list", gale.list, "comma separated prefix lengths");
    sub->add_flag("--json", gale.json, "emit the trace as json");
    sub->callback([&] { rc = run_gale_run(gale); });

    CompressArgs comp;
    sub = app.add_subcommand("compress", "run a coder over a sequence");
    sub->add_option("--ilfsc", comp.ilfsc, "compressor file")->required();
    sub->add_option("--seq", comp.seq, "sequence file")->required();
    sub->add_option("--out", comp.out, "output bit string path");
    sub->add_flag("--flush", comp.flush, "append buffered symbols verbatim");
    sub->add_flag("--report", comp.report, "print a json summary to stdout");
    sub->add_option("--measure", comp.measure, "pricing measure for the report ratio");
    sub->callback([&] { rc = run_compress(comp); });

    ConvertArgs conv;
    sub = app.add_subcommand("convert", "translate gambler <-> compressor");
    sub->add_option("--from-fsg", conv.from_fsg, "gambler file to encode as a coder");
    sub->add_option("--from-ilfsc", conv.from_ilfsc, "coder file to bet from");
    sub->add_option("--l", conv.l, "block length");
    sub->add_option("--smooth", conv.smooth, "mix bets with uniform before coding");
    sub->add_option("--out", conv.out, "output path");
    sub->callback([&] { rc = run_convert(conv); });

    IlCheckArgs il;
    sub = app.add_subcommand("il-check", "test information losslessness");
    sub->add_option("--ilfsc", il.ilfsc, "compressor file")->required();
    sub->add_option("--depth", il.depth, "exhaustive input length bound");
    sub->callback([&] { rc = run_il_check(il); });

    EstimateArgs est;
    sub = app.add_subcommand("estimate", "dimension of a sequence file");
    sub->add_option("--seq", est.seq, "sequence file")->required();
    sub->add_option("--lmax", est.l_max, "largest block length");
    sub->add_option("--beta", est.beta, "pricing measure, uniform if omitted");
    sub->add_option("--route", est.route, "entropy or compression");
    sub->add_option("--points", est.points, "grid points per block length");
    sub->add_flag("--json", est.json, "emit the full estimate as json");
    sub->callback([&] { rc = run_estimate(est); });

    VerifyArgs ver;
    sub = app.add_subcommand("verify", "sample, estimate, and grade the formula");
    sub->add_option("--alpha", ver.alpha, "source measure file")->required();
    sub->add_option("--beta", ver.beta, "pricing measure, uniform if omitted");
    sub->add_option("--n", ver.n, "sample length")->required();
    sub->add_option("--seed", ver.seed, "prng seed");
    sub->add_option("--lmax", ver.l_max, "largest block length");
    sub->add_option("--points", ver.points, "grid points per block length");
    sub->add_option("--out", ver.out, "report json path, stdout if omitted");
    sub->add_option("--csv", ver.csv, "also write the long-format csv here");
    sub->add_option("--tol-entropy-route", ver.tol.entropy_route, "");
    sub->add_option("--tol-dimension-gap", ver.tol.dimension_gap, "");
    sub->add_option("--tol-residual", ver.tol.residual, "");
    sub->add_option("--tol-cross-route", ver.tol.cross_route, "");
    sub->callback([&] { rc = run_verify(ver); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const fsdim::DomainError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return rc;
}
