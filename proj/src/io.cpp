#include "fsdim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fsdim {

namespace {

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) fail("MalformedFile", "expected a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        fail("MalformedFile", std::string("missing key '") + key + "'");
    return *it;
}

uint64_t uint_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer() || v.get<int64_t>() < 0)
        fail("MalformedFile", std::string("'") + key + "' must be a nonnegative integer");
    return v.get<uint64_t>();
}

const Json& array_field(const Json& j, const char* key, size_t want) {
    const Json& v = field(j, key);
    if (!v.is_array())
        fail("MalformedFile", std::string("'") + key + "' must be an array");
    if (v.size() != want)
        fail("MalformedFile", std::string("'") + key + "' must have " +
                                  std::to_string(want) + " entries, has " +
                                  std::to_string(v.size()));
    return v;
}

Rational rational_entry(const Json& v, const char* what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) {
        double d = v.get<double>();
        if (!std::isfinite(d))
            fail("MalformedFile", std::string(what) + " is not finite");
        return Rational(d);
    }
    fail("MalformedFile", std::string(what) + " must be a rational string or a number");
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("FileNotFound", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail("MalformedFile", "read error on '" + path + "'");
    return std::move(buf).str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("FileNotFound", "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) fail("MalformedFile", "write error on '" + path + "'");
}

Json load_json(const std::string& path) {
    std::string text = read_text_file(path);
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded())
        fail("MalformedFile", "'" + path + "' is not valid JSON");
    return j;
}

void save_json(const Json& j, const std::string& path) {
    write_text_file(path, j.dump(2) + "\n");
}

ProbabilityMeasure measure_from_json(const Json& j) {
    uint64_t k = uint_field(j, "k");
    if (k == 0 || k > kMaxAlphabet)
        fail("AlphabetMismatch", "k must be between 1 and " + std::to_string(kMaxAlphabet));
    const Json& p = field(j, "p");
    if (!p.is_array()) fail("MalformedFile", "'p' must be an array");
    if (p.size() != k)
        fail("AlphabetMismatch", "k is " + std::to_string(k) + " but 'p' has " +
                                     std::to_string(p.size()) + " entries");
    std::vector<Rational> weights;
    weights.reserve(k);
    Rational sum = 0;
    for (const Json& v : p) {
        weights.push_back(rational_entry(v, "measure entry"));
        sum += weights.back();
    }
    if (sum == 1) return ProbabilityMeasure::exact(std::move(weights));
    // off-by-rounding documents go through the tolerance window
    std::vector<double> approx;
    approx.reserve(k);
    for (const Rational& w : weights) approx.push_back(rational_to_double(w));
    return ProbabilityMeasure::approximate(approx);
}

Json measure_to_json(const ProbabilityMeasure& m) {
    Json j;
    j["k"] = m.alphabet_size();
    Json p = Json::array();
    for (const Rational& w : m.weights()) p.push_back(format_rational(w));
    j["p"] = std::move(p);
    return j;
}

ProbabilityMeasure load_measure(const std::string& path) {
    return measure_from_json(load_json(path));
}

void save_measure(const ProbabilityMeasure& m, const std::string& path) {
    save_json(measure_to_json(m), path);
}

FiniteStateGambler gambler_from_json(const Json& j) {
    uint64_t k = uint_field(j, "k");
    uint64_t states = uint_field(j, "states");
    uint64_t q0 = uint_field(j, "q0");
    const Json& trans = array_field(j, "transitions", states);
    const Json& bets = array_field(j, "bets", states);

    std::vector<std::vector<uint32_t>> delta(states);
    std::vector<std::vector<Rational>> b(states);
    for (size_t q = 0; q < states; ++q) {
        const Json& row = trans[q];
        if (!row.is_array() || row.size() != k)
            fail("MalformedFile", "transition row " + std::to_string(q) +
                                      " must have " + std::to_string(k) + " entries");
        for (const Json& t : row) {
            if (!t.is_number_integer() || t.get<int64_t>() < 0)
                fail("MalformedFile", "transitions must be nonnegative integers");
            delta[q].push_back(t.get<uint32_t>());
        }
        const Json& brow = bets[q];
        if (!brow.is_array() || brow.size() != k)
            fail("MalformedFile", "bet row " + std::to_string(q) + " must have " +
                                      std::to_string(k) + " entries");
        for (const Json& v : brow) b[q].push_back(rational_entry(v, "bet"));
    }
    return FiniteStateGambler(static_cast<uint32_t>(k), std::move(delta),
                              static_cast<uint32_t>(q0), std::move(b));
}

Json gambler_to_json(const FiniteStateGambler& g) {
    Json j;
    j["k"] = g.alphabet_size();
    j["states"] = g.state_count();
    j["q0"] = g.start_state();
    j["transitions"] = g.transitions();
    Json bets = Json::array();
    for (uint32_t q = 0; q < g.state_count(); ++q) {
        Json row = Json::array();
        for (Sym a = 0; a < g.alphabet_size(); ++a)
            row.push_back(format_rational(g.bet(q, a)));
        bets.push_back(std::move(row));
    }
    j["bets"] = std::move(bets);
    return j;
}

FiniteStateGambler load_gambler(const std::string& path) {
    return gambler_from_json(load_json(path));
}

void save_gambler(const FiniteStateGambler& g, const std::string& path) {
    save_json(gambler_to_json(g), path);
}

StoredCompressor compressor_from_json(const Json& j) {
    uint64_t k = uint_field(j, "k");
    uint64_t states = uint_field(j, "states");
    uint64_t q0 = uint_field(j, "q0");
    const Json& trans = array_field(j, "transitions", states);
    const Json& outs = array_field(j, "outputs", states);

    std::vector<std::vector<uint32_t>> delta(states);
    std::vector<std::vector<std::string>> out(states);
    for (size_t q = 0; q < states; ++q) {
        const Json& row = trans[q];
        if (!row.is_array() || row.size() != k)
            fail("MalformedFile", "transition row " + std::to_string(q) +
                                      " must have " + std::to_string(k) + " entries");
        for (const Json& t : row) {
            if (!t.is_number_integer() || t.get<int64_t>() < 0)
                fail("MalformedFile", "transitions must be nonnegative integers");
            delta[q].push_back(t.get<uint32_t>());
        }
        const Json& orow = outs[q];
        if (!orow.is_array() || orow.size() != k)
            fail("MalformedFile", "output row " + std::to_string(q) + " must have " +
                                      std::to_string(k) + " entries");
        for (const Json& v : orow) {
            if (!v.is_string()) fail("MalformedFile", "outputs must be strings");
            out[q].push_back(v.get<std::string>());
        }
    }

    StoredCompressor stored{
        FiniteStateCompressor(static_cast<uint32_t>(k), std::move(delta),
                              static_cast<uint32_t>(q0), std::move(out)),
        std::nullopt,
        {},
    };
    if (j.contains("block_len")) {
        uint64_t l = uint_field(j, "block_len");
        if (l == 0) fail("MalformedFile", "'block_len' must be at least 1");
        stored.block_len = static_cast<size_t>(l);
    }
    if (j.contains("tails")) {
        const Json& tails = array_field(j, "tails", states);
        for (const Json& t : tails) {
            if (!t.is_string()) fail("MalformedFile", "tails must be digit strings");
            stored.tails.push_back(t.get<std::string>());
        }
    }
    return stored;
}

Json compressor_to_json(const FiniteStateCompressor& c) {
    Json j;
    j["k"] = c.alphabet_size();
    j["states"] = c.state_count();
    j["q0"] = c.start_state();
    j["transitions"] = c.transitions();
    j["outputs"] = c.outputs();
    return j;
}

Json compressor_to_json(const CompressorFromGambler& c) {
    Json j = compressor_to_json(c.compressor);
    j["block_len"] = c.block_len;
    Json tails = Json::array();
    for (uint32_t q = 0; q < c.compressor.state_count(); ++q)
        tails.push_back(c.buffered_tail(q).digits());
    j["tails"] = std::move(tails);
    return j;
}

StoredCompressor load_compressor(const std::string& path) {
    return compressor_from_json(load_json(path));
}

void save_compressor(const FiniteStateCompressor& c, const std::string& path) {
    save_json(compressor_to_json(c), path);
}

void save_compressor(const CompressorFromGambler& c, const std::string& path) {
    save_json(compressor_to_json(c), path);
}

SymbolString load_sequence(const std::string& path, uint32_t k) {
    std::string text = read_text_file(path);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.pop_back();
    for (char ch : text)
        if (ch < '0' || ch > '9')
            fail("MalformedFile",
                 "'" + path + "' has a non-digit byte " + std::to_string(int(ch)));
    if (k == 0) {
        char top = '1';
        for (char ch : text) top = std::max(top, ch);
        k = static_cast<uint32_t>(top - '0') + 1;
    }
    return SymbolString::from_digits(k, text);
}

void save_sequence(const SymbolString& s, const std::string& path) {
    write_text_file(path, s.digits() + "\n");
}

Json trace_to_json(const GaleTrace& t) {
    Json j;
    j["grid"] = t.grid;
    j["log2_value"] = t.log2_values;
    j["state"] = t.states;
    j["tail_min"] = t.tail_min;
    j["tail_max"] = t.tail_max;
    return j;
}

Json dimension_estimate_to_json(const DimensionEstimate& e) {
    Json j;
    j["lower"] = e.lower;
    j["upper"] = e.upper;
    Json per = Json::array();
    for (const BlockEntropyTrace& t : e.per_block_len) {
        Json row;
        row["block_len"] = t.block_len;
        row["grid"] = t.grid;
        row["entropy_bits"] = t.entropy_bits;
        row["rates"] = t.rates;
        row["tail_min"] = t.tail_min;
        row["tail_max"] = t.tail_max;
        per.push_back(std::move(row));
    }
    j["per_block_len"] = std::move(per);
    return j;
}

Json beta_estimate_to_json(const BetaDimensionEstimate& e) {
    Json j;
    j["route"] = e.route == BetaRoute::entropy ? "entropy" : "compression";
    j["value"] = e.value();
    j["alpha_hat"] = measure_to_json(e.alpha_hat);
    j["denominator"] = e.denominator;
    j["entropy_route"] = {{"lower", e.entropy_route_lower},
                          {"upper", e.entropy_route_upper}};
    Json per = Json::array();
    for (const CompressionRouteEntry& c : e.compression_per_block_len) {
        Json row;
        row["block_len"] = c.block_len;
        row["compressed_bits"] = c.compressed_bits;
        row["ratio"] = c.ratio;
        per.push_back(std::move(row));
    }
    j["compression_route"] = {{"value", e.compression_route},
                              {"per_block_len", std::move(per)}};
    j["block_entropy"] = dimension_estimate_to_json(e.fs_dim);
    return j;
}

Json report_to_json(const DimensionReport& r) {
    Json j;
    j["tool_version"] = r.tool_version;
    j["config"] = {
        {"command", "verify"},
        {"k", r.k},
        {"alpha", measure_to_json(r.alpha)},
        {"beta", measure_to_json(r.beta)},
        {"n", r.n},
        {"seed", r.seed},
        {"l_max", r.l_max},
        {"grid_points", r.grid_points},
        {"generator", r.generator},
        {"tolerances",
         {{"entropy_route", r.tol.entropy_route},
          {"dimension_gap", r.tol.dimension_gap},
          {"residual", r.tol.residual},
          {"cross_route", r.tol.cross_route}}},
    };
    j["prediction"] = {
        {"entropy_bits", r.info.entropy_bits},
        {"divergence_bits", r.info.divergence_bits},
        {"entropy_base_k", r.info.entropy_base_k},
        {"divergence_base_k", r.info.divergence_base_k},
        {"formula_value", r.info.formula_value},
    };
    j["estimate"] = beta_estimate_to_json(r.estimate);
    j["checks"] = {
        {"dimension_gap_lower", r.dimension_gap_lower},
        {"dimension_gap_upper", r.dimension_gap_upper},
        {"frequency_residual", r.frequency_residual},
    };
    j["pass"] = {
        {"entropy_route", r.pass_entropy_route},
        {"dimension_gap", r.pass_dimension_gap},
        {"residual", r.pass_residual},
        {"cross_route", r.pass_cross_route},
        {"all", r.pass},
    };
    return j;
}

std::string report_to_csv(const DimensionReport& r) {
    std::ostringstream csv;
    csv << "kind,name,block_len,blocks,value\n";
    auto row = [&csv](const char* kind, const std::string& name,
                      const std::string& l, const std::string& n,
                      const std::string& value) {
        csv << kind << ',' << name << ',' << l << ',' << n << ',' << value << '\n';
    };
    auto num = [](auto v) { return std::to_string(v); };

    row("config", "k", "", "", num(r.k));
    row("config", "n", "", "", num(r.n));
    row("config", "seed", "", "", num(r.seed));
    row("config", "l_max", "", "", num(r.l_max));
    row("config", "grid_points", "", "", num(r.grid_points));

    row("prediction", "entropy_bits", "", "", shortest(r.info.entropy_bits));
    row("prediction", "divergence_bits", "", "", shortest(r.info.divergence_bits));
    row("prediction", "entropy_base_k", "", "", shortest(r.info.entropy_base_k));
    row("prediction", "divergence_base_k", "", "", shortest(r.info.divergence_base_k));
    row("prediction", "formula_value", "", "", shortest(r.info.formula_value));

    for (const BlockEntropyTrace& t : r.estimate.fs_dim.per_block_len) {
        for (size_t i = 0; i < t.grid.size(); ++i) {
            row("block_entropy", "entropy_bits", num(t.block_len), num(t.grid[i]),
                shortest(t.entropy_bits[i]));
            row("block_entropy", "rate", num(t.block_len), num(t.grid[i]),
                shortest(t.rates[i]));
        }
        row("block_entropy", "tail_min", num(t.block_len), "", shortest(t.tail_min));
        row("block_entropy", "tail_max", num(t.block_len), "", shortest(t.tail_max));
    }
    for (const CompressionRouteEntry& c : r.estimate.compression_per_block_len) {
        row("compression", "bits", num(c.block_len), "", num(c.compressed_bits));
        row("compression", "ratio", num(c.block_len), "", shortest(c.ratio));
    }

    row("estimate", "dimension_lower", "", "", shortest(r.estimate.fs_dim.lower));
    row("estimate", "dimension_upper", "", "", shortest(r.estimate.fs_dim.upper));
    row("estimate", "denominator", "", "", shortest(r.estimate.denominator));
    row("estimate", "entropy_route_lower", "", "",
        shortest(r.estimate.entropy_route_lower));
    row("estimate", "entropy_route_upper", "", "",
        shortest(r.estimate.entropy_route_upper));
    row("estimate", "compression_route", "", "",
        shortest(r.estimate.compression_route));

    row("check", "dimension_gap_lower", "", "", shortest(r.dimension_gap_lower));
    row("check", "dimension_gap_upper", "", "", shortest(r.dimension_gap_upper));
    row("check", "frequency_residual", "", "", shortest(r.frequency_residual));

    row("pass", "entropy_route", "", "", r.pass_entropy_route ? "1" : "0");
    row("pass", "dimension_gap", "", "", r.pass_dimension_gap ? "1" : "0");
    row("pass", "residual", "", "", r.pass_residual ? "1" : "0");
    row("pass", "cross_route", "", "", r.pass_cross_route ? "1" : "0");
    row("pass", "all", "", "", r.pass ? "1" : "0");
    return std::move(csv).str();
}

}  // namespace fsdim
