#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsdim/compressors.hpp"
#include "fsdim/estimators.hpp"
#include "fsdim/gales.hpp"
#include "fsdim/measures.hpp"
#include "fsdim/symbols.hpp"

namespace fsdim {

// Insertion-ordered so serialized documents are byte-stable across runs.
using Json = nlohmann::ordered_json;

// File-level errors are FileNotFound / MalformedFile; schema-level errors use
// the owning module's names (AlphabetMismatch, NonNormalizedMeasure, ...).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

// Measure document: {"k": 2, "p": ["3/4", "1/4"]}. Entries are rational
// strings (exact) or plain numbers; an all-rational vector summing to exactly
// one loads in exact mode.
ProbabilityMeasure measure_from_json(const Json& j);
Json measure_to_json(const ProbabilityMeasure& m);
ProbabilityMeasure load_measure(const std::string& path);
void save_measure(const ProbabilityMeasure& m, const std::string& path);

// Gambler document: k, states, q0, transitions (k state indices per state),
// bets (k rationals per state).
FiniteStateGambler gambler_from_json(const Json& j);
Json gambler_to_json(const FiniteStateGambler& g);
FiniteStateGambler load_gambler(const std::string& path);
void save_gambler(const FiniteStateGambler& g, const std::string& path);

// Compressor document: k, states, q0, transitions, outputs (binary strings,
// "" for no emission). Block coders produced by conversion additionally carry
// block_len and the per-state buffered tail, which is what lets a later
// `compress --flush` run emit standalone-decodable output from the file alone.
struct StoredCompressor {
    FiniteStateCompressor compressor;
    std::optional<size_t> block_len;
    std::vector<std::string> tails;  // digit strings, parallel to states
};

StoredCompressor compressor_from_json(const Json& j);
Json compressor_to_json(const FiniteStateCompressor& c);
Json compressor_to_json(const CompressorFromGambler& c);
StoredCompressor load_compressor(const std::string& path);
void save_compressor(const FiniteStateCompressor& c, const std::string& path);
void save_compressor(const CompressorFromGambler& c, const std::string& path);

// Sequence file: one ASCII digit per symbol, '0'..'9', trailing newline
// ignored. k = 0 infers the alphabet as max digit + 1 (floor 2).
SymbolString load_sequence(const std::string& path, uint32_t k = 0);
void save_sequence(const SymbolString& s, const std::string& path);

Json trace_to_json(const GaleTrace& t);
Json dimension_estimate_to_json(const DimensionEstimate& e);
Json beta_estimate_to_json(const BetaDimensionEstimate& e);

// Full verification report, config included, suitable for reruns.
Json report_to_json(const DimensionReport& r);

// Long-format CSV: kind,name,block_len,blocks,value with one row per
// (metric, block length, grid point) cell plus summary rows.
std::string report_to_csv(const DimensionReport& r);

}  // namespace fsdim
