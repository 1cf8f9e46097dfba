#pragma once

#include <string>

#include "ubgspan/distsim.hpp"
#include "ubgspan/verify.hpp"

namespace ubgspan {
namespace io {

// Instance file: {"d", "alpha", "seed", "policy", "points", "edges"} with
// node ids implicit by position and edges stored with u < v.
std::string instance_to_json(const UbgInstance& inst);
UbgInstance instance_from_json(const std::string& text);
void write_instance(const UbgInstance& inst, const std::string& path);
UbgInstance read_instance(const std::string& path);

// Spanner file: {"t", "params", "edges", "phases"}.
std::string spanner_to_json(const RelaxedResult& result);
void write_spanner(const RelaxedResult& result, const std::string& path);

// Transcript file: {"rounds_total", "rounds_by_step", "max_payload_words",
// "edges"} plus the secondary round accounting.
std::string transcript_to_json(const SimTranscript& tr);
void write_transcript(const SimTranscript& tr, const std::string& path);

// Verification report: {check name -> {"pass", "value", "witness"}}.
std::string report_to_json(const verify::Report& report);

void write_text(const std::string& text, const std::string& path);
std::string read_text(const std::string& path);

}  // namespace io
}  // namespace ubgspan
