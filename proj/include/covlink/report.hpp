#pragma once

#include <cstdint>
#include <string>

#include "covlink/engine.hpp"
#include "covlink/instance.hpp"

namespace covlink {

// Deterministic result JSON: fixed key order, %.17g numerics, no wall-time
// dependence outside the stats.time_* fields.
std::string result_to_json(const SolveResult& result, const Instance& inst,
                           const GraphStructure& structure);

// Drawing of one solve: demand dots, translucent coverage disks, facility
// crosses and link segments. Deterministic byte output.
std::string solution_to_svg(const SolveResult& result, const Instance& inst,
                            const GraphStructure& structure);

// FNV-1a content hash used to identify instance files in run records.
std::uint64_t content_hash(std::string_view text);
std::string hash_hex(std::uint64_t h);

}  // namespace covlink
