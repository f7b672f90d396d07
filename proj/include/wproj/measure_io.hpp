#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"
#include "wproj/measures.hpp"
#include "wproj/transport.hpp"

namespace wproj {

using AnyMeasure = std::variant<DiscreteMeasure, GridMeasure, BallUnionMeasure>;

/// JSON forms:
///   {"type":"discrete","dim":d,"points":[[...]],"weights":[...]}
///   {"type":"grid","origin":[...],"spacing":[...],"shape":[...],"cell_mass":[...],"lambda":x}
///   {"type":"ball_union","centers":[[...]],"radii":[...],"lambda":x}
/// Grid measures carry an optional "in_k" flag (default true) recording
/// whether the cell masses respect lambda.
nlohmann::json to_json(const AnyMeasure& m);
AnyMeasure measure_from_json(const nlohmann::json& j);  // ParseError, plus constructor errors

AnyMeasure read_measure(const std::filesystem::path& path);
void write_measure(const std::filesystem::path& path, const AnyMeasure& m);

/// {"entries":[[i,j,mass],...]}
nlohmann::json plan_to_json(const TransportPlan& plan);
std::vector<TransportPlan::Entry> plan_entries_from_json(const nlohmann::json& j);

/// Discrete view of any measure: grids become their occupied cell centers,
/// ball unions are sampled with n points and the given seed.
DiscreteMeasure as_discrete(const AnyMeasure& m, std::size_t n, std::uint64_t seed);

int dim_of(const AnyMeasure& m);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace wproj
