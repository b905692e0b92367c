#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "freegeo/free_space.hpp"
#include "freegeo/lip_function.hpp"
#include "freegeo/metric_space.hpp"
#include "freegeo/pair_geometry.hpp"
#include "freegeo/ssd.hpp"

namespace freegeo::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. Throws Error with the path on failure.
Json read_json(const std::string& path);

// Space documents: {"n": 3, "labels": [...], "dist": [[...]], "exact": [["1/2", ...]]}.
// "n", "labels" and "exact" are optional; "exact" entries are "p/q" strings.

/// Matrix only, no validation (for the validate command).
DistanceMatrix matrix_from_json(const Json& j);
PointedMetricSpace space_from_json(const Json& j);
Json to_json(const PointedMetricSpace& space);

/// {"values": [...]} with one value per point.
LipFunction function_from_json(const Json& j, const PointedMetricSpace& space);
Json to_json(const LipFunction& f);

/// {"masses": [...]} or {"molecules": [{"lambda": .., "x": .., "y": ..}, ...]}.
FreeElement element_from_json(const Json& j, const PointedMetricSpace& space);
bool has_molecules(const Json& j);
MoleculeCombination combination_from_json(const Json& j);
Json to_json(const FreeElement& mu);
Json to_json(const MoleculeCombination& c);

Json to_json(const ValidationReport& r);
Json to_json(const LpSolution& s);
Json to_json(const NormCertificate& c);
Json to_json(const PairGeometryReport& r);
Json to_json(const SpaceClassification& c);
Json to_json(const Check& c);
Json to_json(const std::vector<Check>& checks);
Json to_json(const ModulusCurve& c);
Json to_json(const Ssd1Result& r);
Json to_json(const Main1Setup& s);
Json to_json(const PerturbationResult& r);
Json to_json(const CorollaryWitness& w);
Json to_json(const PetrCertificate& c);

/// Finite doubles as numbers, infinities as the strings "inf"/"-inf", NaN as null.
Json number(double v);

std::string curve_csv(const ModulusCurve& c);
std::string trend_csv(const std::vector<TrendRow>& rows);

}  // namespace freegeo::io
