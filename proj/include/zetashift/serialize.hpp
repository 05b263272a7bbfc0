#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "zetashift/kronecker.hpp"
#include "zetashift/scanner.hpp"
#include "zetashift/transfer.hpp"

namespace zetashift::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Throws SchemaError if `j` is not an object or carries a key outside `allowed`.
void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

/// Required member; SchemaError when missing or of the wrong type.
template <typename T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::SchemaError, where + ": missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::SchemaError, where + ": '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const Json& j);

Json to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

Json to_json(const ZSpec& z);
ZSpec zspec_from_json(const Json& j, const std::string& where = "zspec");

Json to_json(const PolynomialTarget& p);
PolynomialTarget polynomial_from_json(const Json& j, const std::string& where);
Json to_json(const MixedTarget& t);
MixedTarget target_from_json(const Json& j, const std::string& where = "target");

Json to_json(const CompactRegion& r);
CompactRegion region_from_json(const Json& j, const std::string& where = "region");
Strip strip_from_json(const Json& j, const std::string& where = "strip");

/// M1 is kept as the pair (3N, 1/M) so the stored value is reproducible.
Json to_json(const TowerParams& p);
TowerParams tower_from_json(const Json& j, const std::string& where = "tower");

HybridConstraint hybrid_from_json(const Json& j, double epsilon, const std::string& where = "hybrid");
Json to_json(const HybridConstraint& h);
OmegaSpec omega_from_json(const Json& j, const std::string& where = "omega");

Json to_json(const DiscreteWitnessSet& ws);
Json to_json(const ContinuousWitnessSet& ws);
DiscreteWitnessSet discrete_from_json(const Json& j, const std::string& where);
ContinuousWitnessSet continuous_from_json(const Json& j, const std::string& where);

Json to_json(const TransferConstants& tc);
TransferConstants constants_from_json(const Json& j, const std::string& where = "constants");

Json to_json(const CountingReport& r);
/// j, then lhs/rhs/holds for the literal, tight and scaled variants.
std::string counting_csv(const CountingReport& r, const std::string& hash);
Json to_json(const DensityReport& r);
Json to_json(const CoveringResult& r);
Json to_json(const IndependenceReport& r);
Json to_json(const ModulusResult& r);

/// shift, sup_distance, hybrid_max, pass, then index, lipschitz, level.
std::string scan_csv(const std::vector<ScanRow>& rows, const std::string& hash);

/// %.17g
std::string format_double(double x);

}  // namespace zetashift::io
