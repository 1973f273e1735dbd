#pragma once

#include <string>

#include <json.hpp>

#include "cstomo/analysis.hpp"
#include "cstomo/data.hpp"
#include "cstomo/dfe.hpp"
#include "cstomo/model_selection.hpp"
#include "cstomo/solver.hpp"

namespace cstomo {

using Json = nlohmann::ordered_json;

Json to_json(const DensityMatrix& rho);
Json to_json(const SettingsPlan& plan);
Json to_json(const Dataset& data);
Json to_json(const ReconstructionResult& result);
Json to_json(const FidelityEstimate& estimate);
Json to_json(const PauliCoefficients& coefficients);
Json to_json(const CrossValReport& report);
Json to_json(const BootstrapReport& report);
Json to_json(const SweepReport& report);

/// Parsers throw invalid-argument on malformed input, or invalid-state when
/// a matrix is not a density matrix.
DensityMatrix density_matrix_from_json(const Json& j);
SettingsPlan settings_plan_from_json(const Json& j);
Dataset dataset_from_json(const Json& j);

// CSV, header line first.
//   dataset:    word,outcome,count
//   crossval:   m,epsilon_multiplier,mean_error,std_error,infeasible_fraction,noise_floor,evaluations,failures,status
//   bootstrap:  repetition,fidelity
//   sweep:      m,epsilon_multiplier,fidelity_mean,fidelity_std,infeasible_fraction,bootstrap_std,samples,failures,status
std::string to_csv(const Dataset& data);
std::string to_csv(const CrossValReport& report);
std::string to_csv(const BootstrapReport& report);
std::string to_csv(const SweepReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
Json read_json_file(const std::string& path);

/// JSON text with two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace cstomo
