#ifndef ANISOSTABLE_CONFIG_HPP
#define ANISOSTABLE_CONFIG_HPP

#include <string>

#include "anisostable/spectral_measure.hpp"

namespace astab {

// Model configuration document:
//   {"d": 2, "alpha": 1.0,
//    "mu": {"kind": "atomic", "atoms": [{"dir": [1, 0], "w": 0.5}, ...]}}
// or {"kind": "density", "density": {"grid_points": 64, "values": [...]}}.
// Unknown keys are rejected.
ModelParams parse_model_json(const std::string& text);
ModelParams load_model_config(const std::string& path);

// canonical textual form (used by reports)
std::string model_to_json(const ModelParams& m);

} // namespace astab

#endif
