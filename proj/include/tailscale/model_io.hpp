#pragma once

#include <optional>
#include <string>

#include "tailscale/levy.hpp"

namespace tailscale {

/// Model file: {"A": {"kind":"poisson","lambda":1.0,"d":1.0},
///              "B": {"kind":"gamma","r":1.0,"mu":2.0}, "f": 1.5}
struct ModelSpec {
  ModelPair model;
  std::optional<double> f;
};

ModelSpec parse_model_json(const std::string& text);
ModelSpec load_model_json(const std::string& path);
std::string to_model_json(const ModelPair& model, std::optional<double> f = std::nullopt);

}  // namespace tailscale
