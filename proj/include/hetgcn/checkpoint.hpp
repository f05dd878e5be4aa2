#pragma once

#include <optional>
#include <string>

#include "hetgcn/optim.hpp"

namespace hetgcn {

// Versioned binary checkpoint: dims, edge-type ids and names, row-major
// matrices, optional optimizer state. Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const ModelParams& params, const AdamWState* state = nullptr);

struct Checkpoint {
    ModelParams params;
    std::optional<AdamWState> state;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace hetgcn
