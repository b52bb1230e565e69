#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/env.hpp"

namespace recirc {

struct EnvInfo {
    std::string name;
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    std::string compartment;  // position in the canonical network
    std::string role;
};

const std::vector<EnvInfo>& env_catalog();

// Builds an environment from its catalog name and a JSON parameter object
// (strict: unknown keys are rejected). Throws std::invalid_argument with the
// list of valid names when the name is unknown.
std::unique_ptr<Env> make_env(const std::string& name, const nlohmann::json& params,
                              std::uint64_t base_seed = 0);

}  // namespace recirc
