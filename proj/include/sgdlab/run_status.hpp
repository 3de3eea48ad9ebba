#pragma once

#include <cstdint>
#include <optional>

namespace sgdlab {

enum class RunOutcome { completed, diverged, degenerate };

struct RunStatus {
    RunOutcome outcome = RunOutcome::completed;
    std::int64_t steps_executed = 0;
    std::optional<std::int64_t> divergence_step;
};

}  // namespace sgdlab
