#pragma once

// Synthetic scaling family: n optional features, feature i adds i to a
// counter x exactly once. States are (x, fired-set) pairs; since x is the
// sum of the fired features it is carried in the state name and the labels.
// Every state is labeled xge0; states with x > 0 are labeled xgt0.

#include <string>

#include "vmc/models.hpp"

namespace vmc {

// Throws STATE_BUDGET when 2^n exceeds max_states.
Fts make_scaling_family(int n, size_t max_states = 1u << 19);

extern const char* kBenchDefaultProperty;  // "AF xge0"

}  // namespace vmc
