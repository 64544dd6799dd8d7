#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "confbb/model.hpp"

namespace confbb {

// Families tuned to produce many infeasible subproblems at small sizes.
enum class Family {
  kMarkshareLike,         // try to split random weights into two equal halves
  kBinPackingInfeasible,  // two bins; every integral packing overflows by one
  kRandomSetcover,        // cover rows with density 0.3, minimize column cost
};

std::optional<Family> family_from_string(std::string_view name);
const char* family_name(Family f);

// Deterministic in (family, size, seed): equal arguments produce equal
// models, hence byte-identical MPS files.  size counts binary decision
// columns for markshare-like/setcover and items for bin packing; minimum
// size 3.  Throws std::invalid_argument on a size below the minimum.
MipModel generate_instance(Family f, int size, uint64_t seed);

}  // namespace confbb
