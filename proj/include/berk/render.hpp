#pragma once

// Report serialization: a human-readable narrative, a stable JSON document
// (schema_version 1), and a DOT drawing of the reduction model with the bad
// locus attached to its boundary vertices.

#include <string>

#include "berk/analyze.hpp"

namespace berk {

enum class OutputFormat { Text, Json, Dot };

std::string render(const HasseReport& r, OutputFormat format);

}  // namespace berk
