#pragma once

#include <string>

#include "film/energy.hpp"
#include "film/field.hpp"

namespace film {

enum class DumpEncoding { csv, binary };

// One header line of JSON (grid, spacings, params, encoding), then the flat
// row-major arrays u, v, w and the support mask, either as one CSV line per
// array or as a little-endian float64 block followed by one byte per mask entry.
void write_field(const std::string& path, const DisplacementField& f, DumpEncoding encoding = DumpEncoding::csv);
DisplacementField read_field(const std::string& path);

std::string energy_json(const EnergyBreakdown& e);

}  // namespace film
