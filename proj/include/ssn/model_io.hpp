#pragma once

#include <filesystem>
#include <iosfwd>

#include "ssn/model.hpp"

namespace ssn {

inline constexpr int kModelFormatVersion = 1;

/// Writes the text container described in docs/model_format.md. Every double
/// is stored as its 64-bit IEEE-754 pattern, so a round trip is bit-exact.
void save_model(const Model& model, const std::filesystem::path& path);
void write_model(const Model& model, std::ostream& out);

/// Throws ssn::Error on a version mismatch, truncation, unknown block or
/// inconsistent shapes. Nothing is returned unless the whole file parsed.
Model load_model(const std::filesystem::path& path);
Model read_model(std::istream& in);

}  // namespace ssn
