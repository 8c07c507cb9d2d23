#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sigdt/dataset.hpp"

namespace sigdt {

/// Reads the text feature format:
///
///     dims=<n>
///     writer_id,signature_id,kind,v1,...,vn
///
/// Throws ParseError naming the offending line.
Dataset read_features(std::istream& in, std::string name = {});
Dataset load_features(const std::filesystem::path& path);

void write_features(std::ostream& out, const Dataset& dataset);
void save_features(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace sigdt
