// include/hlr/io.hpp

// Copyright 2026  The hlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hlr::io {

std::string read_file(const std::filesystem::path& path);

/// Write via a temporary sibling and rename, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// FNV-1a 64 of the file contents, as 16 lowercase hex digits.
std::string content_hash(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

/// Split on a single-character delimiter; no quoting.
std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);

/// Shortest decimal form that parses back to the same value.
std::string format_double(double v);
std::string format_float(float v);

}  // namespace hlr::io
