// Copyright 2026 The scesep Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scesep::io {

/// One named row-major tensor of 64-bit floats.
struct NamedTensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

/// Binary tensor container shared by model checkpoints and SNMF dictionaries.
///
/// Layout, all integers little-endian:
///   magic[4] | version u32 | meta_len u32 | meta bytes (UTF-8 "key=value\n")
///   then until EOF, per tensor:
///   name_len u16 | name | rank u8 | dims u64 x rank | data f64 x prod(dims)
struct Container {
  std::array<char, 4> magic{};
  std::uint32_t version = 1;
  std::map<std::string, std::string> metadata;
  std::vector<NamedTensor> tensors;

  const NamedTensor& tensor(std::string_view name) const;
  const NamedTensor* find(std::string_view name) const;
  const std::string& meta(const std::string& key) const;
};

inline constexpr std::array<char, 4> kModelMagic{'S', 'C', 'E', 'M'};
inline constexpr std::array<char, 4> kDictionaryMagic{'S', 'N', 'M', 'F'};

void write_container(std::ostream& os, const Container& c);
void write_container(const std::filesystem::path& path, const Container& c);

/// Throws Format on magic mismatch, unsupported version or truncation.
Container read_container(std::istream& is, const std::array<char, 4>& expected_magic,
                         std::uint32_t max_version);
Container read_container(const std::filesystem::path& path,
                         const std::array<char, 4>& expected_magic, std::uint32_t max_version);

}  // namespace scesep::io
