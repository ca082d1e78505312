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

#include "scesep/io/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "scesep/common/error.hpp"

namespace scesep::io {

namespace {

template <typename T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_unsigned_v<T>);
  char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) {
    throw Error(Errc::kFormat, "truncated container");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

}  // namespace

const NamedTensor* Container::find(std::string_view name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const NamedTensor& Container::tensor(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw Error(Errc::kFormat, "missing tensor '" + std::string(name) + "'");
}

const std::string& Container::meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) throw Error(Errc::kFormat, "missing metadata key '" + key + "'");
  return it->second;
}

void write_container(std::ostream& os, const Container& c) {
  os.write(c.magic.data(), 4);
  put_le<std::uint32_t>(os, c.version);
  std::string meta;
  for (const auto& [k, v] : c.metadata) meta += k + "=" + v + "\n";
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(meta.size()));
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (const auto& t : c.tensors) {
    std::uint64_t count = 1;
    for (auto d : t.dims) count *= d;
    if (count != t.data.size()) {
      throw Error(Errc::kShapeMismatch, "tensor '" + t.name + "' dims do not match data");
    }
    put_le<std::uint16_t>(os, static_cast<std::uint16_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) put_le<std::uint64_t>(os, d);
    for (double x : t.data) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(x));
  }
}

void write_container(const std::filesystem::path& path, const Container& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  write_container(out, c);
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

Container read_container(std::istream& is, const std::array<char, 4>& expected_magic,
                         std::uint32_t max_version) {
  Container c;
  if (!is.read(c.magic.data(), 4)) throw Error(Errc::kFormat, "truncated container header");
  if (c.magic != expected_magic) {
    throw Error(Errc::kFormat, "bad magic '" + std::string(c.magic.data(), 4) + "', expected '" +
                                   std::string(expected_magic.data(), 4) + "'");
  }
  c.version = get_le<std::uint32_t>(is);
  if (c.version == 0 || c.version > max_version) {
    throw Error(Errc::kFormat, "unsupported container version " + std::to_string(c.version));
  }
  const auto meta_len = get_le<std::uint32_t>(is);
  std::string meta(meta_len, '\0');
  if (!is.read(meta.data(), meta_len)) throw Error(Errc::kFormat, "truncated metadata");
  std::istringstream lines(meta);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::kFormat, "bad metadata line '" + line + "'");
    c.metadata[line.substr(0, eq)] = line.substr(eq + 1);
  }
  while (is.peek() != std::char_traits<char>::eof()) {
    NamedTensor t;
    const auto name_len = get_le<std::uint16_t>(is);
    t.name.resize(name_len);
    if (!is.read(t.name.data(), name_len)) throw Error(Errc::kFormat, "truncated tensor name");
    const auto rank = get_le<std::uint8_t>(is);
    std::uint64_t count = 1;
    for (std::uint8_t r = 0; r < rank; ++r) {
      t.dims.push_back(get_le<std::uint64_t>(is));
      count *= t.dims.back();
    }
    if (count > (std::uint64_t{1} << 34)) throw Error(Errc::kFormat, "implausible tensor size");
    t.data.resize(count);
    for (auto& x : t.data) x = std::bit_cast<double>(get_le<std::uint64_t>(is));
    c.tensors.push_back(std::move(t));
  }
  return c;
}

Container read_container(const std::filesystem::path& path,
                         const std::array<char, 4>& expected_magic, std::uint32_t max_version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return read_container(in, expected_magic, max_version);
}

}  // namespace scesep::io
