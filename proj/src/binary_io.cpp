// src/binary_io.cpp

// Copyright 2026  The eegctc Authors

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

#include "eegctc/binary_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>

#include "eegctc/error.hpp"

namespace eegctc {

namespace {

template <typename T>
std::array<char, sizeof(T)> to_le_bytes(T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  return bytes;
}

template <typename T>
T from_le_bytes(std::array<char, sizeof(T)> bytes) {
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

BinaryWriter::BinaryWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
}

void BinaryWriter::put_u8(std::uint8_t value) {
  out_.put(static_cast<char>(value));
}

void BinaryWriter::put_u32(std::uint32_t value) {
  const auto bytes = to_le_bytes(value);
  out_.write(bytes.data(), bytes.size());
}

void BinaryWriter::put_u64(std::uint64_t value) {
  const auto bytes = to_le_bytes(value);
  out_.write(bytes.data(), bytes.size());
}

void BinaryWriter::put_f64(double value) {
  const auto bytes = to_le_bytes(value);
  out_.write(bytes.data(), bytes.size());
}

void BinaryWriter::put_bytes(std::string_view bytes) {
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void BinaryWriter::put_string(std::string_view text) {
  put_u64(text.size());
  put_bytes(text);
}

void BinaryWriter::close() {
  out_.flush();
  if (!out_) fail(ErrorKind::kIo, "write failed for '" + path_.string() + "'");
  out_.close();
}

BinaryReader::BinaryReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
}

void BinaryReader::read_raw(char* dst, std::size_t count) {
  in_.read(dst, static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in_.gcount()) != count)
    fail(ErrorKind::kIo, "unexpected end of file in '" + path_.string() + "'");
}

std::uint8_t BinaryReader::get_u8() {
  char c;
  read_raw(&c, 1);
  return static_cast<std::uint8_t>(c);
}

std::uint32_t BinaryReader::get_u32() {
  std::array<char, 4> bytes;
  read_raw(bytes.data(), bytes.size());
  return from_le_bytes<std::uint32_t>(bytes);
}

std::uint64_t BinaryReader::get_u64() {
  std::array<char, 8> bytes;
  read_raw(bytes.data(), bytes.size());
  return from_le_bytes<std::uint64_t>(bytes);
}

double BinaryReader::get_f64() {
  std::array<char, 8> bytes;
  read_raw(bytes.data(), bytes.size());
  return from_le_bytes<double>(bytes);
}

std::string BinaryReader::get_bytes(std::size_t count) {
  std::string bytes(count, '\0');
  read_raw(bytes.data(), count);
  return bytes;
}

std::string BinaryReader::get_string() {
  const std::uint64_t size = get_u64();
  if (size > (1u << 24))
    fail(ErrorKind::kIo, "implausible string length in '" + path_.string() + "'");
  return get_bytes(size);
}

void BinaryReader::get_values(Eigen::Ref<MatrixXd> values) {
  for (Index r = 0; r < values.rows(); ++r)
    for (Index c = 0; c < values.cols(); ++c) values(r, c) = get_f64();
}

void BinaryReader::get_values(Eigen::Ref<FramesXd> values) {
  for (Index r = 0; r < values.rows(); ++r)
    for (Index c = 0; c < values.cols(); ++c) values(r, c) = get_f64();
}

MatrixXd BinaryReader::get_matrix() {
  const auto rows = static_cast<Index>(get_u64());
  const auto cols = static_cast<Index>(get_u64());
  if (rows < 0 || cols < 0 || (rows > 0 && cols > (Index{1} << 40) / rows))
    fail(ErrorKind::kIo, "implausible matrix shape in '" + path_.string() + "'");
  MatrixXd values(rows, cols);
  get_values(values);
  return values;
}

void BinaryReader::expect_end() {
  if (in_.peek() != std::char_traits<char>::eof())
    fail(ErrorKind::kIo, "trailing bytes in '" + path_.string() + "'");
}

FramesXd read_f64_matrix(const std::filesystem::path& path, Index rows,
                         Index cols) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) fail(ErrorKind::kIo, "cannot stat '" + path.string() + "'");
  if (size != static_cast<std::uintmax_t>(rows * cols) * sizeof(double))
    fail(ErrorKind::kIo, "'" + path.string() + "' holds " + std::to_string(size) +
                             " bytes, expected " +
                             std::to_string(rows * cols * 8));
  BinaryReader reader(path);
  FramesXd values(rows, cols);
  reader.get_values(values);
  return values;
}

void write_f64_matrix(const std::filesystem::path& path,
                      const Eigen::Ref<const FramesXd>& values) {
  BinaryWriter writer(path);
  writer.put_values(values);
  writer.close();
}

}  // namespace eegctc
