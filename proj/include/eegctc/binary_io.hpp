// eegctc/binary_io.hpp

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

#ifndef EEGCTC_BINARY_IO_HPP_
#define EEGCTC_BINARY_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "eegctc/types.hpp"

namespace eegctc {

// Little-endian writer for the project's binary artifacts (recordings,
// feature files, KPCA models, checkpoints). Failures raise ErrorKind::kIo
// with the file path in the message.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path);

  void put_u8(std::uint8_t value);
  void put_u32(std::uint32_t value);
  void put_u64(std::uint64_t value);
  void put_f64(double value);
  void put_bytes(std::string_view bytes);
  // u64 length followed by the raw bytes.
  void put_string(std::string_view text);
  // Row-major element order regardless of the Eigen storage order.
  template <typename Derived>
  void put_values(const Eigen::DenseBase<Derived>& values) {
    for (Index r = 0; r < values.rows(); ++r)
      for (Index c = 0; c < values.cols(); ++c) put_f64(values(r, c));
  }
  // u64 rows, u64 cols, then row-major values.
  template <typename Derived>
  void put_matrix(const Eigen::DenseBase<Derived>& values) {
    put_u64(static_cast<std::uint64_t>(values.rows()));
    put_u64(static_cast<std::uint64_t>(values.cols()));
    put_values(values);
  }

  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path);

  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  double get_f64();
  std::string get_bytes(std::size_t count);
  std::string get_string();
  void get_values(Eigen::Ref<MatrixXd> values);
  void get_values(Eigen::Ref<FramesXd> values);
  MatrixXd get_matrix();
  // Throws unless every byte has been consumed.
  void expect_end();

 private:
  void read_raw(char* dst, std::size_t count);

  std::filesystem::path path_;
  std::ifstream in_;
};

/// Reads a file of little-endian f64 values, row-major [rows x cols].
FramesXd read_f64_matrix(const std::filesystem::path& path, Index rows,
                         Index cols);
void write_f64_matrix(const std::filesystem::path& path,
                      const Eigen::Ref<const FramesXd>& values);

}  // namespace eegctc

#endif  // EEGCTC_BINARY_IO_HPP_
