// f0warp/matrix_io.cc

// Copyright 2026 The f0warp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "f0warp/matrix_io.h"

#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

namespace f0warp {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_matrix(const Matrix<float>& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (m.rows() > kMax || m.cols() > kMax)
    throw Error(ErrorCode::kIoError, "matrix too large for the MWF1 format");
  std::string out;
  out.reserve(12 + 4 * m.data().size());
  out += kMatrixMagic;
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (float v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Matrix<float> decode_matrix(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != kMatrixMagic)
    throw Error(ErrorCode::kCorruptFile, "not an MWF1 matrix file");
  const std::size_t rows = get_u32(bytes, 4);
  const std::size_t cols = get_u32(bytes, 8);
  if (bytes.size() != 12 + 4 * rows * cols)
    throw Error(ErrorCode::kCorruptFile,
                "MWF1 payload size does not match " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  Matrix<float> m(rows, cols);
  auto data = m.data();
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = std::bit_cast<float>(get_u32(bytes, 12 + 4 * i));
  return m;
}

void write_matrix(const std::filesystem::path& path, const Matrix<float>& m) {
  const std::string bytes = encode_matrix(m);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

Matrix<float> read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_matrix(ss.str());
}

}  // namespace f0warp
