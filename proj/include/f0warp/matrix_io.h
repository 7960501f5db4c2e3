// f0warp/matrix_io.h

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

// Binary matrix files (.mwf):
//
//   offset 0   "MWF1"
//   offset 4   rows, uint32 little endian
//   offset 8   cols, uint32 little endian
//   offset 12  rows * cols IEEE-754 float32, little endian, row major

#ifndef F0WARP_MATRIX_IO_H_
#define F0WARP_MATRIX_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "f0warp/common.h"

namespace f0warp {

inline constexpr std::string_view kMatrixMagic = "MWF1";
inline constexpr std::string_view kMatrixExtension = ".mwf";

std::string encode_matrix(const Matrix<float>& m);
// Throws kCorruptFile on a bad magic or a size mismatch.
Matrix<float> decode_matrix(std::string_view bytes);

void write_matrix(const std::filesystem::path& path, const Matrix<float>& m);
Matrix<float> read_matrix(const std::filesystem::path& path);

}  // namespace f0warp

#endif  // F0WARP_MATRIX_IO_H_
