// Copyright 2026 The twistlab Authors
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

// Text formats: matrix files, named presets, weight lists and psi specs.

#ifndef TWISTLAB_IO_HPP
#define TWISTLAB_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "twistlab/core.hpp"

namespace twistlab {

// Golden ratio and friends at 42 significant digits.
inline constexpr const char* kGoldenRatioText = "1.61803398874989484820458683436563811772031";
inline constexpr const char* kSqrt2Text = "1.41421356237309504880168872420969807856967";
inline constexpr const char* kSqrt3Text = "1.73205080756887729352744634150587236694281";
// sum_k 10^{-k!} truncated after k = 4.
inline constexpr const char* kLiouvilleText = "0.110001000000000000000001000000000000000000";

// Presets: golden, sqrt2, sqrt2-sqrt3-row, liouville-like,
// rand-rational(seed,n,m,den).
MatrixSpec preset_matrix(std::string_view name);
std::vector<std::string> preset_names();

// Plain text: first line "n m", then n rows of m whitespace-separated entries.
// Each entry is "a/b" (exact) or a decimal (float); plain integers fit either
// kind. Mixed exact/float entries are rejected with line and column.
MatrixSpec parse_matrix_text(std::string_view text);
MatrixSpec load_matrix_file(const std::string& path);

// Preset name, "file:<path>", or an inline matrix "a,b;c,d" (rows split by ';').
MatrixSpec load_matrix(std::string_view source);

// "0.5,1.5" or "1/3,5/3"
WeightVector parse_weights(std::string_view text);
std::vector<Scalar> parse_scalar_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

// Psi spec: functions separated by ';', each "pow:c,tau" or
// "tab:r1=y1,r2=y2,...". A single function is replicated to n rows.
ApproxTuple parse_psi(std::string_view text, std::size_t n);

}  // namespace twistlab

#endif  // TWISTLAB_IO_HPP
