// SPDX-License-Identifier: Apache-2.0
//
// latred - lattice-reduction-aided MIMO detection toolkit
// Copyright (C) 2026 The latred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <string>

#include "latred/error.hpp"
#include "latred/linalg.hpp"
#include "latred/sim.hpp"

namespace latred::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

class MatrixFormatError : public Error {
  public:
    using Error::Error;
};

/// Matrix text format: a `rows cols` header line, then one line per row with
/// `cols` whitespace-separated `re,im` pairs. Blank lines and lines starting
/// with '#' are ignored.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const ComplexMatrix& m);

/// CSV with header snr_db,detector,arith,trials,bit_errors,bits_total,ber.
/// Locale independent; ber carries 12 significant digits.
std::string ber_csv(const SweepResult& result);

/// Golden vectors pinning the bit-exact CMUL and CORDIC behaviour.
std::string fxp_golden_vectors(std::uint64_t seed, std::size_t count);

/// Entry point of the `latred` tool. Subcommands: sweep, reduce,
/// cordic-check, opcount. The LATRED_SEED environment variable, when set,
/// overrides --seed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace latred::cli
